use milnor_core::curvature::{closed_form_ricci, ricci_in_frame};
use milnor_core::derivations::{derivation_basis, is_derivation, pattern_check};
use milnor_core::lie::{BasisChange, Family, LieAlgebra};
use milnor_core::linalg::Matrix;
use milnor_core::metric::{gram_to_group_element, GramMatrix};
use milnor_core::reduction::{reduce, reduce_group_element, representative, validate_aut_element};
use milnor_core::sampling::{metric_in_orbit, random_automorphism, random_orthogonal, XorShift64Star};
use proptest::prelude::*;

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![Just(Family::Rh2SumAbelian), Just(Family::RhLineSum)]
}

/// `I + 0.3 U`, U uniform in [−1,1): condition number stays modest.
fn near_identity(rng: &mut XorShift64Star, n: usize) -> Matrix {
    Matrix::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 } + 0.3 * rng.uniform(-1.0, 1.0))
}

fn vector(rng: &mut XorShift64Star, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.uniform(-2.0, 2.0)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn change_of_basis_round_trips(f in family(), n in 3usize..=6, lam in 0.0f64..5.0, seed: u64) {
        let mut rng = XorShift64Star::new(seed);
        let alg = LieAlgebra::milnor_model(f, n, lam).unwrap();
        let p = BasisChange::new(near_identity(&mut rng, n)).unwrap();
        let there = alg.change_basis(&p).unwrap();
        let back = there.change_basis(&p.inverse()).unwrap();
        prop_assert!(back.max_constant_diff(&alg) <= 1e-10);
        prop_assert!(there.jacobi_defect() <= 1e-9);
    }

    #[test]
    fn bracket_is_antisymmetric_and_bilinear(f in family(), n in 3usize..=7, lam in 0.0f64..5.0, seed: u64,
                                             s in -3.0f64..3.0) {
        let mut rng = XorShift64Star::new(seed);
        let alg = LieAlgebra::milnor_model(f, n, lam).unwrap();
        let (x, y, z) = (vector(&mut rng, n), vector(&mut rng, n), vector(&mut rng, n));
        let xy = alg.bracket(&x, &y).unwrap();
        let yx = alg.bracket(&y, &x).unwrap();
        let tol = 1e-12 * (1.0 + lam) * 16.0;
        for k in 0..n {
            prop_assert!((xy[k] + yx[k]).abs() <= tol);
        }
        let sx_plus_z: Vec<f64> = x.iter().zip(&z).map(|(a, b)| s * a + b).collect();
        let lhs = alg.bracket(&sx_plus_z, &y).unwrap();
        let zy = alg.bracket(&z, &y).unwrap();
        for k in 0..n {
            prop_assert!((lhs[k] - (s * xy[k] + zy[k])).abs() <= tol * 4.0);
        }
    }

    #[test]
    fn lower_triangular_elements_are_fixed(n in 2usize..=7, seed: u64) {
        let mut rng = XorShift64Star::new(seed);
        let g = Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
            core::cmp::Ordering::Less => 0.0,
            core::cmp::Ordering::Equal => rng.uniform(0.5, 2.0),
            core::cmp::Ordering::Greater => rng.uniform(-1.0, 1.0),
        });
        let gram = GramMatrix::from_group_element(&g).unwrap();
        let back = gram_to_group_element(&gram).unwrap();
        prop_assert!(back.max_abs_diff(&g) <= 1e-10);
    }

    #[test]
    fn reduction_recovers_the_orbit_parameter(f in family(), n in 3usize..=6, lam in 0.0f64..6.0, seed: u64) {
        let mut rng = XorShift64Star::new(seed);
        let alg = LieAlgebra::build_family(f, n).unwrap();
        let gram = metric_in_orbit(&mut rng, n, lam).unwrap();
        let r = reduce(&alg, &gram).unwrap();
        prop_assert!((r.lambda - lam).abs() <= 1e-8 * lam.max(1.0));
        prop_assert!(r.residuals.within(1e-8));
        prop_assert!(validate_aut_element(&alg, &r.automorphism, 1e-8));
    }

    #[test]
    fn lambda_is_invariant_under_scaling_and_automorphisms(f in family(), n in 3usize..=6, seed: u64,
                                                           scale in 0.1f64..10.0) {
        let mut rng = XorShift64Star::new(seed);
        let alg = LieAlgebra::build_family(f, n).unwrap();
        let g = &random_automorphism(&mut rng, n).unwrap() * &random_orthogonal(&mut rng, n).unwrap();
        let g = &g * &near_identity(&mut rng, n);
        let base = reduce_group_element(&alg, &g).unwrap();
        let gram = GramMatrix::from_group_element(&g).unwrap();
        let scaled = reduce(&alg, &gram.scaled(scale).unwrap()).unwrap();
        let phi = random_automorphism(&mut rng, n).unwrap();
        let pushed = reduce(&alg, &gram.pushed_forward(&phi).unwrap()).unwrap();
        let tol = 1e-8 * base.lambda.max(1.0);
        prop_assert!(base.lambda >= 0.0);
        prop_assert!((scaled.lambda - base.lambda).abs() <= tol);
        prop_assert!((pushed.lambda - base.lambda).abs() <= tol);
    }

    #[test]
    fn generic_ricci_matches_closed_form(f in family(), n in 3usize..=7, lam in 0.0f64..8.0) {
        let model = LieAlgebra::milnor_model(f, n, lam).unwrap();
        let generic = ricci_in_frame(&model);
        let closed = closed_form_ricci(f, n, lam).unwrap().ric;
        prop_assert!(generic.max_abs_diff(&closed) <= 1e-9 * (1.0 + lam * lam));
    }

    #[test]
    fn derivations_satisfy_leibniz(f in family(), n in 3usize..=6, seed: u64) {
        let mut rng = XorShift64Star::new(seed);
        let alg = LieAlgebra::build_family(f, n).unwrap();
        let basis = derivation_basis(&alg).unwrap();
        prop_assert!(pattern_check(&alg, &basis).unwrap());
        let d = basis
            .matrices()
            .iter()
            .fold(Matrix::zeros(n, n), |acc, m| acc.add(&m.scaled(rng.uniform(-1.0, 1.0))));
        prop_assert!(is_derivation(&alg, &d, 1e-10).unwrap().0);
    }
}

#[test]
fn representative_reduces_to_itself() {
    for f in [Family::Rh2SumAbelian, Family::RhLineSum] {
        for n in 3..=6 {
            for lam in [0.0, 0.25, 1.0, 4.0] {
                let alg = LieAlgebra::build_family(f, n).unwrap();
                let r = reduce_group_element(&alg, &representative(n, lam)).unwrap();
                assert!((r.lambda - lam).abs() < 1e-12);
                assert!((r.scale_k - 1.0).abs() < 1e-12);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ricci_spectrum_matches_reduced_closed_form(f in family(), n in 3usize..=6, seed: u64) {
        let alg = LieAlgebra::build_family(f, n).unwrap();
        let gram = milnor_core::sample_metric(&milnor_core::RandomMetricSpec::new(seed), n).unwrap();
        let generic = milnor_core::ricci_operator(&alg, &gram).unwrap();
        let r = reduce(&alg, &gram).unwrap();
        let closed = closed_form_ricci(f, n, r.lambda).unwrap();
        let scale = generic.eigenvalues.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        for (a, b) in generic.eigenvalues.iter().zip(&closed.eigenvalues) {
            prop_assert!((a - r.scale_k * b).abs() <= 1e-7 * scale);
        }
    }

    #[test]
    fn connection_identities_on_skewed_frames(f in family(), n in 3usize..=6, lam in 0.0f64..4.0, seed: u64) {
        use milnor_core::curvature::{levi_civita, riemann};
        let mut rng = XorShift64Star::new(seed);
        let p = BasisChange::new(near_identity(&mut rng, n)).unwrap();
        let alg = LieAlgebra::milnor_model(f, n, lam).unwrap().change_basis(&p).unwrap();
        let ct = levi_civita(&alg);
        prop_assert!(ct.metric_defect() <= 1e-10);
        prop_assert!(ct.torsion_defect(&alg) <= 1e-10);
        let rt = riemann(&ct, &alg);
        prop_assert!(rt.bianchi_defect() <= 1e-9);
    }
}
