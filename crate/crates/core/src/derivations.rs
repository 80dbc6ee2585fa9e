//! The derivation algebra `Der(g) = {D : D[x,y] = [Dx,y] + [x,Dy]}`.
//!
//! Matrices follow the convention `(D x_1, …, D x_n) = (x_1, …, x_n) A`, so
//! column `j` of `A` holds the coordinates of `D x_j`.

use alloc::vec::Vec;

use crate::error::{Error, Result, ShapeError};
use crate::lie::{BasisChange, LieAlgebra};
use crate::linalg::{self, Matrix};
use crate::reduction::representative;

/// Singular values below this fraction of the largest count as zero.
pub const NULLSPACE_REL_TOL: f64 = 1e-9;
/// Entries of a unit-norm basis element below this count as structural zeros.
const PATTERN_ZERO_TOL: f64 = 1e-9;
/// Distance from a starred unit matrix to the span, for the converse check.
const PATTERN_SPAN_TOL: f64 = 1e-8;

/// Frobenius-orthonormal basis of a space of `n × n` matrices.
#[derive(Clone, Debug)]
pub struct DerivationBasis {
    n: usize,
    mats: Vec<Matrix>,
}

impl DerivationBasis {
    /// Orthonormalises `mats`; linearly dependent elements are dropped.
    pub fn from_matrices(n: usize, mats: &[Matrix]) -> Result<Self> {
        for m in mats {
            if m.rows() != n || m.cols() != n {
                return Err(ShapeError::Dimension {
                    expected: n,
                    rows: m.rows(),
                    cols: m.cols(),
                }
                .into());
            }
        }
        Ok(Self {
            n,
            mats: linalg::frobenius_orthonormalize(mats, 1e-10),
        })
    }

    /// Size of the matrices.
    pub fn matrix_dim(&self) -> usize {
        self.n
    }

    /// Dimension of the spanned space.
    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.mats
    }

    /// Orthogonal projection onto the span.
    pub fn project(&self, m: &Matrix) -> Matrix {
        let mut p = Matrix::zeros(self.n, self.n);
        for q in &self.mats {
            p = p.add(&q.scaled(q.frobenius_dot(m)));
        }
        p
    }

    /// Frobenius distance from `m` to the span.
    pub fn distance_to_span(&self, m: &Matrix) -> f64 {
        m.sub(&self.project(m)).frobenius_norm()
    }

    /// Equal dimension and every element of `other` within `tol` of this span.
    pub fn spans_equal(&self, other: &Self, tol: f64) -> bool {
        self.n == other.n
            && self.len() == other.len()
            && other.mats.iter().all(|m| self.distance_to_span(m) <= tol)
    }

    /// Largest deviation of the Frobenius Gram matrix from the identity.
    pub fn gram_defect(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, a) in self.mats.iter().enumerate() {
            for (j, b) in self.mats.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                d = d.max((a.frobenius_dot(b) - target).abs());
            }
        }
        d
    }

    /// `{P⁻¹ D P}`: the same maps written in the basis given by the columns
    /// of `P`.
    pub fn conjugated(&self, p: &BasisChange) -> Result<Self> {
        let conj: Vec<Matrix> = self
            .mats
            .iter()
            .map(|d| &(p.inverse_matrix() * d) * p.matrix())
            .collect();
        Self::from_matrices(self.n, &conj)
    }
}

/// Coefficient matrix of `D ↦ (D[e_i,e_j] − [De_i,e_j] − [e_i,De_j])_{i<j}`
/// acting on `vec(D)` (row-major).
fn leibniz_system(alg: &LieAlgebra) -> Matrix {
    let n = alg.dim();
    let pairs = n * (n - 1) / 2;
    let mut a = Matrix::zeros(pairs * n, n * n);
    let mut row = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            for k in 0..n {
                for m in 0..n {
                    // (D[e_i,e_j])_k = Σ_m D_km c_ijm
                    a[(row, k * n + m)] += alg.constant(i, j, m);
                    // ([De_i, e_j])_k = Σ_m D_mi c_mjk
                    a[(row, m * n + i)] -= alg.constant(m, j, k);
                    // ([e_i, De_j])_k = Σ_m D_mj c_imk
                    a[(row, m * n + j)] -= alg.constant(i, m, k);
                }
                row += 1;
            }
        }
    }
    a
}

/// Basis of `Der(g)` from the null space of the Leibniz system.
pub fn derivation_basis(alg: &LieAlgebra) -> Result<DerivationBasis> {
    let n = alg.dim();
    let system = leibniz_system(alg);
    let svd = linalg::svd(&system)?;
    let smax = svd.sigma.first().copied().unwrap_or(0.0);
    let mats: Vec<Matrix> = svd
        .sigma
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= NULLSPACE_REL_TOL * smax)
        .map(|(col, _)| Matrix::from_fn(n, n, |a, b| svd.v[(a * n + b, col)]))
        .collect();
    DerivationBasis::from_matrices(n, &mats)
}

/// Max over `i < j` of `‖D[e_i,e_j] − [De_i,e_j] − [e_i,De_j]‖_∞`.
pub fn leibniz_defect(alg: &LieAlgebra, d: &Matrix) -> Result<f64> {
    let n = alg.dim();
    if d.rows() != n || d.cols() != n {
        return Err(ShapeError::Dimension {
            expected: n,
            rows: d.rows(),
            cols: d.cols(),
        }
        .into());
    }
    let cols: Vec<Vec<f64>> = (0..n).map(|j| d.column(j)).collect();
    let mut unit = alloc::vec![0.0; n];
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let lhs = d.mul_vec(alg.bracket_basis(i, j));
            unit.iter_mut().for_each(|v| *v = 0.0);
            unit[j] = 1.0;
            let t1 = alg.bracket(&cols[i], &unit)?;
            unit[j] = 0.0;
            unit[i] = 1.0;
            let t2 = alg.bracket(&unit, &cols[j])?;
            for k in 0..n {
                worst = worst.max((lhs[k] - t1[k] - t2[k]).abs());
            }
        }
    }
    Ok(worst)
}

/// Whether `d` is a derivation up to `tol`, with the Leibniz defect.
pub fn is_derivation(alg: &LieAlgebra, d: &Matrix, tol: f64) -> Result<(bool, f64)> {
    let defect = leibniz_defect(alg, d)?;
    Ok((defect <= tol, defect))
}

/// Positions (0-based) that must vanish for every derivation of the two
/// families in their canonical basis: the first row, `(2, j)` for `j ≥ 3`
/// and `(i, 2)` for `i ≥ 3` in 1-based terms.
pub fn is_forbidden_position(i: usize, j: usize) -> bool {
    i == 0 || (i == 1 && j >= 2) || (i >= 2 && j == 1)
}

/// Checks a basis against the derivation pattern shared by both families:
///
/// ```text
/// ⎡ 0  0 │ 0 ⋯ 0 ⎤
/// ⎢ *  * │ 0 ⋯ 0 ⎥
/// ⎢ *  0 │       ⎥
/// ⎢ ⋮  ⋮ │   *   ⎥
/// ⎣ *  0 │       ⎦
/// ```
///
/// Every element must vanish on the zero positions, and every starred
/// position must be attained (its unit matrix lies in the span).
pub fn pattern_check(alg: &LieAlgebra, basis: &DerivationBasis) -> Result<bool> {
    if !alg.family().is_solvable_family() {
        return Err(Error::UnsupportedFamily(alg.family()));
    }
    let n = alg.dim();
    if basis.matrix_dim() != n {
        return Err(ShapeError::Dimension {
            expected: n,
            rows: basis.matrix_dim(),
            cols: basis.matrix_dim(),
        }
        .into());
    }
    let zeros_respected = basis.matrices().iter().all(|m| {
        (0..n).all(|i| (0..n).all(|j| !is_forbidden_position(i, j) || m[(i, j)].abs() <= PATTERN_ZERO_TOL))
    });
    if !zeros_respected {
        return Ok(false);
    }
    let stars_attained = (0..n).all(|i| {
        (0..n).all(|j| {
            is_forbidden_position(i, j)
                || basis.distance_to_span(&Matrix::unit(n, i, j)) <= PATTERN_SPAN_TOL
        })
    });
    Ok(stars_attained)
}

/// Number of starred positions, `(n−2)² + n`.
pub fn pattern_dimension(n: usize) -> usize {
    (n - 2) * (n - 2) + n
}

/// `{g_λ⁻¹ D g_λ}` with `g_λ = I − λE_{n,2}`: the derivations written in the
/// frame whose brackets carry the parameter `λ`.
pub fn conjugated_derivation_basis(basis: &DerivationBasis, lambda: f64) -> Result<DerivationBasis> {
    if !(lambda >= 0.0) {
        return Err(Error::InvalidParameter("lambda must be nonnegative"));
    }
    let g = BasisChange::new(representative(basis.matrix_dim(), lambda))?;
    basis.conjugated(&g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::Family;
    use approx::assert_abs_diff_eq;

    #[test]
    fn abelian_has_full_matrix_space() {
        let a = LieAlgebra::abelian(3).unwrap();
        let b = derivation_basis(&a).unwrap();
        assert_eq!(b.len(), 9);
    }

    #[test]
    fn family_dimensions() {
        for n in 3..=8 {
            for f in Family::SOLVABLE {
                let a = LieAlgebra::build_family(f, n).unwrap();
                let b = derivation_basis(&a).unwrap();
                assert_eq!(b.len(), pattern_dimension(n), "{f} n={n}");
                assert!(b.gram_defect() < 1e-10);
                for d in b.matrices() {
                    assert!(leibniz_defect(&a, d).unwrap() < 1e-9);
                }
            }
        }
        // (n-2)^2 + n = 8 for n = 4
        assert_eq!(pattern_dimension(4), 8);
    }

    #[test]
    fn pattern_holds_for_both_families() {
        for f in Family::SOLVABLE {
            let a = LieAlgebra::build_family(f, 5).unwrap();
            let b = derivation_basis(&a).unwrap();
            assert!(pattern_check(&a, &b).unwrap());
        }
    }

    #[test]
    fn pattern_rejects_forbidden_entry() {
        let a = LieAlgebra::build_family(Family::Rh2SumAbelian, 4).unwrap();
        let b = DerivationBasis::from_matrices(4, &[Matrix::unit(4, 0, 0)]).unwrap();
        assert!(!pattern_check(&a, &b).unwrap());
        // a proper subspace misses starred positions
        let partial = DerivationBasis::from_matrices(4, &[Matrix::unit(4, 1, 1)]).unwrap();
        assert!(!pattern_check(&a, &partial).unwrap());
    }

    #[test]
    fn pattern_check_needs_a_family() {
        let a = LieAlgebra::abelian(3).unwrap();
        let b = derivation_basis(&a).unwrap();
        assert!(matches!(pattern_check(&a, &b), Err(Error::UnsupportedFamily(Family::Custom))));
    }

    #[test]
    fn is_derivation_examples() {
        let a = LieAlgebra::build_family(Family::Rh2SumAbelian, 4).unwrap();
        assert!(is_derivation(&a, &Matrix::unit(4, 1, 1), 1e-12).unwrap().0);
        let (ok, defect) = is_derivation(&a, &Matrix::unit(4, 0, 0), 1e-12).unwrap();
        assert!(!ok);
        assert_abs_diff_eq!(defect, 1.0);
        assert_eq!(is_derivation(&a, &Matrix::zeros(4, 4), 0.0).unwrap(), (true, 0.0));
        assert!(matches!(
            is_derivation(&a, &Matrix::zeros(3, 3), 1e-9),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn conjugation_by_identity_keeps_span() {
        let a = LieAlgebra::build_family(Family::RhLineSum, 5).unwrap();
        let b = derivation_basis(&a).unwrap();
        let c = conjugated_derivation_basis(&b, 0.0).unwrap();
        assert!(b.spans_equal(&c, 1e-10));
    }

    #[test]
    fn conjugated_unit_entry() {
        // g_λ⁻¹ E_{2,2} g_λ = E_{2,2} + λ E_{n,2} for λ = 2, by hand
        let n = 4;
        let lambda = 2.0;
        let g = representative(n, lambda);
        let ginv = g.inverse().unwrap();
        let conj = &(&ginv * &Matrix::unit(n, 1, 1)) * &g;
        assert_abs_diff_eq!(conj[(n - 1, 1)], 2.0);
        let b = DerivationBasis::from_matrices(n, &[Matrix::unit(n, 1, 1)]).unwrap();
        let c = conjugated_derivation_basis(&b, lambda).unwrap();
        let m = &c.matrices()[0];
        assert_abs_diff_eq!(m[(n - 1, 1)] / m[(1, 1)], 2.0, epsilon = 1e-14);
    }

    #[test]
    fn conjugated_pattern_coupling() {
        // in the reduced frame the (n,2) entry is λ((2,2) − (n,n))
        for f in Family::SOLVABLE {
            for &lambda in &[1.0, 2.5] {
                let n = 5;
                let a = LieAlgebra::build_family(f, n).unwrap();
                let c = conjugated_derivation_basis(&derivation_basis(&a).unwrap(), lambda).unwrap();
                for m in c.matrices() {
                    let expected = lambda * (m[(1, 1)] - m[(n - 1, n - 1)]);
                    assert_abs_diff_eq!(m[(n - 1, 1)], expected, epsilon = 1e-10);
                }
                // and they are derivations of the reduced-frame algebra
                let model = LieAlgebra::milnor_model(f, n, lambda).unwrap();
                for m in c.matrices() {
                    assert!(leibniz_defect(&model, m).unwrap() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn closed_under_commutator() {
        for f in Family::SOLVABLE {
            let a = LieAlgebra::build_family(f, 5).unwrap();
            let b = derivation_basis(&a).unwrap();
            for x in b.matrices() {
                for y in b.matrices() {
                    let comm = (x * y).sub(&(y * x));
                    assert!(b.distance_to_span(&comm) < 1e-8);
                }
            }
        }
    }

    #[test]
    fn conjugation_maps_onto_derivations_of_new_basis() {
        let a = LieAlgebra::build_family(Family::RhLineSum, 4).unwrap();
        let p = BasisChange::new(
            Matrix::from_rows(&[
                [1.0, 0.2, 0.0, 0.0],
                [0.0, 1.5, 0.3, 0.0],
                [0.4, 0.0, 1.0, -0.6],
                [0.0, 0.0, 0.7, 2.0],
            ])
            .unwrap(),
        )
        .unwrap();
        let lhs = derivation_basis(&a).unwrap().conjugated(&p).unwrap();
        let rhs = derivation_basis(&a.change_basis(&p).unwrap()).unwrap();
        assert!(lhs.spans_equal(&rhs, 1e-8));
    }
}
