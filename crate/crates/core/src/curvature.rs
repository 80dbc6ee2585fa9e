//! Curvature of left-invariant metrics from structure constants.
//!
//! All tensors are expressed in an orthonormal frame `x_1, …, x_n`, given as
//! a [`LieAlgebra`] whose constants are `⟨[x_i, x_j], x_k⟩`. Conventions:
//!
//! * `2⟨∇_X Y, Z⟩ = ⟨[Z,X],Y⟩ + ⟨X,[Z,Y]⟩ + ⟨[X,Y],Z⟩`
//! * `R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_{[X,Y]} Z`
//! * `Ric(X) = Σ_i R(X, x_i) x_i`

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result, ShapeError};
use crate::lie::{BasisChange, Family, LieAlgebra};
use crate::linalg::{self, Matrix};
use crate::metric::{gram_to_group_element, GramMatrix};

/// Relative zero threshold for eigenvalue signs.
pub const SIGNATURE_ZERO_REL: f64 = 1e-8;

/// `gamma[i][j][k] = ⟨∇_{x_i} x_j, x_k⟩`.
#[derive(Clone, Debug)]
pub struct ConnectionTable {
    n: usize,
    gamma: Vec<f64>,
}

impl ConnectionTable {
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.gamma[(i * self.n + j) * self.n + k]
    }

    /// Coordinates of `∇_{x_i} x_j`.
    pub fn covariant(&self, i: usize, j: usize) -> &[f64] {
        let s = (i * self.n + j) * self.n;
        &self.gamma[s..s + self.n]
    }

    /// `max |Γ_ijk + Γ_ikj|`.
    pub fn metric_defect(&self) -> f64 {
        let n = self.n;
        let mut d: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    d = d.max((self.get(i, j, k) + self.get(i, k, j)).abs());
                }
            }
        }
        d
    }

    /// `max |Γ_ijk − Γ_jik − c_ijk|`.
    pub fn torsion_defect(&self, alg: &LieAlgebra) -> f64 {
        let n = self.n;
        let mut d: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    d = d.max((self.get(i, j, k) - self.get(j, i, k) - alg.constant(i, j, k)).abs());
                }
            }
        }
        d
    }
}

/// Levi-Civita connection by the Koszul formula.
pub fn levi_civita(alg: &LieAlgebra) -> ConnectionTable {
    let n = alg.dim();
    let mut gamma = vec![0.0; n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                gamma[(i * n + j) * n + k] =
                    0.5 * (alg.constant(k, i, j) + alg.constant(k, j, i) + alg.constant(i, j, k));
            }
        }
    }
    ConnectionTable { n, gamma }
}

/// `r[i][j][k][l] = ⟨R(x_i, x_j) x_k, x_l⟩`.
#[derive(Clone, Debug)]
pub struct RiemannTensor {
    n: usize,
    r: Vec<f64>,
}

impl RiemannTensor {
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let n = self.n;
        self.r[((i * n + j) * n + k) * n + l]
    }

    /// Max of `|R_ijkl + R_jkil + R_kijl|`.
    pub fn bianchi_defect(&self) -> f64 {
        let n = self.n;
        let mut d: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        d = d.max((self.get(i, j, k, l) + self.get(j, k, i, l) + self.get(k, i, j, l)).abs());
                    }
                }
            }
        }
        d
    }

    /// Ricci operator as a matrix: column `a` holds `Ric(x_a) = Σ_i R(x_a, x_i) x_i`.
    pub fn ricci(&self) -> Matrix {
        let n = self.n;
        Matrix::from_fn(n, n, |b, a| (0..n).map(|i| self.get(a, i, i, b)).sum())
    }
}

/// Riemann tensor from a connection and the frame's structure constants.
pub fn riemann(ct: &ConnectionTable, alg: &LieAlgebra) -> RiemannTensor {
    let n = ct.dim();
    let mut r = vec![0.0; n * n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let base = ((i * n + j) * n + k) * n;
                for m in 0..n {
                    // ∇_i ∇_j x_k = Σ_m Γ_jkm ∇_i x_m, and likewise with i, j swapped
                    let a = ct.get(j, k, m);
                    let b = ct.get(i, k, m);
                    let c = alg.constant(i, j, m);
                    if a == 0.0 && b == 0.0 && c == 0.0 {
                        continue;
                    }
                    let im = ct.covariant(i, m);
                    let jm = ct.covariant(j, m);
                    let mk = ct.covariant(m, k);
                    for l in 0..n {
                        r[base + l] += a * im[l] - b * jm[l] - c * mk[l];
                    }
                }
            }
        }
    }
    RiemannTensor { n, r }
}

/// Ricci operator of an orthonormal frame with the given structure constants.
pub fn ricci_in_frame(alg: &LieAlgebra) -> Matrix {
    riemann(&levi_civita(alg), alg).ricci()
}

/// Numbers of negative, zero and positive eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    pub negative: usize,
    pub zero: usize,
    pub positive: usize,
}

impl Signature {
    pub const fn new(negative: usize, zero: usize, positive: usize) -> Self {
        Self {
            negative,
            zero,
            positive,
        }
    }

    /// The two possible Ricci signatures of a family in dimension `n`:
    /// `(at λ = 0, at λ > 0)`.
    pub fn family_pair(family: Family, n: usize) -> Result<(Self, Self)> {
        if n < 3 {
            return Err(Error::Dimension { dim: n, min: 3 });
        }
        match family {
            Family::Rh2SumAbelian => Ok((Self::new(2, n - 2, 0), Self::new(2, n - 3, 1))),
            Family::RhLineSum => Ok((Self::new(n - 1, 1, 0), Self::new(n - 1, 0, 1))),
            Family::Custom => Err(Error::UnsupportedFamily(family)),
        }
    }

    /// Counts eigenvalues below `−tol·s`, within `±tol·s` and above `tol·s`
    /// where `s` is the largest magnitude.
    pub fn from_eigenvalues(values: &[f64], tol: f64) -> Self {
        let s = linalg::max_abs(values);
        let cut = tol * s;
        let mut sig = Self::new(0, 0, 0);
        for &v in values {
            if s == 0.0 || v.abs() <= cut {
                sig.zero += 1;
            } else if v < 0.0 {
                sig.negative += 1;
            } else {
                sig.positive += 1;
            }
        }
        sig
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.negative, self.zero, self.positive)
    }
}

/// Signature of a symmetric matrix with relative zero threshold `tol`.
pub fn signature(sym: &Matrix, tol: f64) -> Result<Signature> {
    if !sym.is_square() {
        return Err(ShapeError::NotSquare {
            rows: sym.rows(),
            cols: sym.cols(),
        }
        .into());
    }
    let defect = sym.symmetry_defect();
    if defect > tol * sym.max_abs() {
        return Err(ShapeError::Asymmetric { defect }.into());
    }
    let e = linalg::symmetric_eigen(sym)?;
    Ok(Signature::from_eigenvalues(&e.values, tol))
}

/// Ricci operator with its spectrum.
#[derive(Clone, Debug)]
pub struct RicciReport {
    /// In the orthonormal frame used for the computation.
    pub ric: Matrix,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub signature: Signature,
    /// Trace of the Ricci operator.
    pub scalar_curvature: f64,
}

impl RicciReport {
    pub fn from_operator(ric: Matrix) -> Result<Self> {
        let e = linalg::symmetric_eigen(&ric)?;
        let signature = Signature::from_eigenvalues(&e.values, SIGNATURE_ZERO_REL);
        Ok(Self {
            scalar_curvature: ric.trace(),
            ric,
            eigenvalues: e.values,
            signature,
        })
    }
}

/// Ricci operator of `⟨·,·⟩_G` on `alg`, computed in the `G`-orthonormal frame
/// given by the columns of [`gram_to_group_element`].
pub fn ricci_operator(alg: &LieAlgebra, gram: &GramMatrix) -> Result<RicciReport> {
    if gram.dim() != alg.dim() {
        return Err(ShapeError::Dimension {
            expected: alg.dim(),
            rows: gram.dim(),
            cols: gram.dim(),
        }
        .into());
    }
    let frame = gram_to_group_element(gram)?;
    let ortho = alg.change_basis(&BasisChange::new(frame)?)?;
    RicciReport::from_operator(ricci_in_frame(&ortho))
}

/// Closed-form Ricci operator of the reduced frame with parameter `lambda`.
///
/// First family: `diag(−1−λ²/2, −1−λ²/2, 0, …, 0, λ²/2)`.
/// Second family: `Ric(x_1) = −(n−2+λ²/2) x_1`, `Ric(x_i) = −(n−2) x_i` for
/// `3 ≤ i ≤ n−1`, and on `span{x_2, x_n}` the block
/// `[[−λ²/2, (n−1)λ/2], [(n−1)λ/2, λ²/2 − (n−2)]]`.
pub fn closed_form_ricci(family: Family, n: usize, lambda: f64) -> Result<RicciReport> {
    if n < 3 {
        return Err(Error::Dimension { dim: n, min: 3 });
    }
    if !(lambda >= 0.0) {
        return Err(Error::InvalidParameter("lambda must be nonnegative"));
    }
    let half_sq = 0.5 * lambda * lambda;
    let last = n - 1;
    let mut ric = Matrix::zeros(n, n);
    match family {
        Family::Rh2SumAbelian => {
            ric[(0, 0)] = -1.0 - half_sq;
            ric[(1, 1)] = -1.0 - half_sq;
            ric[(last, last)] = half_sq;
        }
        Family::RhLineSum => {
            let m = (n - 2) as f64;
            let coupling = 0.5 * (n - 1) as f64 * lambda;
            ric[(0, 0)] = -(m + half_sq);
            for i in 2..last {
                ric[(i, i)] = -m;
            }
            ric[(1, 1)] = -half_sq;
            ric[(last, 1)] = coupling;
            ric[(1, last)] = coupling;
            ric[(last, last)] = half_sq - m;
        }
        Family::Custom => return Err(Error::UnsupportedFamily(family)),
    }
    RicciReport::from_operator(ric)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn model(f: Family, n: usize, lambda: f64) -> LieAlgebra {
        LieAlgebra::milnor_model(f, n, lambda).unwrap()
    }

    #[test]
    fn connection_of_first_family() {
        let lam = 1.5;
        let n = 4;
        let ct = levi_civita(&model(Family::Rh2SumAbelian, n, lam));
        // ∇_{x1}x2 = (λ/2) x_n, ∇_{x2}x2 = x1
        assert_abs_diff_eq!(ct.get(0, 1, n - 1), lam / 2.0);
        assert_abs_diff_eq!(ct.get(1, 1, 0), 1.0);
    }

    #[test]
    fn abelian_is_flat() {
        let a = LieAlgebra::abelian(4).unwrap();
        let ct = levi_civita(&a);
        assert!(ct.covariant(1, 2).iter().all(|v| *v == 0.0));
        let r = riemann(&ct, &a);
        assert_eq!(r.bianchi_defect(), 0.0);
        let rep = ricci_operator(
            &a,
            &GramMatrix::new(Matrix::from_rows(&[[2.0, 0.1, 0.0, 0.0], [0.1, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.2], [0.0, 0.0, 0.2, 3.0]]).unwrap())
                .unwrap(),
        )
        .unwrap();
        assert_eq!(rep.ric.max_abs(), 0.0);
        assert_eq!(rep.signature, Signature::new(0, 4, 0));
    }

    #[test]
    fn riemann_components_first_family() {
        let lam = 2.0;
        let n = 5;
        let a = model(Family::Rh2SumAbelian, n, lam);
        let r = riemann(&levi_civita(&a), &a);
        assert_abs_diff_eq!(r.get(0, 1, 1, 0), -(1.0 + 0.75 * lam * lam), epsilon = 1e-14);
        assert_abs_diff_eq!(r.get(0, n - 1, n - 1, 0), 0.25 * lam * lam, epsilon = 1e-14);
    }

    #[test]
    fn canonical_metric_spectra() {
        let a = LieAlgebra::build_family(Family::Rh2SumAbelian, 4).unwrap();
        let rep = ricci_operator(&a, &GramMatrix::identity(4)).unwrap();
        let expected = [-1.0, -1.0, 0.0, 0.0];
        for (v, e) in rep.eigenvalues.iter().zip(expected) {
            assert_abs_diff_eq!(*v, e, epsilon = 1e-14);
        }
        let b = LieAlgebra::build_family(Family::RhLineSum, 3).unwrap();
        let rep = ricci_operator(&b, &GramMatrix::identity(3)).unwrap();
        for (v, e) in rep.eigenvalues.iter().zip([-1.0, -1.0, 0.0]) {
            assert_abs_diff_eq!(*v, e, epsilon = 1e-14);
        }
    }

    #[test]
    fn closed_form_examples() {
        let r = closed_form_ricci(Family::Rh2SumAbelian, 5, 2.0).unwrap();
        assert_eq!(r.ric, Matrix::diagonal(&[-3.0, -3.0, 0.0, 0.0, 2.0]));
        let r = closed_form_ricci(Family::RhLineSum, 4, 0.0).unwrap();
        assert_eq!(r.ric, Matrix::diagonal(&[-2.0, 0.0, -2.0, -2.0]));
        let r = closed_form_ricci(Family::Rh2SumAbelian, 3, 0.0).unwrap();
        assert_eq!(r.ric, Matrix::diagonal(&[-1.0, -1.0, 0.0]));
        assert!(closed_form_ricci(Family::Custom, 4, 0.0).is_err());
        assert!(closed_form_ricci(Family::RhLineSum, 2, 0.0).is_err());
        assert!(closed_form_ricci(Family::RhLineSum, 4, -1.0).is_err());
    }

    #[test]
    fn signature_examples() {
        let r = closed_form_ricci(Family::Rh2SumAbelian, 6, 1.5).unwrap();
        assert_eq!(signature(&r.ric, 1e-8).unwrap(), Signature::new(2, 3, 1));
        let r = closed_form_ricci(Family::RhLineSum, 5, 0.0).unwrap();
        assert_eq!(signature(&r.ric, 1e-8).unwrap(), Signature::new(4, 1, 0));
        assert_eq!(signature(&Matrix::zeros(3, 3), 1e-8).unwrap(), Signature::new(0, 3, 0));
        let asym = Matrix::from_rows(&[[1.0, 2.0], [0.0, 1.0]]).unwrap();
        assert!(matches!(signature(&asym, 1e-8), Err(Error::Shape(ShapeError::Asymmetric { .. }))));
    }

    #[test]
    fn generic_pipeline_matches_closed_form() {
        for f in Family::SOLVABLE {
            for n in 3..=6 {
                for &lam in &[0.0, 0.5, 2.0] {
                    let generic = ricci_in_frame(&model(f, n, lam));
                    let closed = closed_form_ricci(f, n, lam).unwrap();
                    assert!(generic.max_abs_diff(&closed.ric) < 1e-12, "{f} n={n} λ={lam}");
                }
            }
        }
    }

    #[test]
    fn connection_invariants_on_random_algebra() {
        // a non-unimodular 3-dim solvable algebra in a skewed frame
        let a = LieAlgebra::from_entries(3, &[(0, 1, 1, 1.0), (0, 1, 2, 0.3), (0, 2, 2, 2.0), (0, 2, 1, -0.4)])
            .unwrap();
        let p = BasisChange::new(
            Matrix::from_rows(&[[1.0, 0.2, -0.1], [0.0, 0.9, 0.4], [0.3, 0.0, 1.1]]).unwrap(),
        )
        .unwrap();
        let b = a.change_basis(&p).unwrap();
        let ct = levi_civita(&b);
        assert!(ct.metric_defect() < 1e-12);
        assert!(ct.torsion_defect(&b) < 1e-12);
        let r = riemann(&ct, &b);
        assert!(r.bianchi_defect() < 1e-12);
        let ric = r.ricci();
        assert!(ric.symmetry_defect() < 1e-12);
    }

    #[test]
    fn second_family_coupled_block() {
        // det(tI − 2A) for A = [[−λ²/2, (n−1)λ/2], [(n−1)λ/2, λ²/2 − (n−2)]]
        // expands to t² + 2(n−2)t − λ²(λ² + (n−2)² + 1)
        for n in 3..=8 {
            for &lam in &[0.0, 1.0, 3.0] {
                let ric = closed_form_ricci(Family::RhLineSum, n, lam).unwrap().ric;
                let last = n - 1;
                let two_a = Matrix::from_rows(&[
                    [2.0 * ric[(1, 1)], 2.0 * ric[(1, last)]],
                    [2.0 * ric[(last, 1)], 2.0 * ric[(last, last)]],
                ])
                .unwrap();
                let m = (n - 2) as f64;
                let l2 = lam * lam;
                let constant = -l2 * (l2 + m * m + 1.0);
                assert_abs_diff_eq!(two_a.trace(), -2.0 * m, epsilon = 1e-12);
                assert_abs_diff_eq!(two_a.determinant().unwrap(), constant, epsilon = 1e-10);
                let e = linalg::symmetric_eigen(&two_a).unwrap();
                for mu in e.values.iter() {
                    assert!((mu * mu + 2.0 * m * mu + constant).abs() < 1e-9 * (1.0 + constant.abs()));
                }
                if lam > 0.0 {
                    assert!(e.values[0] < 0.0 && e.values[1] > 0.0);
                } else {
                    assert_abs_diff_eq!(e.values[1], 0.0, epsilon = 1e-14);
                }
            }
        }
    }
}
