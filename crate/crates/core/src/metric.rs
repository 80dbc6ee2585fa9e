//! Inner products on `ℝⁿ` and the `GL(n)` elements that realise them.
//!
//! `GL(n)` acts on inner products by `g.⟨u, v⟩ := ⟨g⁻¹u, g⁻¹v⟩`. In Gram
//! matrix terms the metric `g.⟨·,·⟩₀` has Gram matrix `(g gᵀ)⁻¹`.

use crate::error::{Error, Result, ShapeError};
use crate::linalg::{self, Matrix};

/// Symmetric positive-definite Gram matrix, `G[i][j] = ⟨e_i, e_j⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct GramMatrix(Matrix);

/// Symmetry slack relative to the largest entry.
const SYMMETRY_TOL: f64 = 1e-10;

impl GramMatrix {
    /// Validates symmetry and certifies definiteness by a Cholesky
    /// factorisation. The stored matrix is exactly symmetrised.
    pub fn new(m: Matrix) -> Result<Self> {
        if !m.is_square() {
            return Err(ShapeError::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            }
            .into());
        }
        let defect = m.symmetry_defect();
        if defect > SYMMETRY_TOL * m.max_abs() {
            return Err(ShapeError::Asymmetric { defect }.into());
        }
        let m = m.symmetrized();
        linalg::cholesky_lower(&m)?;
        Ok(Self(m))
    }

    /// The canonical inner product `⟨·,·⟩₀`.
    pub fn identity(n: usize) -> Self {
        Self(Matrix::identity(n))
    }

    /// Gram matrix of `g.⟨·,·⟩₀`, i.e. `(g gᵀ)⁻¹`.
    pub fn from_group_element(g: &Matrix) -> Result<Self> {
        if !g.is_square() {
            return Err(ShapeError::NotSquare {
                rows: g.rows(),
                cols: g.cols(),
            }
            .into());
        }
        let ginv = g.inverse()?;
        Self::new(&ginv.transpose() * &ginv)
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    /// `c · G` for `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0) {
            return Err(Error::InvalidParameter("metric scale must be positive"));
        }
        Ok(Self(self.0.scaled(c)))
    }

    /// Gram matrix of `φ.⟨·,·⟩ = ⟨φ⁻¹·, φ⁻¹·⟩`, namely `φ⁻ᵀ G φ⁻¹`.
    pub fn pushed_forward(&self, phi: &Matrix) -> Result<Self> {
        if phi.rows() != self.dim() || !phi.is_square() {
            return Err(ShapeError::Dimension {
                expected: self.dim(),
                rows: phi.rows(),
                cols: phi.cols(),
            }
            .into());
        }
        let pinv = phi.inverse()?;
        Self::new(&(&pinv.transpose() * &self.0) * &pinv)
    }

    /// `⟨u, v⟩ = uᵀ G v`.
    pub fn inner(&self, u: &[f64], v: &[f64]) -> f64 {
        linalg::dot(u, &self.0.mul_vec(v))
    }

    /// 2-norm condition number.
    pub fn condition_number(&self) -> Result<f64> {
        linalg::spd_condition_number(&self.0)
    }
}

/// Lower-triangular `g` with positive diagonal such that `(g gᵀ)⁻¹ = G`,
/// i.e. `⟨·,·⟩_G = g.⟨·,·⟩₀`.
///
/// `G = U Uᵀ` with `U` upper triangular and `g = U⁻ᵀ`. The columns of `g`
/// form a `G`-orthonormal basis, and for lower-triangular `g` with positive
/// diagonal the map `g ↦ (g gᵀ)⁻¹ ↦ g` is the identity.
pub fn gram_to_group_element(gram: &GramMatrix) -> Result<Matrix> {
    let u = linalg::cholesky_upper(gram.matrix())?;
    // U⁻ᵀ = (Uᵀ)⁻¹ and Uᵀ is lower triangular
    linalg::lower_triangular_inverse(&u.transpose())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_maps_to_identity() {
        let g = gram_to_group_element(&GramMatrix::identity(4)).unwrap();
        assert_eq!(g, Matrix::identity(4));
    }

    #[test]
    fn diagonal_example() {
        let gram = GramMatrix::new(Matrix::diagonal(&[4.0, 1.0, 1.0])).unwrap();
        let g = gram_to_group_element(&gram).unwrap();
        assert!(g.max_abs_diff(&Matrix::diagonal(&[0.5, 1.0, 1.0])) < 1e-15);
        // (g gᵀ)⁻¹ = diag(4, 1, 1)
        let back = (&g * &g.transpose()).inverse().unwrap();
        assert!(back.max_abs_diff(gram.matrix()) < 1e-15);
    }

    #[test]
    fn lower_triangular_round_trip() {
        let g = Matrix::from_rows(&[[2.0, 0.0, 0.0], [-0.7, 0.5, 0.0], [1.3, 0.25, 3.0]]).unwrap();
        let gram = GramMatrix::from_group_element(&g).unwrap();
        let back = gram_to_group_element(&gram).unwrap();
        assert!(back.max_abs_diff(&g) < 1e-10 * g.max_abs());
    }

    #[test]
    fn columns_are_orthonormal() {
        let gram = GramMatrix::new(
            Matrix::from_rows(&[[3.0, 0.4, -0.2], [0.4, 1.0, 0.1], [-0.2, 0.1, 0.5]]).unwrap(),
        )
        .unwrap();
        let g = gram_to_group_element(&gram).unwrap();
        let ortho = &(&g.transpose() * gram.matrix()) * &g;
        assert!(ortho.max_abs_diff(&Matrix::identity(3)) < 1e-14);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            GramMatrix::new(Matrix::diagonal(&[1.0, 0.0])).unwrap_err(),
            Error::NotPositiveDefinite
        );
        assert!(matches!(
            GramMatrix::new(Matrix::from_rows(&[[1.0, 0.5], [0.0, 1.0]]).unwrap()),
            Err(Error::Shape(ShapeError::Asymmetric { .. }))
        ));
        assert!(matches!(
            GramMatrix::new(Matrix::zeros(2, 3)),
            Err(Error::Shape(ShapeError::NotSquare { .. }))
        ));
    }

    #[test]
    fn pushforward_matches_definition() {
        let gram = GramMatrix::new(Matrix::diagonal(&[2.0, 3.0, 5.0])).unwrap();
        let phi = Matrix::from_rows(&[[1.0, 0.0, 0.0], [0.4, 2.0, 0.0], [-1.0, 0.0, 0.5]]).unwrap();
        let pushed = gram.pushed_forward(&phi).unwrap();
        // ⟨φu, φv⟩_pushed = ⟨u, v⟩_G
        let u = [0.3, -1.0, 2.0];
        let v = [1.0, 0.5, 0.25];
        let lhs = pushed.inner(&phi.mul_vec(&u), &phi.mul_vec(&v));
        assert!((lhs - gram.inner(&u, &v)).abs() < 1e-13);
    }
}
