//! Lie algebras given by structure constants, and changes of basis.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result, ShapeError};
use crate::linalg::Matrix;

/// Which algebra a set of structure constants describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `g_{RH²} ⊕ ℝ^{n-2}`: `[e_1, e_2] = e_2`.
    Rh2SumAbelian,
    /// `g_{RH^{n-1}} ⊕ ℝ`: `[e_1, e_i] = e_i` for `i = 3..n`.
    RhLineSum,
    Custom,
}

impl Family {
    pub const SOLVABLE: [Family; 2] = [Family::Rh2SumAbelian, Family::RhLineSum];

    /// Short name used on the command line.
    pub fn name(self) -> &'static str {
        match self {
            Family::Rh2SumAbelian => "rh2+abelian",
            Family::RhLineSum => "rh-line",
            Family::Custom => "custom",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "rh2+abelian" => Some(Family::Rh2SumAbelian),
            "rh-line" => Some(Family::RhLineSum),
            "custom" => Some(Family::Custom),
            _ => None,
        }
    }

    pub fn is_solvable_family(self) -> bool {
        !matches!(self, Family::Custom)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Antisymmetry slack for validated constants, relative to the largest entry.
const ANTISYMMETRY_TOL: f64 = 1e-12;
/// Jacobi slack for validated constants, relative to the squared largest entry.
const JACOBI_TOL: f64 = 1e-9;

/// A real Lie algebra `g ≅ ℝⁿ` with `[e_i, e_j] = Σ_k c[i][j][k] e_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra {
    dim: usize,
    // c[(i * n + j) * n + k]
    c: Vec<f64>,
    family: Family,
}

impl LieAlgebra {
    /// Validating constructor from a dense `n³` tensor laid out as
    /// `c[(i * n + j) * n + k]`.
    pub fn new(dim: usize, constants: Vec<f64>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Dimension { dim, min: 2 });
        }
        if constants.len() != dim * dim * dim {
            return Err(ShapeError::Length {
                expected: dim * dim * dim,
                found: constants.len(),
            }
            .into());
        }
        let alg = Self {
            dim,
            c: constants,
            family: Family::Custom,
        };
        let scale = alg.scale().max(1.0);
        let anti = alg.antisymmetry_defect();
        if anti > ANTISYMMETRY_TOL * scale {
            return Err(Error::InvalidAlgebra {
                law: "antisymmetry",
                defect: anti,
            });
        }
        let jac = alg.jacobi_defect();
        if jac > JACOBI_TOL * scale * scale {
            return Err(Error::InvalidAlgebra {
                law: "the Jacobi identity",
                defect: jac,
            });
        }
        Ok(alg)
    }

    /// Builds an algebra from `(i, j, k, v)` entries meaning `c[i][j][k] = v`
    /// (0-based), completing antisymmetrically. Unlisted entries are zero.
    pub fn from_entries(dim: usize, entries: &[(usize, usize, usize, f64)]) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Dimension { dim, min: 2 });
        }
        let mut c = vec![0.0; dim * dim * dim];
        for &(i, j, k, v) in entries {
            if i >= dim || j >= dim || k >= dim {
                return Err(Error::InvalidParameter("structure-constant index out of range"));
            }
            if i == j {
                if v != 0.0 {
                    return Err(Error::InvalidAlgebra {
                        law: "antisymmetry",
                        defect: v.abs(),
                    });
                }
                continue;
            }
            c[(i * dim + j) * dim + k] = v;
            c[(j * dim + i) * dim + k] = -v;
        }
        Self::new(dim, c)
    }

    pub fn abelian(dim: usize) -> Result<Self> {
        Self::new(dim, vec![0.0; dim * dim * dim])
    }

    /// The algebra of `family` in its canonical basis.
    pub fn build_family(family: Family, n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Dimension { dim: n, min: 3 });
        }
        let mut c = vec![0.0; n * n * n];
        let mut set = |i: usize, j: usize, k: usize, v: f64| {
            c[(i * n + j) * n + k] = v;
            c[(j * n + i) * n + k] = -v;
        };
        match family {
            Family::Rh2SumAbelian => set(0, 1, 1, 1.0),
            Family::RhLineSum => {
                for i in 2..n {
                    set(0, i, i, 1.0);
                }
            }
            Family::Custom => return Err(Error::UnsupportedFamily(family)),
        }
        Ok(Self { dim: n, c, family })
    }

    /// Structure constants of the reduced frame with parameter `lambda`:
    /// `[x_1, x_2] = x_2 + λ x_n` for the first family, `[x_1, x_2] = -λ x_n`
    /// and `[x_1, x_i] = x_i` (`i ≥ 3`) for the second. Tagged `Custom`.
    pub fn milnor_model(family: Family, n: usize, lambda: f64) -> Result<Self> {
        if !(lambda >= 0.0) {
            return Err(Error::InvalidParameter("lambda must be nonnegative"));
        }
        let mut alg = Self::build_family(family, n)?;
        let last = n - 1;
        let mut set = |i: usize, j: usize, k: usize, v: f64| {
            alg.c[(i * n + j) * n + k] = v;
            alg.c[(j * n + i) * n + k] = -v;
        };
        match family {
            Family::Rh2SumAbelian => set(0, 1, last, lambda),
            Family::RhLineSum => set(0, 1, last, -lambda),
            Family::Custom => unreachable!(),
        }
        alg.family = Family::Custom;
        Ok(alg)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn family(&self) -> Family {
        self.family
    }

    /// `c[i][j][k]`, 0-based.
    #[inline]
    pub fn constant(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c[(i * self.dim + j) * self.dim + k]
    }

    pub fn constants(&self) -> &[f64] {
        &self.c
    }

    /// Coordinates of `[e_i, e_j]`.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &[f64] {
        let start = (i * self.dim + j) * self.dim;
        &self.c[start..start + self.dim]
    }

    /// Largest absolute structure constant.
    pub fn scale(&self) -> f64 {
        crate::linalg::max_abs(&self.c)
    }

    /// `[x, y]_k = Σ_{i,j} x_i y_j c[i][j][k]`.
    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim;
        for v in [x, y] {
            if v.len() != n {
                return Err(ShapeError::Length {
                    expected: n,
                    found: v.len(),
                }
                .into());
            }
        }
        let mut out = vec![0.0; n];
        for i in 0..n {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                let w = x[i] * y[j];
                if w == 0.0 {
                    continue;
                }
                for (o, c) in out.iter_mut().zip(self.bracket_basis(i, j)) {
                    *o += w * c;
                }
            }
        }
        Ok(out)
    }

    pub fn antisymmetry_defect(&self) -> f64 {
        let n = self.dim;
        let mut d: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                for k in 0..n {
                    d = d.max((self.constant(i, j, k) + self.constant(j, i, k)).abs());
                }
            }
        }
        d
    }

    /// Max over basis triples and output coordinates of
    /// `|[e_i,[e_j,e_l]] + [e_j,[e_l,e_i]] + [e_l,[e_i,e_j]]|`.
    pub fn jacobi_defect(&self) -> f64 {
        let n = self.dim;
        let mut d: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    for k in 0..n {
                        let mut s = 0.0;
                        for m in 0..n {
                            s += self.constant(j, l, m) * self.constant(i, m, k)
                                + self.constant(l, i, m) * self.constant(j, m, k)
                                + self.constant(i, j, m) * self.constant(l, m, k);
                        }
                        d = d.max(s.abs());
                    }
                }
            }
        }
        d
    }

    /// Structure constants in the basis given by the columns of `p`:
    /// `[p_i, p_j] = Σ_k c'[i][j][k] p_k`. The result is tagged `Custom`.
    pub fn change_basis(&self, p: &BasisChange) -> Result<Self> {
        let n = self.dim;
        let pm = p.matrix();
        if pm.rows() != n {
            return Err(ShapeError::Dimension {
                expected: n,
                rows: pm.rows(),
                cols: pm.cols(),
            }
            .into());
        }
        let pinv = p.inverse_matrix();
        let idx = |a: usize, b: usize, k: usize| (a * n + b) * n + k;

        // t1[a][b][k] = Σ_m c[a][b][m] P⁻¹[k][m]
        let mut t1 = vec![0.0; n * n * n];
        for a in 0..n {
            for b in 0..n {
                let cab = self.bracket_basis(a, b);
                if cab.iter().all(|v| *v == 0.0) {
                    continue;
                }
                for k in 0..n {
                    t1[idx(a, b, k)] = (0..n).map(|m| cab[m] * pinv[(k, m)]).sum();
                }
            }
        }
        // t2[i][b][k] = Σ_a P[a][i] t1[a][b][k]
        let mut t2 = vec![0.0; n * n * n];
        for i in 0..n {
            for a in 0..n {
                let w = pm[(a, i)];
                if w == 0.0 {
                    continue;
                }
                for b in 0..n {
                    for k in 0..n {
                        t2[idx(i, b, k)] += w * t1[idx(a, b, k)];
                    }
                }
            }
        }
        // c'[i][j][k] = Σ_b P[b][j] t2[i][b][k]
        let mut out = vec![0.0; n * n * n];
        for i in 0..n {
            for j in 0..n {
                for b in 0..n {
                    let w = pm[(b, j)];
                    if w == 0.0 {
                        continue;
                    }
                    for k in 0..n {
                        out[idx(i, j, k)] += w * t2[idx(i, b, k)];
                    }
                }
            }
        }
        Ok(Self {
            dim: n,
            c: out,
            family: Family::Custom,
        })
    }

    /// Largest absolute difference between the structure constants of two
    /// algebras of equal dimension.
    pub fn max_constant_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.c
            .iter()
            .zip(&other.c)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Same constants with a different tag. Used when a reduced frame is
    /// known to realise one of the families exactly.
    pub fn with_family(mut self, family: Family) -> Self {
        self.family = family;
        self
    }
}

/// An invertible matrix whose columns are new basis vectors written in the
/// old basis.
#[derive(Clone, Debug)]
pub struct BasisChange {
    matrix: Matrix,
    inverse: Matrix,
}

/// Condition estimate above which a basis change is treated as singular.
const MAX_CONDITION: f64 = 1e14;

impl BasisChange {
    /// Rejects matrices whose inverse fails or whose condition estimate
    /// `n · max|P| · max|P⁻¹|` exceeds `1e14`.
    pub fn new(matrix: Matrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(ShapeError::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            }
            .into());
        }
        let inverse = matrix.inverse()?;
        let cond = matrix.rows() as f64 * matrix.max_abs() * inverse.max_abs();
        if !(cond < MAX_CONDITION) {
            return Err(Error::Singular);
        }
        Ok(Self { matrix, inverse })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            matrix: Matrix::identity(n),
            inverse: Matrix::identity(n),
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn inverse_matrix(&self) -> &Matrix {
        &self.inverse
    }

    pub fn inverse(&self) -> Self {
        Self {
            matrix: self.inverse.clone(),
            inverse: self.matrix.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn e(n: usize, i: usize) -> Vec<f64> {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        v
    }

    fn g_lambda(n: usize, lambda: f64) -> BasisChange {
        let mut m = Matrix::identity(n);
        m[(n - 1, 1)] = -lambda;
        BasisChange::new(m).unwrap()
    }

    #[test]
    fn build_family_constants() {
        let a = LieAlgebra::build_family(Family::Rh2SumAbelian, 3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let expected = match (i, j, k) {
                        (0, 1, 1) => 1.0,
                        (1, 0, 1) => -1.0,
                        _ => 0.0,
                    };
                    assert_eq!(a.constant(i, j, k), expected);
                }
            }
        }
        let b = LieAlgebra::build_family(Family::RhLineSum, 3).unwrap();
        let nonzero: Vec<_> = (0..27)
            .filter(|&x| b.constants()[x] != 0.0)
            .map(|x| (x / 9, (x / 3) % 3, x % 3, b.constants()[x]))
            .collect();
        assert_eq!(nonzero, vec![(0, 2, 2, 1.0), (2, 0, 2, -1.0)]);
    }

    #[test]
    fn build_family_rejects_small_dimension() {
        assert_eq!(
            LieAlgebra::build_family(Family::Rh2SumAbelian, 2).unwrap_err(),
            Error::Dimension { dim: 2, min: 3 }
        );
        assert!(matches!(
            LieAlgebra::build_family(Family::Custom, 4),
            Err(Error::UnsupportedFamily(Family::Custom))
        ));
    }

    #[test]
    fn families_satisfy_jacobi_exactly() {
        for n in 3..=8 {
            for f in Family::SOLVABLE {
                assert_eq!(LieAlgebra::build_family(f, n).unwrap().jacobi_defect(), 0.0);
            }
        }
        assert_eq!(LieAlgebra::abelian(4).unwrap().jacobi_defect(), 0.0);
    }

    #[test]
    fn so3_like_constants_pass_jacobi() {
        let a = LieAlgebra::from_entries(3, &[(0, 1, 2, 1.0), (1, 2, 0, 1.0), (2, 0, 1, 1.0)]).unwrap();
        // brute force over all 27 triples, independent of jacobi_defect
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                for l in 0..3 {
                    let (x, y, z) = (e(3, i), e(3, j), e(3, l));
                    let t1 = a.bracket(&x, &a.bracket(&y, &z).unwrap()).unwrap();
                    let t2 = a.bracket(&y, &a.bracket(&z, &x).unwrap()).unwrap();
                    let t3 = a.bracket(&z, &a.bracket(&x, &y).unwrap()).unwrap();
                    for k in 0..3 {
                        worst = worst.max((t1[k] + t2[k] + t3[k]).abs());
                    }
                }
            }
        }
        assert_eq!(worst, 0.0);
        assert_eq!(a.jacobi_defect(), 0.0);
    }

    #[test]
    fn jacobi_violation_is_rejected() {
        // [e1,e2]=e3, [e1,e3]=e1: the cyclic sum on (e1,e2,e3) is e3
        let err = LieAlgebra::from_entries(3, &[(0, 1, 2, 1.0), (0, 2, 0, 1.0)]).unwrap_err();
        assert!(matches!(err, Error::InvalidAlgebra { law: "the Jacobi identity", .. }));
    }

    #[test]
    fn bracket_examples() {
        let a = LieAlgebra::build_family(Family::Rh2SumAbelian, 3).unwrap();
        assert_eq!(a.bracket(&e(3, 0), &e(3, 1)).unwrap(), e(3, 1));
        let x = [0.3, -1.2, 2.0];
        assert_eq!(a.bracket(&x, &x).unwrap(), vec![0.0; 3]);

        let a4 = LieAlgebra::build_family(Family::Rh2SumAbelian, 4).unwrap();
        let y = [0.0, 1.0, 0.0, -3.0];
        assert_eq!(a4.bracket(&e(4, 0), &y).unwrap(), e(4, 1));

        assert!(matches!(
            a4.bracket(&[1.0, 0.0], &y),
            Err(Error::Shape(ShapeError::Length { expected: 4, found: 2 }))
        ));
    }

    #[test]
    fn change_basis_identity_is_noop() {
        let a = LieAlgebra::build_family(Family::RhLineSum, 5).unwrap();
        let b = a.change_basis(&BasisChange::identity(5)).unwrap();
        assert_eq!(a.constants(), b.constants());
        assert_eq!(b.family(), Family::Custom);
    }

    #[test]
    fn change_basis_by_representative_family_one() {
        let n = 4;
        let a = LieAlgebra::build_family(Family::Rh2SumAbelian, n).unwrap();
        let b = a.change_basis(&g_lambda(n, 2.0)).unwrap();
        // [x'_1, x'_2] = x'_2 + 2 x'_n
        assert_abs_diff_eq!(b.constant(0, 1, 1), 1.0);
        assert_abs_diff_eq!(b.constant(0, 1, n - 1), 2.0);
        let model = LieAlgebra::milnor_model(Family::Rh2SumAbelian, n, 2.0).unwrap();
        assert!(b.max_constant_diff(&model) < 1e-15);
    }

    #[test]
    fn change_basis_by_representative_family_two() {
        let n = 5;
        let a = LieAlgebra::build_family(Family::RhLineSum, n).unwrap();
        let b = a.change_basis(&g_lambda(n, 1.0)).unwrap();
        assert_abs_diff_eq!(b.constant(0, 1, n - 1), -1.0);
        for i in 2..n {
            assert_abs_diff_eq!(b.constant(0, i, i), 1.0);
        }
        let model = LieAlgebra::milnor_model(Family::RhLineSum, n, 1.0).unwrap();
        assert!(b.max_constant_diff(&model) < 1e-15);
    }

    #[test]
    fn change_basis_matches_direct_brackets() {
        // oracle: compute [P col_i, P col_j] in the old basis and compare
        let a = LieAlgebra::build_family(Family::RhLineSum, 4).unwrap();
        let p = Matrix::from_rows(&[
            [1.0, 0.5, 0.0, 0.2],
            [0.0, 2.0, -1.0, 0.0],
            [0.3, 0.0, 1.0, 0.0],
            [0.0, 0.1, 0.0, 1.5],
        ])
        .unwrap();
        let bc = BasisChange::new(p.clone()).unwrap();
        let b = a.change_basis(&bc).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let lhs = a.bracket(&p.column(i), &p.column(j)).unwrap();
                let rhs = p.mul_vec(b.bracket_basis(i, j));
                for k in 0..4 {
                    assert_abs_diff_eq!(lhs[k], rhs[k], epsilon = 1e-13);
                }
            }
        }
    }

    #[test]
    fn singular_basis_change_rejected() {
        let m = Matrix::from_rows(&[[1.0, 2.0, 0.0], [2.0, 4.0, 0.0], [0.0, 0.0, 1.0]]).unwrap();
        assert_eq!(BasisChange::new(m).unwrap_err(), Error::Singular);
    }

    #[test]
    fn from_entries_rejects_out_of_range() {
        assert!(LieAlgebra::from_entries(3, &[(0, 3, 1, 1.0)]).is_err());
    }
}
