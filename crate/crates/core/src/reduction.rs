//! Reduction of an arbitrary inner product on either family to a
//! Milnor-type frame.
//!
//! Inner products correspond to `GL(n)/O(n)`, and two group elements give
//! metrics that agree up to scaling and automorphism exactly when they lie in
//! the same double coset `ℝ^×Aut(g) · g · O(n)`. For both families every
//! double coset meets `U = {g_λ = I − λE_{n,2} : λ ≥ 0}`, and the
//! construction below finds `λ` explicitly:
//!
//! 1. right-multiply by an orthogonal `φ₁` so that `g φ₁` is lower triangular
//!    with positive diagonal, with blocks `A₁` (2×2), `A₃`, `A₄`;
//! 2. left-multiply by `φ₂ = diag(A₁⁻¹, A₄⁻¹)`, leaving `[[I, 0], [A₄⁻¹A₃, I]]`;
//! 3. clear the first column of `A₄⁻¹A₃ = (v₁, v₂)` with an automorphism;
//! 4. rotate `v₂` onto `(0, …, 0, −λ)` by `B ∈ SO(n−2)` and conjugate by
//!    `φ₃ = diag(I₂, B)`.
//!
//! The accumulated left factor is `c·ψ` with `c > 0` and `ψ ∈ Aut(g)`; the
//! frame `x_i = ψ g_λ e_i` is orthonormal for `c²⟨·,·⟩`.

use crate::error::{Error, Result, ShapeError};
use crate::derivations::is_forbidden_position;
use crate::lie::{BasisChange, Family, LieAlgebra};
use crate::linalg::{self, Matrix};
use crate::metric::{gram_to_group_element, GramMatrix};

/// `λ` below this is reported as exactly zero.
pub const LAMBDA_SNAP: f64 = 1e-9;
/// Gram matrices with a larger condition number are flagged.
pub const ILL_CONDITIONED: f64 = 1e12;

/// `g_λ = I − λE_{n,2}`.
pub fn representative(n: usize, lambda: f64) -> Matrix {
    let mut g = Matrix::identity(n);
    g[(n - 1, 1)] = -lambda;
    g
}

/// Post-hoc checks on a reduction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Residuals {
    /// `max |k XᵀGX − I|`.
    pub orthonormality: f64,
    /// Largest deviation of the frame's structure constants from the
    /// reduced model, divided by `max(1, λ)`.
    pub bracket_pattern: f64,
    pub condition_number: f64,
    pub ill_conditioned: bool,
}

impl Residuals {
    pub fn within(&self, tol: f64) -> bool {
        self.orthonormality <= tol && self.bracket_pattern <= tol
    }
}

/// Output of [`reduce`].
#[derive(Clone, Debug)]
pub struct MilnorFrame {
    pub family: Family,
    pub lambda: f64,
    /// The frame is orthonormal for `scale_k · ⟨·,·⟩`.
    pub scale_k: f64,
    /// Column `i` is `x_i` in canonical coordinates.
    pub frame: Matrix,
    /// `ψ ∈ Aut(g)` with `frame = ψ g_λ`.
    pub automorphism: Matrix,
    pub residuals: Residuals,
}

impl MilnorFrame {
    /// Structure constants of the model the frame realises.
    pub fn model(&self) -> Result<LieAlgebra> {
        LieAlgebra::milnor_model(self.family, self.frame.rows(), self.lambda)
    }
}

fn require_family(alg: &LieAlgebra) -> Result<()> {
    if alg.family().is_solvable_family() {
        Ok(())
    } else {
        Err(Error::UnsupportedFamily(alg.family()))
    }
}

fn require_dim(alg: &LieAlgebra, m: &Matrix) -> Result<()> {
    let n = alg.dim();
    if m.rows() != n || m.cols() != n {
        return Err(ShapeError::Dimension {
            expected: n,
            rows: m.rows(),
            cols: m.cols(),
        }
        .into());
    }
    Ok(())
}

/// Rotation `B` of the `(n−2)`-block and the resulting `λ ≥ 0` with
/// `B v₂ = (0, …, 0, −λ)`.
///
/// For `n − 2 ≥ 2` this is a Householder reflection followed by a sign flip of
/// the first coordinate, so `det B = 1`. For `n = 3` the block is `1 × 1` and
/// the sign is absorbed by `B = −1`, itself an automorphism.
fn rotate_to_last_axis(v2: &[f64]) -> (Matrix, f64) {
    let m = v2.len();
    let lambda = linalg::norm(v2);
    if m == 1 {
        return if v2[0] > 0.0 {
            (Matrix::diagonal(&[-1.0]), v2[0])
        } else {
            (Matrix::identity(1), -v2[0])
        };
    }
    if lambda == 0.0 {
        return (Matrix::identity(m), 0.0);
    }
    let mut u = v2.to_vec();
    u[m - 1] += lambda;
    let uu = linalg::dot(&u, &u);
    if uu <= (1e-14 * lambda) * (1e-14 * lambda) {
        return (Matrix::identity(m), lambda);
    }
    let mut b = Matrix::from_fn(m, m, |i, j| {
        let delta = if i == j { 1.0 } else { 0.0 };
        delta - 2.0 * u[i] * u[j] / uu
    });
    for j in 0..m {
        b[(0, j)] = -b[(0, j)];
    }
    (b, lambda)
}

struct Reduced {
    lambda: f64,
    scale_c: f64,
    automorphism: Matrix,
}

/// Core construction on a group element `g` (metric `g.⟨·,·⟩₀`).
fn reduce_core(n: usize, g: &Matrix) -> Result<Reduced> {
    // 1. g φ₁ lower triangular: QR of gᵀ = φ₁ R gives g φ₁ = Rᵀ
    let (_phi1, r) = linalg::qr(&g.transpose())?;
    let low = r.transpose();
    let a1 = low.block(0, 2, 0, 2);
    let a3 = low.block(2, n, 0, 2);
    let a4 = low.block(2, n, 2, n);

    // 2. (v₁, v₂) = A₄⁻¹ A₃
    let a4_inv = linalg::lower_triangular_inverse(&a4)?;
    let v = &a4_inv * &a3;
    let v1 = v.column(0);
    let v2 = v.column(1);

    // 4. B v₂ = (0, …, 0, −λ)
    let (b, raw_lambda) = rotate_to_last_axis(&v2);
    let lambda = if raw_lambda < LAMBDA_SNAP { 0.0 } else { raw_lambda };

    // Φ = φ₃ ψ₁ φ₂ with ψ₁ = I − Σ v₁ E_{·,1}; build Φ⁻¹ = φ₂⁻¹ ψ₁⁻¹ φ₃ᵀ
    let phi2_inv = Matrix::block_diag(&a1, &a4);
    let mut psi1_inv = Matrix::identity(n);
    for (i, vi) in v1.iter().enumerate() {
        psi1_inv[(2 + i, 0)] = *vi;
    }
    let phi3_t = Matrix::block_diag(&Matrix::identity(2), &b.transpose());
    let big_phi_inv = &(&phi2_inv * &psi1_inv) * &phi3_t;

    let scale_c = big_phi_inv[(0, 0)];
    if !(scale_c > 0.0) {
        return Err(Error::Singular);
    }
    Ok(Reduced {
        lambda,
        scale_c,
        automorphism: big_phi_inv.scaled(1.0 / scale_c),
    })
}

/// Reduces `⟨·,·⟩_G` on one of the two families to its Milnor-type frame.
pub fn reduce(alg: &LieAlgebra, gram: &GramMatrix) -> Result<MilnorFrame> {
    require_family(alg)?;
    require_dim(alg, gram.matrix())?;
    let g = gram_to_group_element(gram)?;
    finish(alg, gram, &g)
}

/// Same as [`reduce`] for the metric `g.⟨·,·⟩₀` given by a group element.
pub fn reduce_group_element(alg: &LieAlgebra, g: &Matrix) -> Result<MilnorFrame> {
    require_family(alg)?;
    require_dim(alg, g)?;
    let gram = GramMatrix::from_group_element(g)?;
    finish(alg, &gram, g)
}

fn finish(alg: &LieAlgebra, gram: &GramMatrix, g: &Matrix) -> Result<MilnorFrame> {
    let n = alg.dim();
    let red = reduce_core(n, g)?;
    let frame = &red.automorphism * &representative(n, red.lambda);
    let scale_k = red.scale_c * red.scale_c;

    let ortho = (&(&frame.transpose() * gram.matrix()) * &frame)
        .scaled(scale_k)
        .max_abs_diff(&Matrix::identity(n));
    let model = LieAlgebra::milnor_model(alg.family(), n, red.lambda)?;
    let in_frame = alg.change_basis(&BasisChange::new(frame.clone())?)?;
    let bracket_pattern = in_frame.max_constant_diff(&model) / red.lambda.max(1.0);
    let condition_number = gram.condition_number()?;

    Ok(MilnorFrame {
        family: alg.family(),
        lambda: red.lambda,
        scale_k,
        frame,
        automorphism: red.automorphism,
        residuals: Residuals {
            orthonormality: ortho,
            bracket_pattern,
            condition_number,
            ill_conditioned: condition_number > ILL_CONDITIONED,
        },
    })
}

/// Whether two metrics reduce to the same parameter within `tol`.
///
/// Equal parameters put the metrics in the same `ℝ^×Aut(g)`-orbit; unequal
/// parameters are reported as such without a claim of inequivalence.
pub fn orbit_parameter_equal(
    alg: &LieAlgebra,
    g1: &GramMatrix,
    g2: &GramMatrix,
    tol: f64,
) -> Result<bool> {
    let a = reduce(alg, g1)?;
    let b = reduce(alg, g2)?;
    Ok((a.lambda - b.lambda).abs() <= tol)
}

/// Whether `m` lies in `ℝ^×Aut(g)` for one of the two families: the zero
/// pattern
///
/// ```text
/// ⎡ x₁ 0 │ 0 ⋯ 0 ⎤
/// ⎢ *  x₂│ 0 ⋯ 0 ⎥
/// ⎢ *  0 │       ⎥
/// ⎢ ⋮  ⋮ │   B   ⎥
/// ⎣ *  0 │       ⎦
/// ```
///
/// and, after dividing by `c = m[0][0]`, `ψ[e_i,e_j] = [ψe_i, ψe_j]`.
/// Returns `false` for custom algebras, where no pattern is known.
pub fn validate_aut_element(alg: &LieAlgebra, m: &Matrix, tol: f64) -> bool {
    let n = alg.dim();
    if !alg.family().is_solvable_family() || m.rows() != n || m.cols() != n {
        return false;
    }
    let s = m.max_abs();
    if s == 0.0 {
        return false;
    }
    for i in 0..n {
        for j in 0..n {
            if i == 0 && j == 0 {
                continue;
            }
            if is_forbidden_position(i, j) && m[(i, j)].abs() > tol * s {
                return false;
            }
        }
    }
    let c = m[(0, 0)];
    if c.abs() <= tol * s {
        return false;
    }
    let psi = m.scaled(1.0 / c);
    let ps = psi.max_abs();
    if BasisChange::new(psi.clone()).is_err() {
        return false;
    }
    let cols: alloc::vec::Vec<alloc::vec::Vec<f64>> = (0..n).map(|j| psi.column(j)).collect();
    let slack = tol * ps.max(1.0) * ps.max(1.0) * alg.scale().max(1.0);
    for i in 0..n {
        for j in (i + 1)..n {
            let lhs = psi.mul_vec(alg.bracket_basis(i, j));
            let rhs = match alg.bracket(&cols[i], &cols[j]) {
                Ok(v) => v,
                Err(_) => return false,
            };
            if lhs.iter().zip(&rhs).any(|(a, b)| (a - b).abs() > slack) {
                return false;
            }
        }
    }
    true
}
