//! Solvsoliton and Einstein tests: is `Ric = cI + D` for a derivation `D`?

use alloc::vec::Vec;

use crate::curvature::closed_form_ricci;
use crate::derivations::{conjugated_derivation_basis, derivation_basis, DerivationBasis};
use crate::error::{Result, ShapeError};
use crate::lie::LieAlgebra;
use crate::linalg::{self, Matrix};
use crate::metric::GramMatrix;
use crate::reduction::{reduce, MilnorFrame};

/// Singular values below this fraction of the largest are dropped.
const LSQ_CUTOFF: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct SolitonVerdict {
    pub is_solvsoliton: bool,
    /// Soliton constant; meaningful when `is_solvsoliton`.
    pub c: f64,
    /// Coefficients of `D` over the derivation basis.
    pub derivation_coeffs: Vec<f64>,
    /// `‖Ric − cI − D‖_F` at the minimizer.
    pub residual: f64,
    pub is_einstein: bool,
    /// `‖Ric − (tr Ric / n) I‖_F`.
    pub einstein_residual: f64,
}

impl SolitonVerdict {
    /// The derivation `D = Σ a_j D_j`.
    pub fn derivation(&self, basis: &DerivationBasis) -> Matrix {
        let n = basis.matrix_dim();
        basis
            .matrices()
            .iter()
            .zip(&self.derivation_coeffs)
            .fold(Matrix::zeros(n, n), |acc, (d, &a)| acc.add(&d.scaled(a)))
    }
}

fn passes(residual: f64, ric_norm: f64, tol: f64) -> bool {
    if ric_norm == 0.0 {
        residual <= tol
    } else {
        residual <= tol * ric_norm
    }
}

/// Minimizes `‖ric − cI − Σ a_j D_j‖_F` over `(c, a)`.
pub fn solvsoliton_solve(ric: &Matrix, basis: &DerivationBasis, tol: f64) -> Result<SolitonVerdict> {
    if !ric.is_square() {
        return Err(ShapeError::NotSquare {
            rows: ric.rows(),
            cols: ric.cols(),
        }
        .into());
    }
    let n = ric.rows();
    if basis.matrix_dim() != n {
        return Err(ShapeError::Dimension {
            expected: basis.matrix_dim(),
            rows: n,
            cols: n,
        }
        .into());
    }
    let m = basis.len();
    let ident = Matrix::identity(n);
    let mut a = Matrix::zeros(n * n, m + 1);
    for r in 0..n * n {
        a[(r, 0)] = ident.as_slice()[r];
        for (j, d) in basis.matrices().iter().enumerate() {
            a[(r, j + 1)] = d.as_slice()[r];
        }
    }
    let x = linalg::least_squares(&a, ric.as_slice(), LSQ_CUTOFF)?;
    let c = x[0];
    let coeffs = x[1..].to_vec();

    let mut fit = ident.scaled(c);
    for (d, &aj) in basis.matrices().iter().zip(&coeffs) {
        fit = fit.add(&d.scaled(aj));
    }
    let residual = ric.sub(&fit).frobenius_norm();
    let einstein_residual = ric.sub(&ident.scaled(ric.trace() / n as f64)).frobenius_norm();
    let ric_norm = ric.frobenius_norm();

    Ok(SolitonVerdict {
        is_solvsoliton: passes(residual, ric_norm, tol),
        c,
        derivation_coeffs: coeffs,
        residual,
        is_einstein: passes(einstein_residual, ric_norm, tol),
        einstein_residual,
    })
}

/// Verdict for a metric on one of the two families, with its reduction.
#[derive(Clone, Debug)]
pub struct Classification {
    pub reduction: MilnorFrame,
    /// Ricci operator of `k⟨·,·⟩` in the reduced frame.
    pub ric: Matrix,
    /// Verdict for the normalized metric `k⟨·,·⟩`; the constant for
    /// `⟨·,·⟩` itself is `k · c`.
    pub verdict: SolitonVerdict,
}

impl Classification {
    pub fn lambda(&self) -> f64 {
        self.reduction.lambda
    }

    /// Soliton constant of the metric as given rather than normalized.
    pub fn unnormalized_c(&self) -> f64 {
        self.reduction.scale_k * self.verdict.c
    }
}

/// Reduces `gram`, then solves the soliton problem in the reduced frame using
/// the closed-form Ricci operator and `g_λ⁻¹ Der(g) g_λ`.
pub fn classify_metric(alg: &LieAlgebra, gram: &GramMatrix, tol: f64) -> Result<Classification> {
    let der = derivation_basis(alg)?;
    classify_metric_with(alg, &der, gram, tol)
}

/// [`classify_metric`] with `Der(g)` in the canonical basis supplied by the
/// caller, for repeated use on one algebra.
pub fn classify_metric_with(
    alg: &LieAlgebra,
    der: &DerivationBasis,
    gram: &GramMatrix,
    tol: f64,
) -> Result<Classification> {
    let reduction = reduce(alg, gram)?;
    let n = alg.dim();
    if der.matrix_dim() != n {
        return Err(ShapeError::Dimension {
            expected: n,
            rows: der.matrix_dim(),
            cols: der.matrix_dim(),
        }
        .into());
    }
    let ric = closed_form_ricci(alg.family(), n, reduction.lambda)?.ric;
    let der_frame = conjugated_derivation_basis(der, reduction.lambda)?;
    let verdict = solvsoliton_solve(&ric, &der_frame, tol)?;
    Ok(Classification {
        reduction,
        ric,
        verdict,
    })
}
