//! Milnor-type orthonormal frames for left-invariant Riemannian metrics.
//!
//! The crate works with two families of solvable Lie algebras in the
//! canonical basis `e_1, …, e_n` (documentation uses 1-based indices, the
//! code is 0-based throughout):
//!
//! * [`Family::Rh2SumAbelian`]: `[e_1, e_2] = e_2`, the algebra of the real
//!   hyperbolic plane plus an abelian factor of dimension `n - 2`;
//! * [`Family::RhLineSum`]: `[e_1, e_i] = e_i` for `i = 3..n`, the algebra
//!   of real hyperbolic `(n-1)`-space plus a line.
//!
//! For every inner product on either algebra, [`reduction::reduce`] finds a
//! parameter `λ ≥ 0`, a scale `k > 0` and a frame `x_1, …, x_n` that is
//! orthonormal for `k⟨·,·⟩` and whose brackets are
//!
//! * `[x_1, x_2] = x_2 + λ x_n` (first family), or
//! * `[x_1, x_2] = -λ x_n`, `[x_1, x_i] = x_i` for `i ≥ 3` (second family).
//!
//! The [`curvature`] module computes the Levi-Civita connection, Riemann
//! tensor and Ricci operator of any metric Lie algebra from its structure
//! constants, alongside closed forms for the two families. [`soliton`]
//! decides the solvsoliton condition `Ric = cI + D` by least squares over
//! `span{I} ⊕ Der(g)`.
//!
//! The crate is `no_std` and needs only `alloc`.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod curvature;
pub mod derivations;
mod error;
pub mod lie;
pub mod linalg;
pub mod metric;
pub mod reduction;
pub mod sampling;
pub mod soliton;

pub use curvature::{closed_form_ricci, ricci_operator, signature, RicciReport, Signature};
pub use derivations::{derivation_basis, DerivationBasis};
pub use error::{Error, Result, ShapeError};
pub use lie::{BasisChange, Family, LieAlgebra};
pub use linalg::Matrix;
pub use metric::GramMatrix;
pub use reduction::{reduce, MilnorFrame};
pub use sampling::{sample_metric, RandomMetricSpec};
pub use soliton::{classify_metric, classify_metric_with, solvsoliton_solve, Classification, SolitonVerdict};

/// Default tolerance for residual checks.
pub const DEFAULT_TOL: f64 = 1e-8;
