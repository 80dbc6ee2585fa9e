use crate::lie::Family;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension {dim} is too small (need at least {min})")]
    Dimension { dim: usize, min: usize },
    #[error("shape error: {0}")]
    Shape(#[from] ShapeError),
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("operation is only defined for the two solvable families, got {0}")]
    UnsupportedFamily(Family),
    #[error("structure constants violate {law} (defect {defect:e})")]
    InvalidAlgebra { law: &'static str, defect: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("{0} did not converge")]
    NoConvergence(&'static str),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ShapeError {
    #[error("expected length {expected}, found {found}")]
    Length { expected: usize, found: usize },
    #[error("expected a square matrix, found {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("expected a {expected}x{expected} matrix, found {rows}x{cols}")]
    Dimension {
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error("matrix is not symmetric (defect {defect:e})")]
    Asymmetric { defect: f64 },
}

impl Error {
    /// True for failures caused by the numerics rather than by the input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Singular | Error::NoConvergence(_))
    }
}
