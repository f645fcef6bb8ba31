//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },

    #[error("operator dimension {dim} exceeds the dense-storage cap {cap}")]
    DimCap { dim: usize, cap: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("singular matrix: pivot magnitude {pivot:.3e} at column {col} below threshold {threshold:.3e}")]
    SingularMatrix {
        pivot: f64,
        threshold: f64,
        col: usize,
    },

    #[error("eigenvalue iteration did not converge (dim {dim}, max {max_iter} iterations)")]
    EigenConvergence { dim: usize, max_iter: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("projector constraint violated: |l^2+m^2+n^2 - 1/4| = {residual:.3e}")]
    ProjectorConstraint { residual: f64 },

    #[error("B-operator validation failed: {0}")]
    BValidation(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("interpolation node {index} duplicates an earlier node")]
    DuplicateNode { index: usize },

    #[error("samples deviate from the degree-{degree} interpolant by {residual:.3e}")]
    InconsistentSamples { degree: usize, residual: f64 },

    #[error("pole in prefactor: {0}")]
    Pole(String),

    #[error("{relation} requires at least {min} sites, got {got}")]
    ChainTooShort {
        relation: String,
        min: usize,
        got: usize,
    },
}
