use thiserror::Error;

/// Errors raised by the state, symplectic and oracle layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("matrix is not positive definite (minimum eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("numerical degeneracy: {0}")]
    NumericalDegeneracy(String),

    #[error("invalid index {0}: tail indices start at 1")]
    InvalidIndex(usize),

    #[error("thermal parameter is infinite for a vacuum mode (d = 1)")]
    InfiniteParameter,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported composition: {0}")]
    UnsupportedComposition(String),

    #[error("unsupported displacement: {0}")]
    UnsupportedDisplacement(String),

    #[error("state is not trace class: {0}")]
    NoDensityMatrix(String),

    #[error("state failed validation: {0}")]
    Validation(String),

    #[error("Fock space dimension {dimension} exceeds the memory cap {cap}")]
    Capacity { dimension: usize, cap: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
