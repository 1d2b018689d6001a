use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid distance matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid variant: {0}")]
    InvalidVariant(String),

    #[error("point index {index} out of range for {n} points")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("anchor set is empty")]
    EmptyAnchorSet,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("projection of point {index} has near-zero norm; resample the subspace")]
    ZeroProjection { index: usize },

    #[error("spherical point {index} has norm {norm} (must be 1 within {tolerance})")]
    NotUnitNorm {
        index: usize,
        norm: f64,
        tolerance: f64,
    },
}
