use thiserror::Error;

/// Errors produced by the algebra, measure and lifting operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("normalization error: maximum weight is {max}, expected 1")]
    Normalization { max: f64 },

    #[error("index {index} out of range for a space with {len} points")]
    Index { index: usize, len: usize },

    #[error("space mismatch: {left} points vs {right} points")]
    SpaceMismatch { left: usize, right: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("t-norm mismatch between operands")]
    TNormMismatch,

    #[error("invalid t-norm: {0}")]
    InvalidTNorm(String),

    #[error("invalid grid step {0}: expected 1/2^k")]
    InvalidGridStep(f64),

    #[error("invalid cover: {0}")]
    InvalidCover(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The requested target lies outside the neighborhood where the lift
    /// construction applies.
    #[error("target too far from the base point: {0}")]
    TooFar(String),

    /// A construction ran but its result failed re-verification.
    #[error("construction failed verification: {0}")]
    ConstructionFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
