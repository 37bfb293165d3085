use thiserror::Error;

/// Errors produced by the search machinery, the objectives and the estimators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CbsarsError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The objective returned a NaN or infinite value.
    #[error("objective returned non-finite value {value} at {point:?}")]
    Evaluation { point: Vec<f64>, value: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// A zero-norm state where a logarithm of the norm is required.
    #[error("degenerate state: {0}")]
    DegenerateState(String),

    /// Reached a state the update equations cannot produce, e.g. a non-positive step-size.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, CbsarsError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(CbsarsError::InvalidInput(msg.into()))
}
