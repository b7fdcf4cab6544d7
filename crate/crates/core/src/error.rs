use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the range over which a special function is validated.
    #[error("argument out of validated range: {0}")]
    Range(String),

    /// Sequence length does not match the grid it is paired with.
    #[error("dimension mismatch: expected {expected} samples, got {got}")]
    Dimension { expected: usize, got: usize },

    /// Invalid parameter values supplied by the caller.
    #[error("configuration error: {0}")]
    Config(String),

    /// A grid or sweep does not cover, or does not resolve, what the computation needs.
    #[error("insufficient numerical coverage: {0}")]
    Coverage(String),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn coverage(msg: impl Into<String>) -> Self {
        Error::Coverage(msg.into())
    }
}
