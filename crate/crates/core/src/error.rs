use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation (negative time,
    /// `u > t` where ordering is required, ...).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A function sample or a matrix entry came out NaN or infinite.
    #[error("non-finite value: {0}")]
    Numeric(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("matrix is not positive definite even with diagonal jitter {max_jitter:e} x max(diag)")]
    NotPositiveDefinite { max_jitter: f64 },

    #[error("insufficient resolution: {0}")]
    Resolution(String),

    #[error("index ({index}) out of range for length {len}")]
    Index { index: usize, len: usize },

    #[error("malformed ensemble file: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
