use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The requested computation exceeds the configured size or memory budget.
    #[error("size error: {0}")]
    Size(String),
    /// A phase value is too large to be reduced modulo 1 at the required accuracy.
    #[error("precision error: {0}")]
    Precision(String),
    /// A lookup fell outside a precomputed table.
    #[error("range error: {0}")]
    Range(String),
    /// A phase family does not satisfy the derivative hypotheses asked of it.
    #[error("family error: {0}")]
    Family(String),
    /// A relation that holds by construction failed on computed data.
    #[error("check failed: {0}")]
    Check(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn size(msg: impl Into<String>) -> Self {
        Error::Size(msg.into())
    }
}
