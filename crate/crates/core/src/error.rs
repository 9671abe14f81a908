use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed input: bad element, length mismatch, rank-deficient matrix.
    #[error("validation error: {0}")]
    Validation(String),
    /// A mathematically undefined operation, such as inverting zero.
    #[error("domain error: {0}")]
    Domain(String),
    /// An exhaustive scan or table would exceed its configured size limit.
    #[error("resource error: {what} needs {needed} entries, cap is {cap}")]
    Resource { what: String, needed: u128, cap: u128 },
    /// A verifier was called on an input its inequality does not cover.
    #[error("precondition unmet: {0}")]
    Precondition(String),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
