//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by the library.
///
/// The variants mirror how callers are expected to react: `Usage` means the
/// caller violated a precondition, `Arithmetic` is a division-by-zero class
/// failure, `Precision` signals that a truncated object was not carried far
/// enough, `Domain` rejects mathematically excluded inputs (pole at a prime,
/// ramified pair), and `Invariant` reports an internal consistency check that
/// failed — which indicates a bug, not bad input.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("config mismatch: {0}")]
    ConfigMismatch(String),
    #[error("arithmetic error: {0}")]
    Arithmetic(String),
    #[error("precision error: {0}")]
    Precision(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal invariant violation: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }
    pub fn arithmetic(msg: impl Into<String>) -> Self {
        Error::Arithmetic(msg.into())
    }
    pub fn precision(msg: impl Into<String>) -> Self {
        Error::Precision(msg.into())
    }
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }
    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }
}
