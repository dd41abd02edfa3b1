use thiserror::Error;

/// Errors produced by the library.
///
/// Resource errors are kept separate from invalid input so callers (the CLI in
/// particular) can map them onto distinct exit codes.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("resource budget exceeded: {0}")]
    Resource(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}

pub(crate) fn resource<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Resource(msg.into()))
}
