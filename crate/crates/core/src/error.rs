//! Error type shared by every module in the toolkit.

use thiserror::Error;

/// Toolkit-wide error.
///
/// Variants are grouped by failure class so callers (in particular the
/// CLI) can map them onto stable exit codes: configuration problems,
/// data/format problems, and numeric failures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// A file does not conform to its declared format.
    #[error("malformed file: {0}")]
    Format(String),

    /// Input data violates an invariant (labels, dimensions, schemas).
    #[error("invalid data: {0}")]
    Data(String),

    /// A configuration value is out of range or inconsistent.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// A numeric kernel failed to converge or produced a pathological
    /// result.
    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(format!("json: {e}"))
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Format(format!("csv: {e}"))
    }
}

impl Error {
    pub fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }

    pub fn data(msg: impl Into<String>) -> Self {
        Error::Data(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
