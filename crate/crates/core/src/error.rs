use thiserror::Error;

/// Failure modes shared by every stage of the simulator.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter set violates a precondition (grid too small, bad filter, ...).
    #[error("configuration error: {0}")]
    Config(String),
    /// An operation was applied to data in the wrong state (e.g. wrong domain).
    #[error("usage error: {0}")]
    Usage(String),
    /// A scalar argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A measurement or fit could not produce a trustworthy number.
    #[error("measurement error: {0}")]
    Measurement(String),
    #[error("format error: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Format(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}
