use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A job, job set or cost model violates one of its invariants.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// The operation needs a different demand model than the one supplied.
    #[error("model mismatch: expected {expected}, got {found}")]
    Model {
        expected: &'static str,
        found: &'static str,
    },

    /// Incompatible configuration (horizon mismatch, nonpositive coefficient, unknown name).
    #[error("configuration error: {0}")]
    Config(String),

    /// The instance is too large for an exhaustive routine.
    #[error("instance too large: {what} is {actual}, limit is {limit}")]
    Size {
        what: &'static str,
        actual: usize,
        limit: usize,
    },

    /// A precondition of the algorithm does not hold for this instance.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Empty input where a nonempty one is required.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("io error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
