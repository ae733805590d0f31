use thiserror::Error;

/// Errors raised by graph construction, entropy evaluation and the search routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed or inconsistent input (bad vertex id, overlapping sets, size mismatch).
    #[error("invalid input: {0}")]
    Input(String),

    /// The input is well formed but the quantity is undefined on it.
    #[error("domain error: {0}")]
    Domain(String),

    /// The operation needs a connected graph.
    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },

    /// Exhaustive routines refuse instances above their enumeration limit.
    #[error("capacity exceeded for {what}: size {size} > limit {limit}")]
    Capacity {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    /// Text parse failure, with the 1-based line number.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A randomized generator ran out of attempts; retrying with another seed may succeed.
    #[error("retry budget exhausted: {0}")]
    Retryable(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
