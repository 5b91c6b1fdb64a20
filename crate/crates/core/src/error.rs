use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Input text could not be parsed. `line` is 1-based.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Input is well-formed but outside the domain an operation accepts.
    #[error("{0}")]
    Domain(String),

    /// A size limit was exceeded.
    #[error("{what}: {requested} exceeds the configured limit of {limit}")]
    Capacity {
        what: &'static str,
        limit: usize,
        requested: usize,
    },

    #[error("unknown attribute: {0}")]
    UnknownAttribute(String),

    /// Contradictory or invalid configuration.
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }
}
