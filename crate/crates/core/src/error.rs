use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Arguments that do not fit together: mismatched alphabets or
    /// dimensions, indices out of range, malformed matrices.
    #[error("usage error: {0}")]
    Usage(String),

    /// Inputs of the right shape that fall outside an operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A pairing asked for a word longer than the signature's truncation.
    #[error("truncation error: word of length {len} exceeds truncation level {depth}")]
    Truncation { len: usize, depth: usize },

    /// A check configuration that cannot be evaluated as requested.
    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

/// A failure to read text input. `line` is 1-based when known; `column` is a
/// 1-based character offset within the line (or within a one-line input).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub message: String,
}

impl ParseError {
    pub fn at_column(column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line: None,
            column: Some(column),
            message: message.into(),
        }
    }

    pub fn at_line(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line: Some(line),
            column: None,
            message: message.into(),
        }
    }

    pub fn general(message: impl Into<String>) -> Self {
        ParseError {
            line: None,
            column: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, self.column) {
            (Some(l), Some(c)) => {
                write!(f, "parse error at line {l}, column {c}: {}", self.message)
            }
            (Some(l), None) => write!(f, "parse error at line {l}: {}", self.message),
            (None, Some(c)) => write!(f, "parse error at column {c}: {}", self.message),
            (None, None) => write!(f, "parse error: {}", self.message),
        }
    }
}
