use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Two vectors that must share the issue count do not.
    #[error("dimension mismatch: expected {expected} issues, found {found}")]
    Dimension { expected: usize, found: usize },

    /// An argument lies outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// An exhaustive search would exceed its configured cap.
    #[error("resource cap exceeded: {what} is {value}, cap is {cap}")]
    Resource { what: &'static str, value: u128, cap: u128 },

    /// A guarantee the algorithms rely on did not hold.
    #[error("contract violation: {0}")]
    Contract(String),

    /// Malformed text input; line and column are 1-based.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn parse(line: usize, column: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: msg.into(),
        }
    }

    pub(crate) fn check_dims(expected: usize, found: usize) -> Result<()> {
        if expected == found {
            Ok(())
        } else {
            Err(Error::Dimension { expected, found })
        }
    }
}
