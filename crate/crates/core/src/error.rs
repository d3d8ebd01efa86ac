use thiserror::Error;

/// Errors raised by the library. Obstructions to a globalization are not
/// errors; they are returned as reports (see [`crate::linking::BuildOutcome`]).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("incompatible data: {0}")]
    Compatibility(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("search exhausted: {0}")]
    Resource(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
