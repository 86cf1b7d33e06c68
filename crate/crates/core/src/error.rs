use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A vertex or arc ID outside the valid range.
    #[error("line {line}: id {id} out of range [{min}, {max}]")]
    Range { line: usize, id: u64, min: u64, max: u64 },

    /// Input that parses but contradicts itself or another input.
    #[error("inconsistent input: {0}")]
    Consistency(String),

    /// Binary artifact with bad magic, unknown version or truncated payload.
    #[error("artifact format: {0}")]
    Format(String),

    /// An operation was invoked in the wrong pipeline state.
    #[error("invalid state: {0}")]
    State(String),

    /// A caller-asserted precondition turned out to be false at runtime.
    #[error("contract violation: {0}")]
    ContractViolation(String),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }

    pub(crate) fn consistency(msg: impl Into<String>) -> Self {
        Error::Consistency(msg.into())
    }

    pub(crate) fn state(msg: impl Into<String>) -> Self {
        Error::State(msg.into())
    }
}
