use thiserror::Error;

/// Errors produced by the analyses in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("terminal index {index} out of range 1..={m}")]
    TerminalOutOfRange { index: usize, m: usize },

    #[error("{what}: m = {m} exceeds the cap of {cap}")]
    CapExceeded { what: &'static str, m: usize, cap: usize },

    #[error("outcome space too large: {bits} bits exceeds the cap of {cap}")]
    OutcomeSpaceTooLarge { bits: usize, cap: usize },

    #[error("terminal counts differ: {left} vs {right}")]
    MismatchedTerminals { left: usize, right: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A legitimate precondition of an analysis does not hold for the input.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// A result that is guaranteed mathematically failed to hold; indicates a bug.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
