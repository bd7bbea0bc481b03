use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no pairing exists on a graph of odd order {0}")]
    NoPairingExists(usize),

    #[error("invalid pairing: {0}")]
    InvalidPairing(String),

    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("search budget of {0} nodes exceeded")]
    BudgetExceeded(u64),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
