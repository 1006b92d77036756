use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error in {func}: {msg}")]
    Domain { func: &'static str, msg: String },

    #[error("numerical failure in {func}: {msg}")]
    Numerical { func: &'static str, msg: String },

    #[error("did not converge: {msg}")]
    NonConvergence { msg: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("invalid model comparison: {0}")]
    Comparison(String),

    #[error("shape classification is ambiguous: {0}")]
    AmbiguousShape(String),

    #[error("study aborted: {0}")]
    StudyAborted(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(func: &'static str, msg: impl Into<String>) -> Error {
    Error::Domain { func, msg: msg.into() }
}

pub(crate) fn numerical(func: &'static str, msg: impl Into<String>) -> Error {
    Error::Numerical { func, msg: msg.into() }
}
