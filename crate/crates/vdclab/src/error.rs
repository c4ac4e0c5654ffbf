use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the domain of validity of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Invalid experiment configuration.
    #[error("config error: {0}")]
    Config(String),

    /// Index or value capacity exceeded.
    #[error("overflow: {0}")]
    Overflow(String),

    /// A verified mathematical check failed. Either a bug, a precision fault,
    /// or a frozen constant that does not hold at the tested scale.
    #[error("check failed: {0}")]
    CheckFailed(String),

    /// Instance degenerate (empty support, zero mean weight, ...).
    #[error("degenerate: {0}")]
    Degenerate(String),

    /// Internal solver failure that should be impossible on well-posed input.
    #[error("solver failure: {0}")]
    Solver(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
