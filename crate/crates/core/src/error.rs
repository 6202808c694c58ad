use thiserror::Error;

/// Errors raised by the core engine.
///
/// The variants are grouped so that a frontend can map them onto exit
/// statuses: malformed input, violated preconditions, and internal
/// verification failures are kept apart.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("ordinal depth {depth} exceeds the configured cap {cap}")]
    DepthCap { depth: usize, cap: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
