use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cannot parse {token:?}: {reason}")]
    Parse { token: String, reason: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("operation not supported for context {0}")]
    UnsupportedContext(String),
}

pub type Result<T> = std::result::Result<T, Error>;
