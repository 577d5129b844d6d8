use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Presentation-language syntax error with a byte position in the input.
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    /// A configured search or enumeration budget was exhausted.
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    /// A group-order cap (dense table, wreath materialization, ...) was hit.
    #[error("order cap exceeded: {0}")]
    CapExceeded(String),

    /// A precondition on arguments failed.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A built-in cross-check disagreed; this indicates a real inconsistency,
    /// not a user error.
    #[error("internal verification failed: {0}")]
    VerificationFailed(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse { position, message: message.into() }
    }

    pub fn invalid(message: impl Into<String>) -> Self {
        Error::InvalidArgument(message.into())
    }

    pub fn budget(message: impl Into<String>) -> Self {
        Error::BudgetExceeded(message.into())
    }

    pub fn cap(message: impl Into<String>) -> Self {
        Error::CapExceeded(message.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
