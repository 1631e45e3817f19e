use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violated a domain invariant (negative volatility,
    /// missing barrier, moment condition, ...).
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    /// A (family, contract, oracle) combination outside the supported table.
    #[error("unsupported combination: {0}")]
    Unsupported(String),

    /// A numerical routine failed to produce a finite answer.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A persisted file did not match the expected schema.
    #[error("schema mismatch: {0}")]
    Schema(String),

    /// A model file was unreadable, truncated, or of a different version.
    #[error("model format: {0}")]
    ModelFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParam(msg.into())
    }

    pub fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }
}
