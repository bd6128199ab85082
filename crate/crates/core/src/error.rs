//! Error type shared by every stage.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("missing configuration key `{0}`")]
    MissingKey(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index {index} out of range (length {len})")]
    OutOfRange { index: usize, len: usize },

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("malformed cube file: {0}")]
    CubeFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name: name.into(),
            reason: reason.into(),
        }
    }

    /// An invalid-parameter error not tied to a single named field.
    pub fn invalid_config(reason: impl Into<String>) -> Self {
        Error::invalid("config", reason)
    }

    /// True for errors caused by the caller's inputs rather than the environment.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::MissingKey(_)
                | Error::InvalidParameter { .. }
                | Error::DimensionMismatch(_)
                | Error::OutOfRange { .. }
                | Error::Unsupported(_)
                | Error::Json(_)
        )
    }
}
