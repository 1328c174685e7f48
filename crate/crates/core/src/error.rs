use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the workbench.
#[derive(Debug, Error)]
pub enum KdError {
    #[error("cannot parse architecture token `{token}`: {reason}")]
    Parse { token: String, reason: String },

    #[error("shape error: {0}")]
    Shape(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("invalid state: {0}")]
    State(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("format error in {source_name} at byte {offset}: {reason}")]
    Format {
        source_name: String,
        offset: u64,
        reason: String,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("training diverged: {0}")]
    Diverged(String),
}

impl KdError {
    pub(crate) fn format(source_name: impl Into<String>, offset: u64, reason: impl Into<String>) -> Self {
        KdError::Format {
            source_name: source_name.into(),
            offset,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        KdError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = KdError> = std::result::Result<T, E>;
