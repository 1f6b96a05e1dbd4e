use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("value out of floating-point range: {0}")]
    Range(String),

    #[error("grid too coarse: {0}")]
    Resolution(String),

    #[error("estimate unavailable: {0}")]
    EstimateUnavailable(String),

    #[error("accuracy target not reached: {0}")]
    Accuracy(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl LabError {
    /// Validation-type failures (bad input) as opposed to numerical ones.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            LabError::Parameter(_) | LabError::Parse(_) | LabError::Io { .. }
        )
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        LabError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, LabError>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(LabError::Parameter(msg.into()))
}
