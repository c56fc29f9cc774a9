use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("resource: {0}")]
    Resource(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Config(_) | CliError::Json(_) => 2,
            CliError::Resource(_) => 3,
            CliError::Io(_) | CliError::Csv(_) => 2,
        }
    }
}

impl From<qdet_core::Error> for CliError {
    fn from(e: qdet_core::Error) -> Self {
        use qdet_core::Error as E;
        match e {
            E::Resource { .. } | E::Cutoff { .. } | E::NoConvergence { .. } => {
                CliError::Resource(e.to_string())
            }
            other => CliError::Config(other.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
