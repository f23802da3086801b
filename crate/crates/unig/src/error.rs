//! Command-level errors and their process exit codes: 1 for configuration
//! and data problems, 2 for numeric divergence during training.

use thiserror::Error;
use unig_core::{DataError, HypergraphError, NnError, ProjectionError};

use crate::schema::SchemaError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Schema(#[from] SchemaError),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Structure(#[from] HypergraphError),
    #[error(transparent)]
    Projection(#[from] ProjectionError),
    #[error(transparent)]
    Train(#[from] NnError),
    #[error("invalid --{flag} value {value:?}, expected {expected}")]
    BadFlag {
        flag: &'static str,
        value: String,
        expected: &'static str,
    },
    #[error("missing {0}")]
    Missing(&'static str),
    #[error("invalid {name}={value:?}, expected {expected}")]
    BadEnv {
        name: &'static str,
        value: String,
        expected: &'static str,
    },
    #[error("cannot read {path}: {source}")]
    ReadFile {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    WriteFile {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed config {path}: {source}")]
    BadConfig {
        path: String,
        source: serde_json::Error,
    },
    #[error("every sweep trial diverged; try smaller learning rates")]
    AllTrialsDiverged,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Train(NnError::Diverged { .. }) | CliError::AllTrialsDiverged => 2,
            _ => 1,
        }
    }
}
