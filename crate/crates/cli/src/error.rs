use std::path::PathBuf;

use hypershape::Error as CoreError;
use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const FAILURE: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const UNSUPPORTED_SHAPE: i32 = 3;
    pub const RESOURCE: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("{0}")]
    Usage(String),

    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),

    #[error("manifest: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e {
                CoreError::UnsupportedShape(_) => exit::UNSUPPORTED_SHAPE,
                CoreError::DegenerateAxis { .. }
                | CoreError::DimensionTooLarge { .. }
                | CoreError::EmptyImage => exit::RESOURCE,
                _ => exit::USAGE,
            },
            CliError::Usage(_) | CliError::Read { .. } | CliError::Csv(_) => exit::USAGE,
            CliError::Write { .. } | CliError::Json(_) => exit::FAILURE,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
