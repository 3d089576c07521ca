use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid grid `{spec}`: {reason}")]
    Grid { spec: String, reason: String },

    #[error("invalid arguments: {0}")]
    Args(String),

    #[error(transparent)]
    Filter(#[from] slidedup::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("manifest {path}: {source}")]
    Manifest {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl BenchError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        BenchError::Io {
            path: path.into(),
            source,
        }
    }

    /// Exit status for the command line: 1 for bad input, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Grid { .. } | BenchError::Args(_) | BenchError::Manifest { .. } => 1,
            BenchError::Filter(_) | BenchError::Io { .. } => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, BenchError>;
