use std::path::PathBuf;

use snbkit_core::{ModelError, SchemaViolation};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SerializeError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}:{line}: {reason}", file.display())]
    Parse { file: PathBuf, line: u64, reason: String },
    #[error("loaded graph violates the schema ({} problems, first: {:?})", .0.len(), .0.first())]
    Schema(Vec<SchemaViolation>),
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl SerializeError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> SerializeError {
        SerializeError::Io { path: path.into(), source }
    }

    pub(crate) fn parse(file: impl Into<PathBuf>, line: u64, reason: impl Into<String>) -> SerializeError {
        SerializeError::Parse { file: file.into(), line, reason: reason.into() }
    }
}
