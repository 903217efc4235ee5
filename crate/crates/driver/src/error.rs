use std::io;
use std::path::PathBuf;

use snbkit_core::QueryTemplateId;

#[derive(Debug, thiserror::Error)]
pub enum DriverError {
    #[error("no parameters for {0}")]
    MissingParameters(QueryTemplateId),
    #[error("no update stream and no synthetic clock span")]
    EmptyClock,
    #[error("invalid workload: {0}")]
    InvalidWorkload(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}:{line}: {reason}", file.display())]
    Parse { file: PathBuf, line: u64, reason: String },
}

pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(io::Error) -> DriverError {
    let path = path.into();
    move |source| DriverError::Io { path, source }
}
