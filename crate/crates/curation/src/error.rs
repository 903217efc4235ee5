use std::io;
use std::path::PathBuf;

use snbkit_core::QueryTemplateId;

#[derive(Debug, thiserror::Error)]
pub enum CurationError {
    #[error("{template}: {available} candidates for {needed} bindings (band {band:.2})")]
    InsufficientCandidates { template: QueryTemplateId, available: usize, needed: usize, band: f64 },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}:{line}: {reason}", file.display())]
    Parse { file: PathBuf, line: u64, reason: String },
}

pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(io::Error) -> CurationError {
    let path = path.into();
    move |source| CurationError::Io { path, source }
}
