use thiserror::Error;

use snbkit_core::{EntityKind, Id, ModelError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("binding refers to unknown {kind} {id}")]
    UnknownBindingId { kind: EntityKind, id: Id },
    #[error("invalid binding: {0}")]
    InvalidBinding(String),
    #[error("path length range {min}..={max} exceeds the cap of {cap}")]
    RangeTooLarge { min: i64, max: i64, cap: u32 },
    #[error("update references a missing entity: {0}")]
    DependencyMissing(ModelError),
    #[error(transparent)]
    Model(#[from] ModelError),
}
