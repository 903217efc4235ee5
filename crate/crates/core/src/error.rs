use thiserror::Error;

use crate::model::{EntityKind, Id};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("duplicate {kind} id {id}")]
    DuplicateId { kind: EntityKind, id: Id },
    #[error("unknown {kind} id {id}")]
    UnknownId { kind: EntityKind, id: Id },
    #[error("duplicate {relation} edge ({a}, {b})")]
    DuplicateEdge { relation: &'static str, a: Id, b: Id },
    #[error("unknown {relation} edge ({a}, {b})")]
    UnknownEdge { relation: &'static str, a: Id, b: Id },
    #[error("{0}")]
    Parse(String),
    #[error("reply chain of message {0} does not end at a post")]
    BrokenReplyChain(Id),
}
