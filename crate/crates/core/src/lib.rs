//! Core data model shared by the generator, serializers, engine and driver.

pub mod builder;
pub mod cascade;
pub mod error;
pub mod events;
pub mod model;
pub mod query;
pub mod snapshot;
pub mod time;
pub mod validate;

pub use cascade::{apply_plan, delete_cascading, deletion_plan, DeletionPlan};
pub use error::ModelError;
pub use events::{reply_target, DeleteEvent, DeleteOp, PersonInsert, UpdateEvent, UpdateOp};
pub use model::*;
pub use query::{ParamValue, QueryFamily, QueryResultTable, QueryTemplateId, ReadQuery, Row, Value};
pub use snapshot::{knows_key, root_post, EdgeSet, GraphSnapshot};
pub use time::{months_between, Date, DateTime};
pub use validate::{validate_schema, SchemaViolation};
