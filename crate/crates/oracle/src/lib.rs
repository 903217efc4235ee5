//! Slow, obviously-correct reference implementations used by tests.

pub mod graph;
pub mod queries;

pub use queries::{run, OracleError};
