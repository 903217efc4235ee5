//! The boundary between the driver and a system under test.

use std::error::Error;
use std::sync::RwLock;

use snbkit_core::{GraphSnapshot, QueryResultTable, ReadQuery, UpdateEvent};

pub type ConnectorError = Box<dyn Error + Send + Sync>;

pub trait Connector: Sync {
    fn read(&self, q: &ReadQuery) -> Result<QueryResultTable, ConnectorError>;
    fn update(&self, e: &UpdateEvent) -> Result<(), ConnectorError>;
}

/// Runs operations on the reference engine inside this process.
pub struct InProcessConnector {
    graph: RwLock<GraphSnapshot>,
}

impl InProcessConnector {
    pub fn new(graph: GraphSnapshot) -> InProcessConnector {
        InProcessConnector { graph: RwLock::new(graph) }
    }

    pub fn into_graph(self) -> GraphSnapshot {
        self.graph.into_inner().unwrap_or_else(|e| e.into_inner())
    }
}

impl Connector for InProcessConnector {
    fn read(&self, q: &ReadQuery) -> Result<QueryResultTable, ConnectorError> {
        let g = self.graph.read().unwrap_or_else(|e| e.into_inner());
        Ok(snbkit_engine::execute(&g, q)?)
    }

    fn update(&self, e: &UpdateEvent) -> Result<(), ConnectorError> {
        let mut g = self.graph.write().unwrap_or_else(|e| e.into_inner());
        Ok(snbkit_engine::apply_insert(&mut g, &e.op)?)
    }
}
