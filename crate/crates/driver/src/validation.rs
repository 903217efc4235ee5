//! Replaying reads against expected results.

use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use snbkit_core::{GraphSnapshot, QueryResultTable, ReadQuery};

use crate::connector::Connector;
use crate::error::{io, DriverError};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationRecord {
    pub query: ReadQuery,
    pub expected: QueryResultTable,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mismatch {
    /// Position in the validation set.
    pub index: usize,
    pub query: ReadQuery,
    /// First differing row, if both sides produced a table.
    pub row: Option<usize>,
    pub detail: String,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{} {} [{}]", self.index, self.query.template(), self.query.param_texts().join("|"))?;
        if let Some(r) = self.row {
            write!(f, " row {r}")?;
        }
        write!(f, ": {}", self.detail)
    }
}

/// Expected results computed by the naive evaluator; bindings it rejects are skipped.
pub fn validation_set(g: &GraphSnapshot, queries: &[ReadQuery]) -> Vec<ValidationRecord> {
    queries
        .iter()
        .filter_map(|q| snbkit_oracle::run(g, q).ok().map(|expected| ValidationRecord { query: q.clone(), expected }))
        .collect()
}

/// Runs every record and reports row-level differences.
pub fn validate_mode(conn: &dyn Connector, set: &[ValidationRecord]) -> Vec<Mismatch> {
    let mut out = Vec::new();
    for (index, rec) in set.iter().enumerate() {
        let mismatch = |row, detail: String| Mismatch { index, query: rec.query.clone(), row, detail };
        match conn.read(&rec.query) {
            Err(e) => out.push(mismatch(None, format!("error: {e}"))),
            Ok(got) => {
                let (a, b) = (&got.rows, &rec.expected.rows);
                if let Some(r) = (0..a.len().min(b.len())).find(|&r| a[r] != b[r]) {
                    out.push(mismatch(Some(r), format!("got {:?}, expected {:?}", a[r], b[r])));
                } else if a.len() != b.len() {
                    out.push(mismatch(Some(a.len().min(b.len())), format!("got {} rows, expected {}", a.len(), b.len())));
                }
            }
        }
    }
    out
}

/// One JSON record per line.
pub fn write_validation_set(path: &Path, set: &[ValidationRecord]) -> Result<(), DriverError> {
    let mut text = String::new();
    for r in set {
        text.push_str(&serde_json::to_string(r).expect("records serialize"));
        text.push('\n');
    }
    fs::write(path, text).map_err(io(path))
}

pub fn read_validation_set(path: &Path) -> Result<Vec<ValidationRecord>, DriverError> {
    let text = fs::read_to_string(path).map_err(io(path))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| DriverError::Parse { file: path.to_path_buf(), line: i as u64 + 1, reason: e.to_string() })
        })
        .collect()
}
