//! Results log, validity rule and summary.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Serialize;
use statrs::statistics::{Data, OrderStatistics};

use crate::error::{io, DriverError};

pub const RESULTS_LOG: &str = "results_log.csv";
pub const SUMMARY: &str = "results_summary.json";
pub const LOG_COLUMNS: [&str; 6] = ["operation", "scheduled_start_time", "actual_start_time", "duration_us", "result_count", "status"];

/// Largest start delay that still counts as on time.
pub const MAX_DELAY_MS: i64 = 1000;
/// Share of operations that must start on time.
pub const ON_TIME_SHARE: f64 = 0.95;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogRecord {
    pub operation: String,
    /// Epoch milliseconds.
    pub scheduled_start_ms: i64,
    /// Epoch milliseconds.
    pub actual_start_ms: i64,
    pub duration_us: u64,
    pub result_count: usize,
    /// `OK` or `ERROR <message>`.
    pub status: String,
    /// Schedule index of the entry or of the complex read a short read follows.
    pub entry: usize,
    /// 0 for scheduled entries, then 1, 2, ... for the short reads after them.
    pub step: usize,
    /// Parameter values joined by `|`.
    pub params: String,
}

impl LogRecord {
    pub fn delay_ms(&self) -> i64 {
        self.actual_start_ms - self.scheduled_start_ms
    }

    pub fn on_time(&self) -> bool {
        self.delay_ms() < MAX_DELAY_MS
    }

    pub fn end_us(&self) -> i64 {
        self.actual_start_ms * 1000 + self.duration_us as i64
    }

    pub fn is_ok(&self) -> bool {
        self.status == "OK"
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ResultsLog {
    /// In completion order.
    pub records: Vec<LogRecord>,
}

impl ResultsLog {
    /// Records of entries at or after schedule index `warmup`.
    pub fn scored(&self, warmup: usize) -> Vec<LogRecord> {
        self.records.iter().filter(|r| r.entry >= warmup).cloned().collect()
    }

    /// Records in schedule order.
    pub fn by_entry(&self) -> Vec<&LogRecord> {
        let mut v: Vec<&LogRecord> = self.records.iter().collect();
        v.sort_by_key(|r| (r.entry, r.step));
        v
    }
}

pub fn write_results_log(dir: &Path, log: &ResultsLog) -> Result<(), DriverError> {
    fs::create_dir_all(dir).map_err(io(dir))?;
    let path = dir.join(RESULTS_LOG);
    let mut out = LOG_COLUMNS.join("|");
    out.push('\n');
    for r in &log.records {
        let status = r.status.replace(['|', '\n'], " ");
        out.push_str(&format!(
            "{}|{}|{}|{}|{}|{}\n",
            r.operation, r.scheduled_start_ms, r.actual_start_ms, r.duration_us, r.result_count, status
        ));
    }
    fs::write(&path, out).map_err(io(&path))
}

/// Reads `results_log.csv`; schedule indexes are taken from line order.
pub fn read_results_log(path: &Path) -> Result<ResultsLog, DriverError> {
    let mut reader = csv::ReaderBuilder::new().delimiter(b'|').quoting(false).from_path(path).map_err(|e| DriverError::Parse {
        file: path.to_path_buf(),
        line: 0,
        reason: e.to_string(),
    })?;
    let parse = |line: u64, reason: String| DriverError::Parse { file: path.to_path_buf(), line, reason };
    let header = reader.headers().map_err(|e| parse(1, e.to_string()))?;
    if header.iter().ne(LOG_COLUMNS) {
        return Err(parse(1, format!("expected header {}", LOG_COLUMNS.join("|"))));
    }
    let mut records = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let line = i as u64 + 2;
        let row = row.map_err(|e| parse(line, e.to_string()))?;
        let num = |k: usize| row[k].parse::<i64>().map_err(|e| parse(line, format!("{}: {e}", LOG_COLUMNS[k])));
        records.push(LogRecord {
            operation: row[0].to_string(),
            scheduled_start_ms: num(1)?,
            actual_start_ms: num(2)?,
            duration_us: num(3)? as u64,
            result_count: num(4)? as usize,
            status: row[5].to_string(),
            entry: i,
            step: 0,
            params: String::new(),
        });
    }
    Ok(ResultsLog { records })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Latency {
    pub count: usize,
    pub p50_us: f64,
    pub p95_us: f64,
    pub p99_us: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidityReport {
    pub operations: usize,
    pub on_time: usize,
    pub on_time_fraction: f64,
    pub valid: bool,
    pub errors: usize,
    /// Operations per second over the wall-clock extent of the log.
    pub throughput: f64,
    pub latency: BTreeMap<String, Latency>,
}

/// Applies the on-time rule and summarises latencies.
pub fn check_validity(records: &[LogRecord]) -> ValidityReport {
    let on_time = records.iter().filter(|r| r.on_time()).count();
    let fraction = if records.is_empty() { 0.0 } else { on_time as f64 / records.len() as f64 };
    let first = records.iter().map(|r| r.actual_start_ms * 1000).min().unwrap_or(0);
    let last = records.iter().map(LogRecord::end_us).max().unwrap_or(0);
    let seconds = (last - first).max(1) as f64 / 1e6;
    let mut durations: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for r in records {
        durations.entry(r.operation.clone()).or_default().push(r.duration_us as f64);
    }
    let latency = durations
        .into_iter()
        .map(|(op, d)| {
            let count = d.len();
            let mut data = Data::new(d);
            let l = Latency { count, p50_us: data.percentile(50), p95_us: data.percentile(95), p99_us: data.percentile(99) };
            (op, l)
        })
        .collect();
    ValidityReport {
        operations: records.len(),
        on_time,
        on_time_fraction: fraction,
        valid: !records.is_empty() && fraction >= ON_TIME_SHARE,
        errors: records.iter().filter(|r| !r.is_ok()).count(),
        throughput: records.len() as f64 / seconds,
        latency,
    }
}

pub fn write_summary(dir: &Path, report: &ValidityReport) -> Result<(), DriverError> {
    fs::create_dir_all(dir).map_err(io(dir))?;
    let path = dir.join(SUMMARY);
    let text = serde_json::to_string_pretty(report).expect("report serializes");
    fs::write(&path, text + "\n").map_err(io(&path))
}
