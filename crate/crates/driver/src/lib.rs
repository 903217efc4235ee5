//! Workload construction, timed execution, auditing and validation.

pub mod connector;
pub mod error;
pub mod log;
pub mod runner;
pub mod schedule;
pub mod validation;
pub mod workload;

pub use connector::{Connector, ConnectorError, InProcessConnector};
pub use error::DriverError;
pub use log::{
    check_validity, read_results_log, write_results_log, write_summary, Latency, LogRecord, ResultsLog, ValidityReport, MAX_DELAY_MS,
    ON_TIME_SHARE, RESULTS_LOG, SUMMARY,
};
pub use runner::run;
pub use schedule::{build_schedule, span_ms, Operation, Parameters, ScheduleEntry};
pub use validation::{read_validation_set, validate_mode, validation_set, write_validation_set, Mismatch, ValidationRecord};
pub use workload::{frequencies_for, WorkloadDefinition, FREQUENCIES};
