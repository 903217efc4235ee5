use snbkit_driver::*;

fn record(delay_ms: i64, duration_us: u64) -> LogRecord {
    LogRecord {
        operation: "IC1".into(),
        scheduled_start_ms: 10_000,
        actual_start_ms: 10_000 + delay_ms,
        duration_us,
        result_count: 1,
        status: "OK".into(),
        entry: 0,
        step: 0,
        params: String::new(),
    }
}

fn log_with_late(late: usize) -> Vec<LogRecord> {
    (0..100).map(|i| record(if i < late { 1500 } else { 3 }, 100)).collect()
}

#[test]
fn all_on_time_passes() {
    let r = check_validity(&log_with_late(0));
    assert!(r.valid);
    assert_eq!(r.on_time_fraction, 1.0);
}

#[test]
fn ninety_five_percent_is_the_threshold() {
    assert!(!check_validity(&log_with_late(6)).valid);
    assert!(check_validity(&log_with_late(5)).valid);
}

#[test]
fn fraction_matches_a_hand_count() {
    let delays = [0, 999, 1000, 1001, 250, -3, 5000, 10];
    let log: Vec<LogRecord> = delays.iter().map(|d| record(*d, 10)).collect();
    let r = check_validity(&log);
    assert_eq!(r.on_time, 5);
    assert_eq!(r.on_time_fraction, 5.0 / 8.0);
    assert!(!r.valid);
}

#[test]
fn empty_log_is_not_valid() {
    assert!(!check_validity(&[]).valid);
}

#[test]
fn latency_percentiles_per_operation() {
    let mut log: Vec<LogRecord> = (1..=100).map(|i| record(0, i * 10)).collect();
    log.push(LogRecord { operation: "IS1".into(), ..record(0, 7) });
    let r = check_validity(&log);
    let ic1 = &r.latency["IC1"];
    assert_eq!(ic1.count, 100);
    assert!(ic1.p50_us >= 500.0 && ic1.p50_us <= 510.0, "{}", ic1.p50_us);
    assert!(ic1.p99_us >= 990.0);
    assert_eq!(r.latency["IS1"].p95_us, 7.0);
    assert!(r.throughput > 0.0);
}

#[test]
fn results_log_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let mut log = ResultsLog { records: log_with_late(6) };
    log.records[2].status = "ERROR bad|thing".into();
    write_results_log(dir.path(), &log).unwrap();
    let text = std::fs::read_to_string(dir.path().join(RESULTS_LOG)).unwrap();
    assert!(text.starts_with("operation|scheduled_start_time|actual_start_time|duration_us|result_count|status\n"));
    let back = read_results_log(&dir.path().join(RESULTS_LOG)).unwrap();
    assert_eq!(back.records.len(), 100);
    assert_eq!(back.records[2].status, "ERROR bad thing");
    assert_eq!(check_validity(&back.records).on_time, 94);
    write_summary(dir.path(), &check_validity(&back.records)).unwrap();
    let summary: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join(SUMMARY)).unwrap()).unwrap();
    assert_eq!(summary["valid"], false);
}

#[test]
fn malformed_log_reports_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join(RESULTS_LOG);
    std::fs::write(&path, "operation|scheduled_start_time|actual_start_time|duration_us|result_count|status\nIC1|1|2|x|0|OK\n").unwrap();
    match read_results_log(&path) {
        Err(DriverError::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("{other:?}"),
    }
}
