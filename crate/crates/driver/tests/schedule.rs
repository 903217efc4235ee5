use snbkit_core::{DateTime, QueryTemplateId, ReadQuery, UpdateEvent, UpdateOp};
use snbkit_driver::*;

fn knows_stream(n: usize, gap_ms: i64) -> Vec<UpdateEvent> {
    (0..n)
        .map(|i| {
            let t = DateTime::from_millis(1_000_000 + i as i64 * gap_ms);
            UpdateEvent { time: t, dependency_time: t, op: UpdateOp::AddKnows { person1: 1, person2: i as u64 + 2, date: t } }
        })
        .collect()
}

fn binding(t: QueryTemplateId) -> ReadQuery {
    let texts: Vec<&str> = ReadQuery::param_names(t)
        .iter()
        .map(|n| match *n {
            n if n.ends_with("Date") => "2010-01-01",
            n if n.ends_with("Id") || n.ends_with("Days") || n.ends_with("Year") || n == "month" => "1",
            _ => "x",
        })
        .collect();
    ReadQuery::from_texts(t, &texts).unwrap()
}

fn params_for_all() -> Parameters {
    (1..=14).map(|ic| (QueryTemplateId::ic(ic), vec![binding(QueryTemplateId::ic(ic))])).collect()
}

fn count(s: &[ScheduleEntry], label: &str) -> usize {
    s.iter().filter(|e| e.operation.label() == label).count()
}

#[test]
fn frequencies_set_instance_counts() {
    let params = params_for_all();
    let wd = WorkloadDefinition::default();
    let s = build_schedule(&knows_stream(2600, 10), &params, &wd).unwrap();
    assert_eq!(count(&s, "IC1"), 100);
    assert_eq!(count(&s, "IC9"), 16);
    for ic in 1..=14u8 {
        assert_eq!(count(&s, &format!("IC{ic}")), 2600 / wd.frequency(ic) as usize);
    }
    assert_eq!(count(&s, "IU8"), 2600);
}

#[test]
fn reads_follow_their_update_and_times_never_decrease() {
    let s = build_schedule(&knows_stream(300, 7), &params_for_all(), &WorkloadDefinition::default()).unwrap();
    assert!(s.windows(2).all(|w| w[0].scheduled_ms <= w[1].scheduled_ms));
    let mut updates = 0;
    for e in &s {
        if e.operation.is_update() {
            assert_eq!(e.updates_before, updates);
            updates += 1;
        } else {
            assert_eq!(e.updates_before, updates);
        }
    }
    let first_ic11 = s.iter().position(|e| e.operation.label() == "IC11").unwrap();
    assert_eq!(s[first_ic11].updates_before, 16);
}

#[test]
fn empty_parameters_are_rejected() {
    let mut params = params_for_all();
    params.insert(QueryTemplateId::ic(4), Vec::new());
    let err = build_schedule(&knows_stream(100, 5), &params, &WorkloadDefinition::default()).unwrap_err();
    assert!(matches!(err, DriverError::MissingParameters(t) if t == QueryTemplateId::ic(4)));
}

#[test]
fn doubling_tcr_halves_the_span() {
    let updates = knows_stream(500, 40);
    let params = params_for_all();
    let one = build_schedule(&updates, &params, &WorkloadDefinition { tcr: 1.0, ..Default::default() }).unwrap();
    let two = build_schedule(&updates, &params, &WorkloadDefinition { tcr: 2.0, ..Default::default() }).unwrap();
    assert_eq!(span_ms(&one), 499 * 40);
    assert_eq!(span_ms(&two), 499 * 20);
    let labels = |s: &[ScheduleEntry]| s.iter().map(|e| e.operation.clone()).collect::<Vec<_>>();
    assert_eq!(labels(&one), labels(&two));
    for (a, b) in one.iter().zip(&two) {
        assert_eq!(b.scheduled_ms, (a.scheduled_ms as f64 / 2.0).round() as i64);
    }
}

#[test]
fn schedule_is_a_function_of_the_seed() {
    let mut params = Parameters::new();
    for ic in 1..=14 {
        params.insert(QueryTemplateId::ic(ic), (0..7).map(|p| ReadQuery::Ic7 { person_id: p }).collect());
    }
    let updates = knows_stream(400, 3);
    let wd = |seed| WorkloadDefinition { seed, ..Default::default() };
    let a = build_schedule(&updates, &params, &wd(5)).unwrap();
    assert_eq!(a, build_schedule(&updates, &params, &wd(5)).unwrap());
    let reads = |s: &[ScheduleEntry]| s.iter().filter(|e| !e.operation.is_update()).map(|e| e.operation.clone()).collect::<Vec<_>>();
    let others: Vec<_> = (6..10).map(|s| reads(&build_schedule(&updates, &params, &wd(s)).unwrap())).collect();
    assert!(others.iter().any(|o| *o != reads(&a)));
}

#[test]
fn synthetic_clock_without_updates() {
    let params = params_for_all();
    assert!(matches!(build_schedule(&[], &params, &WorkloadDefinition::default()), Err(DriverError::EmptyClock)));
    let wd = WorkloadDefinition { synthetic_span_ms: Some(26_000), update_interleave_ms: 100, ..Default::default() };
    let s = build_schedule(&[], &params, &wd).unwrap();
    assert_eq!(count(&s, "IC1"), 10);
    assert_eq!(s.iter().find(|e| e.operation.label() == "IC1").unwrap().scheduled_ms, 2600);
}

#[test]
fn invalid_workloads_are_rejected() {
    let params = params_for_all();
    let bad = WorkloadDefinition { tcr: 0.0, ..Default::default() };
    assert!(matches!(build_schedule(&knows_stream(5, 1), &params, &bad), Err(DriverError::InvalidWorkload(_))));
    let mut zero = WorkloadDefinition::default();
    zero.frequencies[3] = 0;
    assert!(matches!(build_schedule(&knows_stream(5, 1), &params, &zero), Err(DriverError::InvalidWorkload(_))));
}

#[test]
fn scale_factor_rows() {
    assert_eq!(frequencies_for("sf1").unwrap()[8], 157);
    assert_eq!(frequencies_for("SF1000").unwrap()[7], 1);
    assert!(frequencies_for("SF2").is_none());
}
