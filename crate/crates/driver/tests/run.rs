use std::collections::HashMap;

use snbkit_core::{Id, QueryTemplateId, ReadQuery, UpdateOp};
use snbkit_datagen::{generate, GeneratorConfig, Generated};
use snbkit_driver::*;

fn data(seed: u64) -> Generated {
    generate(&GeneratorConfig::with_persons(150, seed)).unwrap()
}

fn sampled_params(d: &Generated) -> Parameters {
    let ics: Vec<QueryTemplateId> = (1..=14).map(QueryTemplateId::ic).collect();
    snbkit_curation::parameter_set(&snbkit_curation::curate_all(&d.snapshot, &d.stats, &ics, 10, 0).unwrap())
}

fn fast(seed: u64, span_ms: f64, updates: &[snbkit_core::UpdateEvent]) -> WorkloadDefinition {
    let sim = (updates.last().unwrap().time.millis() - updates[0].time.millis()) as f64;
    WorkloadDefinition { tcr: sim / span_ms, seed, frequencies: [5; 14], ..Default::default() }
}

#[test]
fn single_complex_read_logs_itself_and_its_short_reads() {
    let d = data(1);
    let p = *d.snapshot.persons().keys().next().unwrap();
    let schedule = vec![ScheduleEntry { scheduled_ms: 0, operation: Operation::Read(ReadQuery::Ic13 { person1_id: p, person2_id: p }), updates_before: 0 }];
    let log = run(&schedule, &InProcessConnector::new(d.snapshot), &WorkloadDefinition::default(), 2);
    assert_eq!(log.records.iter().filter(|r| r.operation == "IC13").count(), 1);
    assert!(log.records.iter().all(|r| r.operation == "IC13" || r.operation.starts_with("IS")));
}

#[test]
fn replaying_only_updates_rebuilds_the_full_graph() {
    let d = data(2);
    let wd = fast(0, 500.0, &d.updates);
    let schedule: Vec<ScheduleEntry> = build_schedule(&d.updates, &Parameters::new(), &WorkloadDefinition { frequencies: [u32::MAX; 14], ..wd })
        .unwrap();
    let conn = InProcessConnector::new(d.snapshot.clone());
    let log = run(&schedule, &conn, &wd, 4);
    assert_eq!(log.records.len(), d.updates.len());
    assert!(log.records.iter().all(LogRecord::is_ok), "{:?}", log.records.iter().find(|r| !r.is_ok()));
    assert!(conn.into_graph() == d.full);
}

#[test]
fn replies_never_start_before_their_parent_is_inserted() {
    let d = data(3);
    let wd = fast(1, 800.0, &d.updates);
    let schedule = build_schedule(&d.updates, &sampled_params(&d), &wd).unwrap();
    let log = run(&schedule, &InProcessConnector::new(d.snapshot.clone()), &wd, 4);
    let inserted_by: HashMap<Id, usize> = schedule
        .iter()
        .enumerate()
        .filter_map(|(i, e)| match &e.operation {
            Operation::Update(u) => match &u.op {
                UpdateOp::AddPost(m) | UpdateOp::AddComment(m) => Some((m.id, i)),
                _ => None,
            },
            _ => None,
        })
        .collect();
    let rec: HashMap<(usize, usize), &LogRecord> = log.records.iter().map(|r| ((r.entry, r.step), r)).collect();
    let mut audited = 0;
    for (i, e) in schedule.iter().enumerate() {
        let Operation::Update(u) = &e.operation else { continue };
        let UpdateOp::AddComment(c) = &u.op else { continue };
        let Some(&parent) = c.reply_of().and_then(|p| inserted_by.get(&p)) else { continue };
        let (child, parent) = (rec[&(i, 0)], rec[&(parent, 0)]);
        assert!(child.actual_start_ms * 1000 >= parent.end_us() - 1000, "IU7 at {i} started before its parent finished");
        assert!(log.records.iter().position(|r| std::ptr::eq(r, parent)) < log.records.iter().position(|r| std::ptr::eq(r, child)));
        audited += 1;
    }
    assert!(audited > 0);
    assert!(log.records.iter().any(|r| r.operation.starts_with("IS")));
}

#[test]
fn same_seed_gives_the_same_operation_sequence() {
    let d = data(4);
    let params = sampled_params(&d);
    let wd = fast(9, 600.0, &d.updates);
    let schedule = build_schedule(&d.updates, &params, &wd).unwrap();
    let seq = || {
        let log = run(&schedule, &InProcessConnector::new(d.snapshot.clone()), &wd, 3);
        log.by_entry().into_iter().map(|r| (r.entry, r.step, r.operation.clone(), r.params.clone(), r.result_count)).collect::<Vec<_>>()
    };
    let a = seq();
    assert_eq!(a, seq());
    assert!(a.iter().filter(|r| r.2.starts_with("IS")).count() > 10);
}

#[test]
fn short_reads_come_in_whole_sequences() {
    let d = data(5);
    let params = sampled_params(&d);
    let wd = fast(2, 400.0, &d.updates);
    let schedule = build_schedule(&d.updates, &params, &wd).unwrap();
    let log = run(&schedule, &InProcessConnector::new(d.snapshot.clone()), &wd, 2);
    let mut chains: HashMap<usize, Vec<&LogRecord>> = HashMap::new();
    for r in log.records.iter().filter(|r| r.step > 0) {
        chains.entry(r.entry).or_default().push(r);
    }
    for chain in chains.values_mut() {
        chain.sort_by_key(|r| r.step);
        let ops: Vec<&str> = chain.iter().map(|r| r.operation.as_str()).collect();
        let mut i = 0;
        while i < ops.len() {
            let seq: &[&str] = if ops[i] == "IS1" { &["IS1", "IS2", "IS3"] } else { &["IS4", "IS5", "IS6", "IS7"] };
            assert_eq!(&ops[i..i + seq.len()], seq);
            let ids: Vec<&str> = chain[i..i + seq.len()].iter().map(|r| r.params.as_str()).collect();
            assert!(ids.iter().all(|x| *x == ids[0]));
            i += seq.len();
        }
    }
    assert!(!chains.is_empty());
}
