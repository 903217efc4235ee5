use std::collections::BTreeSet;

use snbkit_core::builder::*;
use snbkit_core::{reply_target, validate_schema, DeleteOp, Id, Message, MessageKind, UpdateOp};
use snbkit_datagen::{generate, GeneratorConfig};
use snbkit_engine::{apply_delete, apply_insert, DeletionReport, EngineError};

#[test]
fn replaying_the_update_stream_rebuilds_the_full_graph() {
    let data = generate(&GeneratorConfig::with_persons(150, 21)).unwrap();
    let mut g = data.snapshot.clone();
    for ev in &data.updates {
        apply_insert(&mut g, &ev.op).unwrap_or_else(|e| panic!("{} failed: {e}", ev.op.name()));
    }
    assert!(validate_schema(&g).is_empty());
    assert!(g == data.full);
}

#[test]
fn delete_stream_keeps_the_graph_valid() {
    let mut cfg = GeneratorConfig::with_persons(150, 22);
    cfg.delete_fraction = 0.05;
    let data = generate(&cfg).unwrap();
    assert!(!data.deletes.is_empty());
    let mut g = data.full.clone();
    for ev in &data.deletes {
        if let Err(EngineError::Model(e)) = apply_delete(&mut g, ev.op) {
            panic!("{:?}: {e}", ev.op);
        }
    }
    assert!(validate_schema(&g).is_empty());
}

#[test]
fn deleting_a_random_person_removes_their_messages() {
    let data = generate(&GeneratorConfig::with_persons(150, 23)).unwrap();
    let mut g = data.snapshot;
    let victim = *g.persons().keys().nth(37).unwrap();
    let report = apply_delete(&mut g, DeleteOp::Person(victim)).unwrap();
    assert_eq!(report.persons, 1);
    assert!(validate_schema(&g).is_empty());
    assert!(g.messages().values().all(|m| m.creator != victim));
    assert!(g.edges().knows.keys().all(|&(a, b)| a != victim && b != victim));
}

fn chain() -> (GraphBuilder, Id, Vec<Id>) {
    let mut b = GraphBuilder::new();
    b.person(1, "Ada", BERLIN).person(2, "Bob", BERLIN).knows(1, 2);
    let f = b.forum(1, at(2));
    b.member(f, 2, at(3));
    let post = b.post(1, f, at(10), "root", &[TAG_KANT]);
    let c1 = b.comment(2, post, at(11), "one", &[]);
    let c2 = b.comment(1, c1, at(12), "two", &[]);
    let c3 = b.comment(2, c2, at(13), "three", &[TAG_RHINE]);
    (b, post, vec![c1, c2, c3])
}

#[test]
fn deleting_a_post_removes_its_whole_reply_chain() {
    let (b, post, comments) = chain();
    let mut g = b.build();
    let report = apply_delete(&mut g, DeleteOp::Post(post)).unwrap();
    assert_eq!((report.posts, report.comments), (1, 3));
    assert!(comments.iter().all(|c| g.message(*c).is_none()));
    assert!(validate_schema(&g).is_empty());
}

#[test]
fn deleting_a_leaf_comment_removes_only_it() {
    let (b, _, comments) = chain();
    let mut g = b.build();
    let before = g.messages().len();
    let report = apply_delete(&mut g, DeleteOp::Comment(comments[2])).unwrap();
    assert_eq!(report, DeletionReport { comments: 1, ..DeletionReport::default() });
    assert_eq!(g.messages().len(), before - 1);
}

#[test]
fn deleting_an_unknown_id_fails() {
    let (b, _, _) = chain();
    let mut g = b.build();
    assert!(apply_delete(&mut g, DeleteOp::Forum(77)).is_err());
}

fn comment_on(target: Id, id: Id) -> Message {
    Message {
        id,
        creation_date: at(100),
        location_ip: "10.0.0.9".into(),
        browser_used: "Safari".into(),
        content: "late reply".into(),
        length: 10,
        creator: 2,
        country: GERMANY,
        tags: BTreeSet::new(),
        kind: MessageKind::Comment { reply_of: target },
    }
}

#[test]
fn reply_to_a_comment_uses_the_comment_column() {
    let (b, _, comments) = chain();
    let mut g = b.build();
    let target = reply_target(-1, comments[0] as i64).unwrap();
    apply_insert(&mut g, &UpdateOp::AddComment(comment_on(target, 500))).unwrap();
    assert_eq!(g.message(500).unwrap().reply_of(), Some(comments[0]));
    assert!(validate_schema(&g).is_empty());
}

#[test]
fn inserting_a_comment_on_a_missing_message_fails() {
    let (b, _, _) = chain();
    let mut g = b.build();
    let err = apply_insert(&mut g, &UpdateOp::AddComment(comment_on(999, 500))).unwrap_err();
    assert!(matches!(err, EngineError::DependencyMissing(_)));
}

#[test]
fn knows_insert_is_symmetric() {
    let (mut b, _, _) = chain();
    b.person(3, "Cy", PARIS);
    let mut g = b.build();
    apply_insert(&mut g, &UpdateOp::AddKnows { person1: 3, person2: 1, date: at(50) }).unwrap();
    assert!(g.knows(1, 3) && g.knows(3, 1));
}
