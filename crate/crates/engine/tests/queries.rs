use snbkit_core::builder::*;
use snbkit_core::{Date, GraphSnapshot, Id, ReadQuery, Value};
use snbkit_engine::{execute, EngineError};

fn rows(g: &GraphSnapshot, q: ReadQuery) -> Vec<Vec<Value>> {
    execute(g, &q).expect("query succeeds").rows
}

fn two_friends() -> (GraphBuilder, Id) {
    let mut b = GraphBuilder::new();
    b.person(1, "Ada", BERLIN).person(2, "Bob", BERLIN).knows(1, 2);
    let f = b.forum(1, at(2));
    b.member(f, 2, at(3));
    (b, f)
}

#[test]
fn ic13_same_person_is_zero() {
    let (b, _) = two_friends();
    let g = b.build();
    assert_eq!(rows(&g, ReadQuery::Ic13 { person1_id: 1, person2_id: 1 }), vec![vec![Value::Int(0)]]);
}

#[test]
fn ic13_disconnected_is_minus_one() {
    let (mut b, _) = two_friends();
    b.person(3, "Cy", PARIS);
    let g = b.build();
    assert_eq!(rows(&g, ReadQuery::Ic13 { person1_id: 1, person2_id: 3 }), vec![vec![Value::Int(-1)]]);
    assert_eq!(rows(&g, ReadQuery::Ic13 { person1_id: 1, person2_id: 2 }), vec![vec![Value::Int(1)]]);
}

#[test]
fn unknown_person_is_an_error() {
    let (b, _) = two_friends();
    let g = b.build();
    let err = execute(&g, &ReadQuery::Is1 { person_id: 99 }).unwrap_err();
    assert!(matches!(err, EngineError::UnknownBindingId { id: 99, .. }));
}

#[test]
fn is7_self_reply_reports_not_knowing() {
    let (mut b, f) = two_friends();
    let post = b.post(1, f, at(10), "hello", &[]);
    b.comment(1, post, at(11), "me again", &[]);
    b.comment(2, post, at(12), "hi", &[]);
    let g = b.build();
    let out = rows(&g, ReadQuery::Is7 { message_id: post });
    assert_eq!(out.len(), 2);
    assert_eq!(out[0][3], Value::Int(2));
    assert_eq!(out[0][6], Value::Bool(true));
    assert_eq!(out[1][3], Value::Int(1));
    assert_eq!(out[1][6], Value::Bool(false));
}

#[test]
fn is2_post_is_its_own_original() {
    let (mut b, f) = two_friends();
    let post = b.post(2, f, at(10), "hello", &[]);
    let g = b.build();
    let out = rows(&g, ReadQuery::Is2 { person_id: 2 });
    assert_eq!(out[0][0], Value::id(post));
    assert_eq!(out[0][3], Value::id(post));
}

#[test]
fn ic14_mixes_post_and_comment_replies() {
    let (mut b, f) = two_friends();
    let post = b.post(1, f, at(10), "root", &[]);
    let c1 = b.comment(2, post, at(11), "reply to post", &[]);
    b.comment(1, c1, at(12), "reply to comment", &[]);
    let g = b.build();
    let out = rows(&g, ReadQuery::Ic14 { person1_id: 1, person2_id: 2 });
    assert_eq!(out, vec![vec![Value::List(vec![Value::Int(1), Value::Int(2)]), Value::Float(1.5)]]);
}

#[test]
fn ic14_same_person_is_a_single_empty_weight_path() {
    let (b, _) = two_friends();
    let g = b.build();
    let out = rows(&g, ReadQuery::Ic14 { person1_id: 2, person2_id: 2 });
    assert_eq!(out, vec![vec![Value::List(vec![Value::Int(2)]), Value::Float(0.0)]]);
}

#[test]
fn ic1_sorts_by_distance_then_last_name() {
    let mut b = GraphBuilder::new();
    b.person(1, "Ada", BERLIN);
    for id in 2..30 {
        b.person(id, "Max", BERLIN);
    }
    for id in 2..30 {
        b.knows(1, id);
    }
    let g = b.build();
    let out = rows(&g, ReadQuery::Ic1 { person_id: 1, first_name: "Max".into() });
    assert_eq!(out.len(), 20);
    let last: Vec<&Value> = out.iter().map(|r| &r[1]).collect();
    let mut sorted = last.clone();
    sorted.sort_by_key(|v| match v {
        Value::Str(s) => s.clone(),
        _ => unreachable!(),
    });
    assert_eq!(last, sorted);
}

#[test]
fn bi22_pair_with_every_interaction_scores_31() {
    let mut b = GraphBuilder::new();
    b.person(1, "Ada", BERLIN).person(2, "Bob", PARIS).knows(1, 2);
    let f = b.forum(1, at(2));
    b.member(f, 2, at(3));
    let p1 = b.post(1, f, at(10), "from ada", &[]);
    let p2 = b.post(2, f, at(11), "from bob", &[]);
    b.comment(1, p2, at(12), "ada replies", &[]);
    b.comment(2, p1, at(13), "bob replies", &[]);
    b.like(1, p2, at(14)).like(2, p1, at(15));
    let g = b.build();
    let out = rows(&g, ReadQuery::Bi22 { country1: "Germany".into(), country2: "France".into() });
    assert_eq!(out, vec![vec![Value::Int(1), Value::Int(2), Value::str("Berlin"), Value::Int(31)]]);
}

#[test]
fn bi21_zombie_without_likes_scores_zero() {
    let mut b = GraphBuilder::new();
    b.person(1, "Ada", BERLIN);
    let g = b.build();
    let out = rows(&g, ReadQuery::Bi21 { country: "Germany".into(), end_date: Date::ymd(2010, 6, 1) });
    assert_eq!(out, vec![vec![Value::Int(1), Value::Int(0), Value::Int(0), Value::Float(0.0)]]);
}

#[test]
fn bi13_keeps_months_without_tags() {
    let (mut b, f) = two_friends();
    b.post(1, f, at(10), "untagged", &[]);
    let g = b.build();
    let out = rows(&g, ReadQuery::Bi13 { country: "Germany".into() });
    assert_eq!(out, vec![vec![Value::Int(2010), Value::Int(1), Value::List(Vec::new())]]);
}

#[test]
fn bi16_rejects_trail_ranges_above_the_cap() {
    let (b, _) = two_friends();
    let g = b.build();
    let q = ReadQuery::Bi16 {
        person_id: 1,
        country: "Germany".into(),
        tag_class: "Thing".into(),
        min_path_distance: 1,
        max_path_distance: 9,
    };
    assert!(matches!(execute(&g, &q), Err(EngineError::RangeTooLarge { .. })));
}

#[test]
fn bi17_counts_each_triangle_once() {
    let mut b = GraphBuilder::new();
    for id in 1..=4 {
        b.person(id, "P", BERLIN);
    }
    b.knows(1, 2).knows(2, 3).knows(1, 3).knows(3, 4).knows(2, 4);
    let g = b.build();
    assert_eq!(rows(&g, ReadQuery::Bi17 { country: "Germany".into() }), vec![vec![Value::Int(2)]]);
}

#[test]
fn bi20_counts_descendant_class_tags() {
    let (mut b, f) = two_friends();
    b.post(1, f, at(10), "music", &[TAG_MOZART]);
    b.post(1, f, at(11), "both", &[TAG_MOZART, TAG_KANT]);
    b.post(1, f, at(12), "river", &[TAG_RHINE]);
    let g = b.build();
    let out = rows(&g, ReadQuery::Bi20 { tag_classes: vec!["Person".into(), "Artist".into(), "Nope".into()] });
    assert_eq!(
        out,
        vec![vec![Value::str("Artist"), Value::Int(2)], vec![Value::str("Person"), Value::Int(2)]]
    );
}
