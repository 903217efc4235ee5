use proptest::prelude::*;
use snbkit_core::builder::*;
use snbkit_core::*;

fn small() -> (GraphSnapshot, Id, Id) {
    let mut b = GraphBuilder::new();
    b.person(1, "Ann", BERLIN).person(2, "Bob", PARIS).knows(1, 2);
    let f = b.forum(1, at(2));
    b.member(f, 2, at(3));
    let post = b.post(2, f, at(4), "hello world", &[TAG_MOZART]);
    let c1 = b.comment(1, post, at(5), "hi", &[]);
    let c2 = b.comment(2, c1, at(6), "yo", &[]);
    b.like(1, post, at(7));
    (b.build(), post, c2)
}

#[test]
fn valid_graph_has_no_violations() {
    let (g, _, _) = small();
    assert_eq!(validate_schema(&g), vec![]);
    assert!(g.indexes_consistent());
}

#[test]
fn empty_graph_is_valid() {
    assert!(validate_schema(&GraphSnapshot::new()).is_empty());
}

#[test]
fn root_post_walks_reply_chain() {
    let (g, post, c2) = small();
    assert_eq!(root_post(&g, c2).unwrap(), (post, 0));
    assert_eq!(root_post(&g, post).unwrap(), (post, 0));
    assert!(root_post(&g, 999).is_err());
}

#[test]
fn detects_content_and_image_together() {
    let (mut g, post, _) = small();
    let mut m = g.remove_message(post).unwrap();
    if let MessageKind::Post { image_file, .. } = &mut m.kind {
        *image_file = "photo1.jpg".into();
    }
    g.insert_message(m).unwrap();
    assert!(validate_schema(&g).contains(&SchemaViolation::ContentXorImage { post }));
}

#[test]
fn detects_length_mismatch() {
    let (mut g, post, _) = small();
    let mut m = g.remove_message(post).unwrap();
    m.length = 3;
    g.insert_message(m).unwrap();
    assert!(validate_schema(&g)
        .iter()
        .any(|v| matches!(v, SchemaViolation::LengthMismatch { message, .. } if *message == post)));
}

#[test]
fn detects_non_member_poster() {
    let (mut g, _, _) = small();
    g.remove_membership(0, 2).unwrap();
    assert!(validate_schema(&g)
        .iter()
        .any(|v| matches!(v, SchemaViolation::NonMemberPoster { person: 2, .. })));
}

#[test]
fn detects_dangling_creator_and_self_knows() {
    let (mut g, _, _) = small();
    g.insert_knows(2, 2, at(9)).unwrap();
    g.remove_knows(1, 2).unwrap();
    g.remove_person(1).unwrap();
    let v = validate_schema(&g);
    assert!(v.contains(&SchemaViolation::SelfKnows { person: 2 }));
    assert!(v.iter().any(|x| matches!(x, SchemaViolation::DanglingReference { .. })));
}

#[test]
fn detects_reply_cycle() {
    let mut b = GraphBuilder::new();
    b.person(1, "Ann", BERLIN);
    let a = b.comment(1, 1, at(1), "a", &[]);
    let c = b.comment(1, a, at(2), "b", &[]);
    assert_eq!(c, 1);
    let v = validate_schema(b.graph());
    assert!(v.contains(&SchemaViolation::BrokenReplyChain { message: a }));
}

#[test]
fn duplicate_ids_rejected() {
    let (mut g, post, _) = small();
    let m = g.message(post).unwrap().clone();
    assert!(matches!(g.insert_message(m), Err(ModelError::DuplicateId { .. })));
    assert!(matches!(g.insert_knows(2, 1, at(1)), Err(ModelError::DuplicateEdge { .. })));
}

#[test]
fn removals_keep_indexes_consistent() {
    let (mut g, post, c2) = small();
    g.remove_like(1, post).unwrap();
    g.remove_message(c2).unwrap();
    g.remove_knows(1, 2).unwrap();
    g.set_forum_moderator(0, 2).unwrap();
    assert!(g.indexes_consistent());
    assert!(g.friends(1).is_empty());
    assert_eq!(g.moderated_by(2).iter().copied().collect::<Vec<_>>(), vec![0]);
}

#[test]
fn forum_kind_from_title() {
    let f = |t: &str| Forum { id: 0, title: t.into(), creation_date: at(0), moderator: 0, tags: Default::default() };
    assert_eq!(f("Wall of Ann Smith").kind(), ForumKind::Wall);
    assert_eq!(f("Album 3 of Ann Smith").kind(), ForumKind::Album);
    assert_eq!(f("Group for Mozart in Berlin").kind(), ForumKind::Group);
}

proptest! {
    #[test]
    fn datetime_text_round_trip(ms in -2_000_000_000_000i64..4_000_000_000_000i64) {
        let t = DateTime::from_millis(ms);
        let s = t.to_string();
        prop_assert_eq!(s.len(), 28);
        prop_assert_eq!(s.parse::<DateTime>().unwrap(), t);
    }

    #[test]
    fn date_text_round_trip(days in -30_000i64..30_000) {
        let d = Date::from_days_since_epoch(days);
        prop_assert_eq!(d.to_string().parse::<Date>().unwrap(), d);
        prop_assert_eq!(d.to_datetime().date(), d);
    }

    #[test]
    fn date_order_matches_datetime_order(a in -30_000i64..30_000, b in -30_000i64..30_000) {
        let (x, y) = (Date::from_days_since_epoch(a), Date::from_days_since_epoch(b));
        prop_assert_eq!(x.cmp(&y), x.to_datetime().cmp(&y.to_datetime()));
    }
}
