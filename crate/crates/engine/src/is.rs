//! Interactive short reads.

use std::cmp::Reverse;

use snbkit_core::{root_post, GraphSnapshot, Id, Message, Row, Value};

use crate::common::{id, message, person, text};
use crate::EngineError;

pub fn is1(g: &GraphSnapshot, p: Id) -> Result<Vec<Row>, EngineError> {
    let p = person(g, p)?;
    Ok(vec![vec![
        text(&p.first_name),
        text(&p.last_name),
        Value::Date(p.birthday),
        text(&p.location_ip),
        text(&p.browser_used),
        id(p.city),
        text(&p.gender),
        Value::DateTime(p.creation_date),
    ]])
}

pub fn is2(g: &GraphSnapshot, p: Id) -> Result<Vec<Row>, EngineError> {
    person(g, p)?;
    let mut msgs: Vec<&Message> = g.messages_of(p).iter().filter_map(|&m| g.message(m)).collect();
    msgs.sort_by_key(|m| Reverse((m.creation_date, m.id)));
    msgs.truncate(10);
    msgs.into_iter()
        .map(|m| {
            let (root, _) = root_post(g, m.id)?;
            let author = g.person(g.message(root).expect("root exists").creator).expect("author exists");
            Ok(vec![
                id(m.id),
                text(m.content_or_image()),
                Value::DateTime(m.creation_date),
                id(root),
                id(author.id),
                text(&author.first_name),
                text(&author.last_name),
            ])
        })
        .collect()
}

pub fn is3(g: &GraphSnapshot, p: Id) -> Result<Vec<Row>, EngineError> {
    person(g, p)?;
    let mut friends: Vec<_> = g.friends(p).iter().map(|(&f, &d)| (Reverse(d), f)).collect();
    friends.sort();
    Ok(friends
        .into_iter()
        .map(|(Reverse(d), f)| {
            let f = g.person(f).expect("friend exists");
            vec![id(f.id), text(&f.first_name), text(&f.last_name), Value::DateTime(d)]
        })
        .collect())
}

pub fn is4(g: &GraphSnapshot, m: Id) -> Result<Vec<Row>, EngineError> {
    let m = message(g, m)?;
    Ok(vec![vec![Value::DateTime(m.creation_date), text(m.content_or_image())]])
}

pub fn is5(g: &GraphSnapshot, m: Id) -> Result<Vec<Row>, EngineError> {
    let m = message(g, m)?;
    let p = g.person(m.creator).expect("creator exists");
    Ok(vec![vec![id(p.id), text(&p.first_name), text(&p.last_name)]])
}

pub fn is6(g: &GraphSnapshot, m: Id) -> Result<Vec<Row>, EngineError> {
    message(g, m)?;
    let (_, forum) = root_post(g, m)?;
    let f = g.forum(forum).expect("forum of post exists");
    let p = g.person(f.moderator).expect("moderator exists");
    Ok(vec![vec![id(f.id), text(&f.title), id(p.id), text(&p.first_name), text(&p.last_name)]])
}

pub fn is7(g: &GraphSnapshot, m: Id) -> Result<Vec<Row>, EngineError> {
    let original = message(g, m)?;
    let mut replies: Vec<&Message> = g.replies_to(m).iter().filter_map(|&c| g.message(c)).collect();
    replies.sort_by_key(|c| (Reverse(c.creation_date), c.creator, c.id));
    Ok(replies
        .into_iter()
        .map(|c| {
            let a = g.person(c.creator).expect("creator exists");
            let knows = a.id != original.creator && g.knows(a.id, original.creator);
            vec![
                id(c.id),
                text(&c.content),
                Value::DateTime(c.creation_date),
                id(a.id),
                text(&a.first_name),
                text(&a.last_name),
                Value::Bool(knows),
            ]
        })
        .collect())
}
