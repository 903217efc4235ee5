//! Interactive complex reads.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet};

use snbkit_core::{Date, DateTime, GraphSnapshot, Id, Message, Row, Value};

use crate::algorithms::{shortest_path_length, weighted_shortest_paths};
use crate::common::{city_name, id, int, person, place_name, strings, tag_name, text, within};
use crate::EngineError;

pub fn ic1(g: &GraphSnapshot, start: Id, first_name: &str) -> Result<Vec<Row>, EngineError> {
    person(g, start)?;
    let mut hits: Vec<(u32, &str, Id)> = within(g, start, 3)
        .into_iter()
        .filter_map(|(p, d)| g.person(p).filter(|p| p.first_name == first_name).map(|p| (d, p.last_name.as_str(), p.id)))
        .collect();
    hits.sort();
    Ok(hits
        .into_iter()
        .map(|(d, _, pid)| {
            let p = g.person(pid).expect("found above");
            let mut unis: Vec<(String, i32, String)> = g
                .study_of(pid)
                .iter()
                .filter_map(|(&o, &y)| g.organisation(o).map(|o| (o.name.clone(), y, place_name(g, o.place))))
                .collect();
            unis.sort();
            let mut jobs: Vec<(String, i32, String)> = g
                .work_of(pid)
                .iter()
                .filter_map(|(&o, &y)| g.organisation(o).map(|o| (o.name.clone(), y, place_name(g, o.place))))
                .collect();
            jobs.sort();
            let triples = |v: Vec<(String, i32, String)>| {
                Value::List(v.into_iter().map(|(a, y, c)| Value::List(vec![Value::Str(a), int(y), Value::Str(c)])).collect())
            };
            vec![
                id(pid),
                text(&p.last_name),
                int(d),
                Value::Date(p.birthday),
                Value::DateTime(p.creation_date),
                text(&p.gender),
                text(&p.browser_used),
                text(&p.location_ip),
                strings(&p.emails),
                strings(&p.languages),
                Value::Str(city_name(g, p)),
                triples(unis),
                triples(jobs),
            ]
        })
        .collect())
}

fn recent_messages(g: &GraphSnapshot, start: Id, hops: u32, max_date: Date) -> Result<Vec<Row>, EngineError> {
    person(g, start)?;
    let before = max_date.to_datetime();
    let mut msgs: Vec<&Message> = within(g, start, hops)
        .keys()
        .flat_map(|&p| g.messages_of(p).iter())
        .filter_map(|&m| g.message(m))
        .filter(|m| m.creation_date < before)
        .collect();
    msgs.sort_by_key(|m| (Reverse(m.creation_date), m.id));
    Ok(msgs
        .into_iter()
        .map(|m| {
            let c = g.person(m.creator).expect("creator exists");
            vec![
                id(c.id),
                text(&c.first_name),
                text(&c.last_name),
                id(m.id),
                text(m.content_or_image()),
                Value::DateTime(m.creation_date),
            ]
        })
        .collect())
}

pub fn ic2(g: &GraphSnapshot, start: Id, max_date: Date) -> Result<Vec<Row>, EngineError> {
    recent_messages(g, start, 1, max_date)
}

pub fn ic3(
    g: &GraphSnapshot,
    start: Id,
    country_x: &str,
    country_y: &str,
    from: Date,
    days: i64,
) -> Result<Vec<Row>, EngineError> {
    person(g, start)?;
    let (Some(x), Some(y)) = (g.country_by_name(country_x), g.country_by_name(country_y)) else {
        return Ok(Vec::new());
    };
    let (lo, hi) = (from.to_datetime(), from.add_days(days).to_datetime());
    let mut hits = Vec::new();
    for &p in within(g, start, 2).keys() {
        let home = g.country_of_person(p);
        if home == Some(x) || home == Some(y) {
            continue;
        }
        let (mut xc, mut yc) = (0i64, 0i64);
        for m in g.messages_of(p).iter().filter_map(|&m| g.message(m)) {
            if m.creation_date < lo || m.creation_date >= hi {
                continue;
            }
            if m.country == x {
                xc += 1;
            }
            if m.country == y {
                yc += 1;
            }
        }
        if xc > 0 && yc > 0 {
            hits.push((Reverse(xc), p, yc));
        }
    }
    hits.sort();
    Ok(hits
        .into_iter()
        .map(|(Reverse(xc), p, yc)| {
            let p = g.person(p).expect("reached person");
            vec![id(p.id), text(&p.first_name), text(&p.last_name), int(xc), int(yc), int(xc + yc)]
        })
        .collect())
}

pub fn ic4(g: &GraphSnapshot, start: Id, from: Date, days: i64) -> Result<Vec<Row>, EngineError> {
    person(g, start)?;
    let (lo, hi) = (from.to_datetime(), from.add_days(days).to_datetime());
    let mut counts: BTreeMap<Id, i64> = BTreeMap::new();
    let mut old: BTreeSet<Id> = BTreeSet::new();
    for &f in g.friends(start).keys() {
        for m in g.messages_of(f).iter().filter_map(|&m| g.message(m)).filter(|m| m.is_post()) {
            if m.creation_date < lo {
                old.extend(&m.tags);
            } else if m.creation_date < hi {
                for &t in &m.tags {
                    *counts.entry(t).or_default() += 1;
                }
            }
        }
    }
    let mut rows: Vec<(Reverse<i64>, String)> =
        counts.into_iter().filter(|(t, _)| !old.contains(t)).map(|(t, c)| (Reverse(c), tag_name(g, t))).collect();
    rows.sort();
    Ok(rows.into_iter().map(|(Reverse(c), n)| vec![Value::Str(n), int(c)]).collect())
}

pub fn ic5(g: &GraphSnapshot, start: Id, min_date: Date) -> Result<Vec<Row>, EngineError> {
    person(g, start)?;
    let after = min_date.to_datetime();
    let mut joined: BTreeMap<Id, BTreeSet<Id>> = BTreeMap::new();
    for &p in within(g, start, 2).keys() {
        for &f in g.forums_of_member(p) {
            if g.members_of(f).get(&p).is_some_and(|&d| d > after) {
                joined.entry(f).or_default().insert(p);
            }
        }
    }
    let mut rows: Vec<(Reverse<i64>, Id)> = joined
        .into_iter()
        .map(|(f, members)| {
            let posts = g
                .posts_in(f)
                .iter()
                .filter(|&&m| g.message(m).is_some_and(|m| members.contains(&m.creator)))
                .count();
            (Reverse(posts as i64), f)
        })
        .collect();
    rows.sort();
    Ok(rows
        .into_iter()
        .map(|(Reverse(c), f)| vec![text(&g.forum(f).expect("member of forum").title), int(c)])
        .collect())
}

pub fn ic6(g: &GraphSnapshot, start: Id, tag: &str) -> Result<Vec<Row>, EngineError> {
    person(g, start)?;
    let Some(tag) = g.tag_by_name(tag) else {
        return Ok(Vec::new());
    };
    let mut counts: BTreeMap<Id, i64> = BTreeMap::new();
    for &p in within(g, start, 2).keys() {
        for m in g.messages_of(p).iter().filter_map(|&m| g.message(m)) {
            if m.is_post() && m.tags.contains(&tag) {
                for &t in m.tags.iter().filter(|&&t| t != tag) {
                    *counts.entry(t).or_default() += 1;
                }
            }
        }
    }
    let mut rows: Vec<(Reverse<i64>, String)> = counts.into_iter().map(|(t, c)| (Reverse(c), tag_name(g, t))).collect();
    rows.sort();
    Ok(rows.into_iter().map(|(Reverse(c), n)| vec![Value::Str(n), int(c)]).collect())
}

pub fn ic7(g: &GraphSnapshot, start: Id) -> Result<Vec<Row>, EngineError> {
    person(g, start)?;
    // Liker to (like date, message), keeping the latest like and the
    // smallest message id among simultaneous ones.
    let mut latest: BTreeMap<Id, (DateTime, Id)> = BTreeMap::new();
    for &m in g.messages_of(start) {
        for (&liker, &date) in g.likes_of(m) {
            let e = latest.entry(liker).or_insert((date, m));
            if date > e.0 || (date == e.0 && m < e.1) {
                *e = (date, m);
            }
        }
    }
    let mut rows: Vec<(Reverse<DateTime>, Id, Id)> =
        latest.into_iter().map(|(p, (d, m))| (Reverse(d), p, m)).collect();
    rows.sort();
    Ok(rows
        .into_iter()
        .map(|(Reverse(date), p, m)| {
            let liker = g.person(p).expect("liker exists");
            let msg = g.message(m).expect("liked message exists");
            let latency = (date.millis() - msg.creation_date.millis()).div_euclid(60_000);
            vec![
                id(p),
                text(&liker.first_name),
                text(&liker.last_name),
                Value::DateTime(date),
                id(m),
                text(msg.content_or_image()),
                int(latency),
                Value::Bool(!g.knows(start, p)),
            ]
        })
        .collect())
}

pub fn ic8(g: &GraphSnapshot, start: Id) -> Result<Vec<Row>, EngineError> {
    person(g, start)?;
    let mut replies: Vec<&Message> = g
        .messages_of(start)
        .iter()
        .flat_map(|&m| g.replies_to(m).iter())
        .filter_map(|&c| g.message(c))
        .collect();
    replies.sort_by_key(|c| (Reverse(c.creation_date), c.id));
    Ok(replies
        .into_iter()
        .map(|c| {
            let p = g.person(c.creator).expect("creator exists");
            vec![
                id(p.id),
                text(&p.first_name),
                text(&p.last_name),
                Value::DateTime(c.creation_date),
                id(c.id),
                text(&c.content),
            ]
        })
        .collect())
}

pub fn ic9(g: &GraphSnapshot, start: Id, max_date: Date) -> Result<Vec<Row>, EngineError> {
    recent_messages(g, start, 2, max_date)
}

pub fn ic10(g: &GraphSnapshot, start: Id, month: i64) -> Result<Vec<Row>, EngineError> {
    person(g, start)?;
    if !(1..=12).contains(&month) {
        return Err(EngineError::InvalidBinding(format!("month {month} is not in 1..=12")));
    }
    let month = month as u32;
    let next = month % 12 + 1;
    let interests = g.interests_of(start);
    let mut rows = Vec::new();
    for (p, d) in within(g, start, 2) {
        if d != 2 {
            continue;
        }
        let person = g.person(p).expect("reached person");
        let b = person.birthday;
        if !((b.month() == month && b.day() >= 21) || (b.month() == next && b.day() < 22)) {
            continue;
        }
        let mut score = 0i64;
        for m in g.messages_of(p).iter().filter_map(|&m| g.message(m)).filter(|m| m.is_post()) {
            score += if m.tags.iter().any(|t| interests.contains(t)) { 1 } else { -1 };
        }
        rows.push((Reverse(score), p));
    }
    rows.sort();
    Ok(rows
        .into_iter()
        .map(|(Reverse(score), p)| {
            let p = g.person(p).expect("reached person");
            vec![
                id(p.id),
                text(&p.first_name),
                text(&p.last_name),
                int(score),
                text(&p.gender),
                Value::Str(city_name(g, p)),
            ]
        })
        .collect())
}

pub fn ic11(g: &GraphSnapshot, start: Id, country: &str, year: i64) -> Result<Vec<Row>, EngineError> {
    person(g, start)?;
    let Some(country) = g.country_by_name(country) else {
        return Ok(Vec::new());
    };
    let mut rows = Vec::new();
    for &p in within(g, start, 2).keys() {
        for (&o, &from) in g.work_of(p) {
            let Some(org) = g.organisation(o) else { continue };
            if org.place == country && (from as i64) < year {
                rows.push((from, p, Reverse(org.name.clone())));
            }
        }
    }
    rows.sort();
    Ok(rows
        .into_iter()
        .map(|(from, p, Reverse(org))| {
            let p = g.person(p).expect("reached person");
            vec![id(p.id), text(&p.first_name), text(&p.last_name), Value::Str(org), int(from)]
        })
        .collect())
}

pub fn ic12(g: &GraphSnapshot, start: Id, tag_class: &str) -> Result<Vec<Row>, EngineError> {
    person(g, start)?;
    let Some(class) = g.tag_class_by_name(tag_class) else {
        return Ok(Vec::new());
    };
    let classes = g.tag_class_descendants(class);
    let mut rows = Vec::new();
    for &f in g.friends(start).keys() {
        let mut count = 0i64;
        let mut names = BTreeSet::new();
        for c in g.messages_of(f).iter().filter_map(|&m| g.message(m)) {
            let Some(post) = c.reply_of().and_then(|r| g.message(r)).filter(|m| m.is_post()) else {
                continue;
            };
            let matching: Vec<Id> =
                post.tags.iter().copied().filter(|&t| g.tag(t).is_some_and(|t| classes.contains(&t.tag_class))).collect();
            if !matching.is_empty() {
                count += 1;
                names.extend(matching.into_iter().map(|t| tag_name(g, t)));
            }
        }
        if count > 0 {
            rows.push((Reverse(count), f, names));
        }
    }
    rows.sort();
    Ok(rows
        .into_iter()
        .map(|(Reverse(count), f, names)| {
            let p = g.person(f).expect("friend exists");
            vec![id(p.id), text(&p.first_name), text(&p.last_name), strings(&names), int(count)]
        })
        .collect())
}

pub fn ic13(g: &GraphSnapshot, a: Id, b: Id) -> Result<Vec<Row>, EngineError> {
    person(g, a)?;
    person(g, b)?;
    Ok(vec![vec![int(shortest_path_length(g, a, b))]])
}

/// Interaction weight between two persons: 1.0 per direct reply by one to a
/// post of the other and 0.5 per direct reply to a comment, in both
/// directions, over replies accepted by `keep`.
pub fn pair_weight(g: &GraphSnapshot, a: Id, b: Id, keep: &dyn Fn(&Message) -> bool) -> f64 {
    let one_way = |from: Id, to: Id| {
        g.messages_of(from)
            .iter()
            .filter_map(|&c| g.message(c))
            .filter_map(|c| c.reply_of().and_then(|r| g.message(r)).map(|parent| (c, parent)))
            .filter(|(c, parent)| parent.creator == to && keep(c))
            .map(|(_, parent)| if parent.is_post() { 1.0 } else { 0.5 })
            .sum::<f64>()
    };
    one_way(a, b) + one_way(b, a)
}

pub fn paths_rows(paths: Vec<(Vec<Id>, f64)>) -> Vec<Row> {
    paths
        .into_iter()
        .map(|(p, w)| vec![Value::List(p.into_iter().map(id).collect()), Value::Float(w)])
        .collect()
}

pub fn ic14(g: &GraphSnapshot, a: Id, b: Id) -> Result<Vec<Row>, EngineError> {
    person(g, a)?;
    person(g, b)?;
    let paths = weighted_shortest_paths(g, a, b, |u, v| pair_weight(g, u, v, &|_| true));
    Ok(paths_rows(paths))
}
