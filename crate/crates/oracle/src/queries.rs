//! Naive evaluation of every read query.
//!
//! Each query scans the snapshot's base collections with nested loops and
//! sorts rows by comparing output cells, so it shares no plan or index with
//! the engine.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use snbkit_core::query::result_limit;
use snbkit_core::{Date, DateTime, GraphSnapshot, Id, Message, Person, QueryResultTable, ReadQuery, Row, Value};

use crate::graph::{
    brute_force_triangles, exhaustive_trail_endpoints, exhaustive_weighted_paths, months_by_day_walk, AdjacencyList,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("unknown id {0} in binding")]
    UnknownId(Id),
    #[error("invalid binding: {0}")]
    InvalidBinding(String),
}

type Out = Result<Vec<Row>, OracleError>;

#[derive(Clone, Copy)]
enum Dir {
    Asc,
    Desc,
}
use Dir::*;

fn cmp_value(a: &Value, b: &Value) -> Ordering {
    match (a, b) {
        (Value::Int(x), Value::Int(y)) => x.cmp(y),
        (Value::Float(x), Value::Float(y)) => x.partial_cmp(y).expect("finite"),
        (Value::Str(x), Value::Str(y)) => x.cmp(y),
        (Value::Bool(x), Value::Bool(y)) => x.cmp(y),
        (Value::Date(x), Value::Date(y)) => x.cmp(y),
        (Value::DateTime(x), Value::DateTime(y)) => x.cmp(y),
        (Value::List(x), Value::List(y)) => {
            for (p, q) in x.iter().zip(y) {
                let o = cmp_value(p, q);
                if o != Ordering::Equal {
                    return o;
                }
            }
            x.len().cmp(&y.len())
        }
        _ => panic!("comparing {a:?} with {b:?}"),
    }
}

/// Sorts by `(column, direction)` keys, then drops the trailing `hidden`
/// sort-only columns.
fn order(mut rows: Vec<Row>, keys: &[(usize, Dir)], hidden: usize) -> Vec<Row> {
    rows.sort_by(|a, b| {
        for &(c, d) in keys {
            let o = cmp_value(&a[c], &b[c]);
            let o = match d {
                Asc => o,
                Desc => o.reverse(),
            };
            if o != Ordering::Equal {
                return o;
            }
        }
        Ordering::Equal
    });
    for r in &mut rows {
        r.truncate(r.len() - hidden);
    }
    rows
}

fn int(v: impl Into<i64>) -> Value {
    Value::Int(v.into())
}

fn id(v: Id) -> Value {
    Value::Int(v as i64)
}

fn s(v: &str) -> Value {
    Value::Str(v.to_string())
}

struct View<'a> {
    g: &'a GraphSnapshot,
    adj: AdjacencyList,
}

impl<'a> View<'a> {
    fn new(g: &'a GraphSnapshot) -> View<'a> {
        let mut adj: AdjacencyList = g.persons().keys().map(|&p| (p, BTreeSet::new())).collect();
        for &(a, b) in g.edges().knows.keys() {
            adj.get_mut(&a).expect("person").insert(b);
            adj.get_mut(&b).expect("person").insert(a);
        }
        View { g, adj }
    }

    fn person(&self, p: Id) -> Result<&'a Person, OracleError> {
        self.g.persons().get(&p).ok_or(OracleError::UnknownId(p))
    }

    fn msg(&self, m: Id) -> Result<&'a Message, OracleError> {
        self.g.messages().get(&m).ok_or(OracleError::UnknownId(m))
    }

    fn knows(&self, a: Id, b: Id) -> bool {
        self.g.edges().knows.contains_key(&(a.min(b), a.max(b)))
    }

    /// Persons whose hop distance from `start` is in `1..=max`, found by
    /// growing the reached set one layer at a time.
    fn layers(&self, start: Id, max: u32) -> BTreeMap<Id, u32> {
        let mut reached = BTreeMap::from([(start, 0u32)]);
        for hop in 1..=max {
            let mut next = Vec::new();
            for &(a, b) in self.g.edges().knows.keys() {
                for (x, y) in [(a, b), (b, a)] {
                    if reached.get(&x) == Some(&(hop - 1)) && !reached.contains_key(&y) {
                        next.push(y);
                    }
                }
            }
            for y in next {
                reached.entry(y).or_insert(hop);
            }
        }
        reached.remove(&start);
        reached
    }

    fn messages(&self) -> impl Iterator<Item = &'a Message> {
        self.g.messages().values()
    }

    fn messages_by(&self, p: Id) -> impl Iterator<Item = &'a Message> {
        self.g.messages().values().filter(move |m| m.creator == p)
    }

    fn likes_on(&self, m: Id) -> impl Iterator<Item = (Id, DateTime)> + 'a {
        self.g.edges().likes.iter().filter(move |((_, x), _)| *x == m).map(|(&(p, _), &d)| (p, d))
    }

    fn like_count(&self, m: Id) -> i64 {
        self.likes_on(m).count() as i64
    }

    fn root(&self, m: &'a Message) -> &'a Message {
        let mut cur = m;
        while let Some(parent) = cur.reply_of() {
            cur = &self.g.messages()[&parent];
        }
        cur
    }

    fn country_named(&self, name: &str) -> Option<Id> {
        self.g
            .places()
            .values()
            .find(|p| p.name == name && p.kind == snbkit_core::PlaceKind::Country)
            .map(|p| p.id)
    }

    fn tag_named(&self, name: &str) -> Option<Id> {
        self.g.tags().values().find(|t| t.name == name).map(|t| t.id)
    }

    fn class_named(&self, name: &str) -> Option<Id> {
        self.g.tag_classes().values().find(|c| c.name == name).map(|c| c.id)
    }

    fn home(&self, p: &Person) -> Option<Id> {
        self.g.places()[&p.city].part_of
    }

    fn residents(&self, country: Id) -> Vec<&'a Person> {
        self.g.persons().values().filter(|p| self.home(p) == Some(country)).collect()
    }

    fn place_name(&self, id: Id) -> String {
        self.g.places()[&id].name.clone()
    }

    fn tag_name(&self, t: Id) -> String {
        self.g.tags()[&t].name.clone()
    }

    /// Whether tag `t` has class `c` or a descendant of it.
    fn under(&self, t: Id, c: Id) -> bool {
        let mut cur = Some(self.g.tags()[&t].tag_class);
        while let Some(x) = cur {
            if x == c {
                return true;
            }
            cur = self.g.tag_classes()[&x].parent;
        }
        false
    }

    fn direct(&self, t: Id, c: Id) -> bool {
        self.g.tags()[&t].tag_class == c
    }
}

fn person_names(p: &Person) -> [Value; 3] {
    [id(p.id), s(&p.first_name), s(&p.last_name)]
}

fn day_range(t: DateTime, start: Date, end: Date) -> bool {
    t.date() >= start && t.date() <= end
}

/// Runs `q` naively.
pub fn run(g: &GraphSnapshot, q: &ReadQuery) -> Result<QueryResultTable, OracleError> {
    let v = View::new(g);
    use ReadQuery::*;
    let mut rows = match q {
        Ic1 { person_id, first_name } => ic1(&v, *person_id, first_name),
        Ic2 { person_id, max_date } => recent(&v, *person_id, 1, *max_date),
        Ic3 { person_id, country_x, country_y, start_date, duration_days } => {
            ic3(&v, *person_id, country_x, country_y, *start_date, *duration_days)
        }
        Ic4 { person_id, start_date, duration_days } => ic4(&v, *person_id, *start_date, *duration_days),
        Ic5 { person_id, min_date } => ic5(&v, *person_id, *min_date),
        Ic6 { person_id, tag_name } => ic6(&v, *person_id, tag_name),
        Ic7 { person_id } => ic7(&v, *person_id),
        Ic8 { person_id } => ic8(&v, *person_id),
        Ic9 { person_id, max_date } => recent(&v, *person_id, 2, *max_date),
        Ic10 { person_id, month } => ic10(&v, *person_id, *month),
        Ic11 { person_id, country_name, work_from_year } => ic11(&v, *person_id, country_name, *work_from_year),
        Ic12 { person_id, tag_class_name } => ic12(&v, *person_id, tag_class_name),
        Ic13 { person1_id, person2_id } => ic13(&v, *person1_id, *person2_id),
        Ic14 { person1_id, person2_id } => paths(&v, *person1_id, *person2_id, None),
        Is1 { person_id } => is1(&v, *person_id),
        Is2 { person_id } => is2(&v, *person_id),
        Is3 { person_id } => is3(&v, *person_id),
        Is4 { message_id } => v.msg(*message_id).map(|m| vec![vec![Value::DateTime(m.creation_date), s(m.content_or_image())]]),
        Is5 { message_id } => v.msg(*message_id).and_then(|m| Ok(vec![person_names(v.person(m.creator)?).to_vec()])),
        Is6 { message_id } => is6(&v, *message_id),
        Is7 { message_id } => is7(&v, *message_id),
        Bi1 { date } => bi1(&v, *date),
        Bi2 { start_date, end_date, country1, country2 } => bi2(&v, *start_date, *end_date, country1, country2),
        Bi3 { year, month } => bi3(&v, *year, *month),
        Bi4 { tag_class, country } => bi4(&v, tag_class, country),
        Bi5 { country } => bi5(&v, country),
        Bi6 { tag } => bi6(&v, tag),
        Bi7 { tag } => bi7(&v, tag),
        Bi8 { tag } => bi8(&v, tag),
        Bi9 { tag_class1, tag_class2, threshold } => bi9(&v, tag_class1, tag_class2, *threshold),
        Bi10 { tag, date } => bi10(&v, tag, *date),
        Bi11 { country, blacklist } => bi11(&v, country, blacklist),
        Bi12 { date, like_threshold } => bi12(&v, *date, *like_threshold),
        Bi13 { country } => bi13(&v, country),
        Bi14 { start_date, end_date } => bi14(&v, *start_date, *end_date),
        Bi15 { country } => bi15(&v, country),
        Bi16 { person_id, country, tag_class, min_path_distance, max_path_distance } => {
            bi16(&v, *person_id, country, tag_class, *min_path_distance, *max_path_distance)
        }
        Bi17 { country } => bi17(&v, country),
        Bi18 { date, length_threshold, languages } => bi18(&v, *date, *length_threshold, languages),
        Bi19 { date, tag_class1, tag_class2 } => bi19(&v, *date, tag_class1, tag_class2),
        Bi20 { tag_classes } => bi20(&v, tag_classes),
        Bi21 { country, end_date } => bi21(&v, country, *end_date),
        Bi22 { country1, country2 } => bi22(&v, country1, country2),
        Bi23 { country } => bi23(&v, country),
        Bi24 { tag_class } => bi24(&v, tag_class),
        Bi25 { person1_id, person2_id, start_date, end_date } => {
            paths(&v, *person1_id, *person2_id, Some((*start_date, *end_date)))
        }
    }?;
    let t = q.template();
    if let Some(n) = result_limit(t) {
        rows.truncate(n);
    }
    Ok(QueryResultTable::new(t, rows))
}

fn ic1(v: &View, start: Id, name: &str) -> Out {
    v.person(start)?;
    let mut rows = Vec::new();
    for (p, d) in v.layers(start, 3) {
        let p = v.person(p)?;
        if p.first_name != name {
            continue;
        }
        let orgs = |edges: &BTreeMap<(Id, Id), i32>| {
            let mut items: Vec<Value> = edges
                .iter()
                .filter(|((q, _), _)| *q == p.id)
                .map(|((_, o), &y)| {
                    let o = &v.g.organisations()[o];
                    Value::List(vec![s(&o.name), int(y), Value::Str(v.place_name(o.place))])
                })
                .collect();
            items.sort_by(cmp_value);
            Value::List(items)
        };
        rows.push(vec![
            id(p.id),
            s(&p.last_name),
            int(d),
            Value::Date(p.birthday),
            Value::DateTime(p.creation_date),
            s(&p.gender),
            s(&p.browser_used),
            s(&p.location_ip),
            Value::List(p.emails.iter().map(|e| s(e)).collect()),
            Value::List(p.languages.iter().map(|e| s(e)).collect()),
            Value::Str(v.place_name(p.city)),
            orgs(&v.g.edges().study_at),
            orgs(&v.g.edges().work_at),
        ]);
    }
    Ok(order(rows, &[(2, Asc), (1, Asc), (0, Asc)], 0))
}

fn recent(v: &View, start: Id, hops: u32, max_date: Date) -> Out {
    v.person(start)?;
    let near = v.layers(start, hops);
    let mut rows = Vec::new();
    for m in v.messages() {
        if near.contains_key(&m.creator) && m.creation_date.date() < max_date {
            let [a, b, c] = person_names(v.person(m.creator)?);
            rows.push(vec![a, b, c, id(m.id), s(m.content_or_image()), Value::DateTime(m.creation_date)]);
        }
    }
    Ok(order(rows, &[(5, Desc), (3, Asc)], 0))
}

fn ic3(v: &View, start: Id, x: &str, y: &str, from: Date, days: i64) -> Out {
    v.person(start)?;
    let (Some(x), Some(y)) = (v.country_named(x), v.country_named(y)) else { return Ok(Vec::new()) };
    let to = from.add_days(days);
    let mut rows = Vec::new();
    for p in v.layers(start, 2).into_keys() {
        let p = v.person(p)?;
        let home = v.home(p);
        if home == Some(x) || home == Some(y) {
            continue;
        }
        let window: Vec<&Message> =
            v.messages_by(p.id).filter(|m| m.creation_date.date() >= from && m.creation_date.date() < to).collect();
        let xc = window.iter().filter(|m| m.country == x).count() as i64;
        let yc = window.iter().filter(|m| m.country == y).count() as i64;
        if xc > 0 && yc > 0 {
            let [a, b, c] = person_names(p);
            rows.push(vec![a, b, c, int(xc), int(yc), int(xc + yc)]);
        }
    }
    Ok(order(rows, &[(3, Desc), (0, Asc)], 0))
}

fn ic4(v: &View, start: Id, from: Date, days: i64) -> Out {
    v.person(start)?;
    let to = from.add_days(days);
    let friends = v.layers(start, 1);
    let posts: Vec<&Message> = v.messages().filter(|m| m.is_post() && friends.contains_key(&m.creator)).collect();
    let mut rows = Vec::new();
    for t in v.g.tags().values() {
        let in_window = posts
            .iter()
            .filter(|m| m.tags.contains(&t.id) && m.creation_date.date() >= from && m.creation_date.date() < to)
            .count() as i64;
        let earlier = posts.iter().any(|m| m.tags.contains(&t.id) && m.creation_date.date() < from);
        if in_window > 0 && !earlier {
            rows.push(vec![s(&t.name), int(in_window)]);
        }
    }
    Ok(order(rows, &[(1, Desc), (0, Asc)], 0))
}

fn ic5(v: &View, start: Id, min_date: Date) -> Out {
    v.person(start)?;
    let near = v.layers(start, 2);
    let mut rows = Vec::new();
    for f in v.g.forums().values() {
        let joined: BTreeSet<Id> = v
            .g
            .edges()
            .members
            .iter()
            .filter(|((forum, p), &d)| *forum == f.id && near.contains_key(p) && d > min_date.to_datetime())
            .map(|((_, p), _)| *p)
            .collect();
        if joined.is_empty() {
            continue;
        }
        let posts = v.messages().filter(|m| m.forum() == Some(f.id) && joined.contains(&m.creator)).count() as i64;
        rows.push(vec![s(&f.title), int(posts), id(f.id)]);
    }
    Ok(order(rows, &[(1, Desc), (2, Asc)], 1))
}

fn ic6(v: &View, start: Id, tag: &str) -> Out {
    v.person(start)?;
    let Some(tag) = v.tag_named(tag) else { return Ok(Vec::new()) };
    let near = v.layers(start, 2);
    let posts: Vec<&Message> =
        v.messages().filter(|m| m.is_post() && near.contains_key(&m.creator) && m.tags.contains(&tag)).collect();
    let mut rows = Vec::new();
    for t in v.g.tags().values().filter(|t| t.id != tag) {
        let n = posts.iter().filter(|m| m.tags.contains(&t.id)).count() as i64;
        if n > 0 {
            rows.push(vec![s(&t.name), int(n)]);
        }
    }
    Ok(order(rows, &[(1, Desc), (0, Asc)], 0))
}

fn ic7(v: &View, start: Id) -> Out {
    v.person(start)?;
    let mine: BTreeSet<Id> = v.messages_by(start).map(|m| m.id).collect();
    let likes: Vec<(Id, Id, DateTime)> =
        v.g.edges().likes.iter().filter(|((_, m), _)| mine.contains(m)).map(|(&(p, m), &d)| (p, m, d)).collect();
    let likers: BTreeSet<Id> = likes.iter().map(|l| l.0).collect();
    let mut rows = Vec::new();
    for liker in likers {
        let latest = likes.iter().filter(|l| l.0 == liker).map(|l| l.2).max().expect("liker liked something");
        let msg = likes.iter().filter(|l| l.0 == liker && l.2 == latest).map(|l| l.1).min().expect("like at latest");
        let m = v.msg(msg)?;
        let p = v.person(liker)?;
        let minutes = (latest.millis() - m.creation_date.millis()) / 60_000;
        let [a, b, c] = person_names(p);
        rows.push(vec![
            a,
            b,
            c,
            Value::DateTime(latest),
            id(msg),
            s(m.content_or_image()),
            int(minutes),
            Value::Bool(!v.knows(start, liker)),
        ]);
    }
    Ok(order(rows, &[(3, Desc), (0, Asc)], 0))
}

fn ic8(v: &View, start: Id) -> Out {
    v.person(start)?;
    let mut rows = Vec::new();
    for c in v.messages() {
        let Some(parent) = c.reply_of() else { continue };
        if v.msg(parent)?.creator == start {
            let [a, b, cc] = person_names(v.person(c.creator)?);
            rows.push(vec![a, b, cc, Value::DateTime(c.creation_date), id(c.id), s(&c.content)]);
        }
    }
    Ok(order(rows, &[(3, Desc), (4, Asc)], 0))
}

fn ic10(v: &View, start: Id, month: i64) -> Out {
    v.person(start)?;
    if !(1..=12).contains(&month) {
        return Err(OracleError::InvalidBinding(format!("month {month}")));
    }
    let next = if month == 12 { 1 } else { month + 1 };
    let interests: BTreeSet<Id> =
        v.g.edges().interests.iter().filter(|(p, _)| *p == start).map(|(_, t)| *t).collect();
    let mut rows = Vec::new();
    for (p, d) in v.layers(start, 2) {
        let p = v.person(p)?;
        let (bm, bd) = (p.birthday.month() as i64, p.birthday.day());
        if d != 2 || !((bm == month && bd >= 21) || (bm == next && bd < 22)) {
            continue;
        }
        let posts: Vec<&Message> = v.messages_by(p.id).filter(|m| m.is_post()).collect();
        let common = posts.iter().filter(|m| m.tags.iter().any(|t| interests.contains(t))).count() as i64;
        let uncommon = posts.len() as i64 - common;
        let [a, b, c] = person_names(p);
        rows.push(vec![a, b, c, int(common - uncommon), s(&p.gender), Value::Str(v.place_name(p.city))]);
    }
    Ok(order(rows, &[(3, Desc), (0, Asc)], 0))
}

fn ic11(v: &View, start: Id, country: &str, year: i64) -> Out {
    v.person(start)?;
    let Some(country) = v.country_named(country) else { return Ok(Vec::new()) };
    let near = v.layers(start, 2);
    let mut rows = Vec::new();
    for (&(p, o), &from) in &v.g.edges().work_at {
        let org = &v.g.organisations()[&o];
        if near.contains_key(&p) && org.place == country && (from as i64) < year {
            let [a, b, c] = person_names(v.person(p)?);
            rows.push(vec![a, b, c, s(&org.name), int(from)]);
        }
    }
    Ok(order(rows, &[(4, Asc), (0, Asc), (3, Desc)], 0))
}

fn ic12(v: &View, start: Id, class: &str) -> Out {
    v.person(start)?;
    let Some(class) = v.class_named(class) else { return Ok(Vec::new()) };
    let friends = v.layers(start, 1);
    let mut rows = Vec::new();
    for f in friends.keys() {
        let mut count = 0i64;
        let mut names = BTreeSet::new();
        for c in v.messages_by(*f) {
            let Some(parent) = c.reply_of() else { continue };
            let post = v.msg(parent)?;
            if !post.is_post() {
                continue;
            }
            let hits: Vec<Id> = post.tags.iter().copied().filter(|&t| v.under(t, class)).collect();
            if !hits.is_empty() {
                count += 1;
                for t in hits {
                    names.insert(v.tag_name(t));
                }
            }
        }
        if count > 0 {
            let [a, b, c] = person_names(v.person(*f)?);
            rows.push(vec![a, b, c, Value::List(names.into_iter().map(Value::Str).collect()), int(count)]);
        }
    }
    Ok(order(rows, &[(4, Desc), (0, Asc)], 0))
}

fn ic13(v: &View, a: Id, b: Id) -> Out {
    v.person(a)?;
    v.person(b)?;
    if a == b {
        return Ok(vec![vec![int(0)]]);
    }
    let all = v.layers(a, v.adj.len() as u32);
    Ok(vec![vec![int(all.get(&b).map_or(-1, |&d| d as i64))]])
}

fn paths(v: &View, a: Id, b: Id, forum_window: Option<(Date, Date)>) -> Out {
    v.person(a)?;
    v.person(b)?;
    let counted = |c: &Message| match forum_window {
        None => true,
        Some((start, end)) => {
            let f = &v.g.forums()[&v.root(c).forum().expect("root is a post")];
            day_range(f.creation_date, start, end)
        }
    };
    let weight = |x: Id, y: Id| {
        let mut w = 0.0;
        for c in v.messages() {
            let Some(parent) = c.reply_of() else { continue };
            let parent = &v.g.messages()[&parent];
            let pair = (c.creator == x && parent.creator == y) || (c.creator == y && parent.creator == x);
            if pair && counted(c) {
                w += if parent.is_post() { 1.0 } else { 0.5 };
            }
        }
        w
    };
    let found = exhaustive_weighted_paths(&v.adj, a, b, weight);
    let rows = found
        .into_iter()
        .map(|(p, w)| vec![Value::List(p.into_iter().map(id).collect()), Value::Float(w)])
        .collect();
    Ok(order(rows, &[(1, Desc), (0, Asc)], 0))
}

fn is1(v: &View, p: Id) -> Out {
    let p = v.person(p)?;
    Ok(vec![vec![
        s(&p.first_name),
        s(&p.last_name),
        Value::Date(p.birthday),
        s(&p.location_ip),
        s(&p.browser_used),
        id(p.city),
        s(&p.gender),
        Value::DateTime(p.creation_date),
    ]])
}

fn is2(v: &View, p: Id) -> Out {
    v.person(p)?;
    let mut rows = Vec::new();
    for m in v.messages_by(p) {
        let root = v.root(m);
        let [a, b, c] = person_names(v.person(root.creator)?);
        rows.push(vec![id(m.id), s(m.content_or_image()), Value::DateTime(m.creation_date), id(root.id), a, b, c]);
    }
    let mut rows = order(rows, &[(2, Desc), (0, Desc)], 0);
    rows.truncate(10);
    Ok(rows)
}

fn is3(v: &View, p: Id) -> Out {
    v.person(p)?;
    let mut rows = Vec::new();
    for (&(a, b), &d) in &v.g.edges().knows {
        let other = if a == p {
            b
        } else if b == p {
            a
        } else {
            continue;
        };
        let [x, y, z] = person_names(v.person(other)?);
        rows.push(vec![x, y, z, Value::DateTime(d)]);
    }
    Ok(order(rows, &[(3, Desc), (0, Asc)], 0))
}

fn is6(v: &View, m: Id) -> Out {
    let root = v.root(v.msg(m)?);
    let f = &v.g.forums()[&root.forum().expect("root is a post")];
    let [a, b, c] = person_names(v.person(f.moderator)?);
    Ok(vec![vec![id(f.id), s(&f.title), a, b, c]])
}

fn is7(v: &View, m: Id) -> Out {
    let original = v.msg(m)?;
    let mut rows = Vec::new();
    for c in v.messages().filter(|c| c.reply_of() == Some(m)) {
        let [a, b, cc] = person_names(v.person(c.creator)?);
        let knows = c.creator != original.creator && v.knows(c.creator, original.creator);
        rows.push(vec![id(c.id), s(&c.content), Value::DateTime(c.creation_date), a, b, cc, Value::Bool(knows)]);
    }
    Ok(order(rows, &[(2, Desc), (3, Asc), (0, Asc)], 0))
}

fn bi1(v: &View, date: Date) -> Out {
    let before: Vec<&Message> = v.messages().filter(|m| m.creation_date.date() < date).collect();
    let total = before.len() as f64;
    let years: BTreeSet<i32> = before.iter().map(|m| m.creation_date.year()).collect();
    let mut rows = Vec::new();
    for year in years {
        for is_comment in [false, true] {
            for (cat, lo, hi) in [(0, 0, 40), (1, 40, 80), (2, 80, 160), (3, 160, u32::MAX)] {
                let group: Vec<&&Message> = before
                    .iter()
                    .filter(|m| m.creation_date.year() == year && m.is_comment() == is_comment)
                    .filter(|m| m.length >= lo && m.length < hi)
                    .collect();
                if group.is_empty() {
                    continue;
                }
                let n = group.len() as i64;
                let sum: i64 = group.iter().map(|m| m.length as i64).sum();
                rows.push(vec![
                    int(year),
                    Value::Bool(is_comment),
                    int(cat),
                    int(n),
                    int(sum / n),
                    int(sum),
                    Value::Float(n as f64 * 100.0 / total),
                ]);
            }
        }
    }
    Ok(order(rows, &[(0, Desc), (1, Asc), (2, Asc)], 0))
}

fn bi2(v: &View, start: Date, end: Date, c1: &str, c2: &str) -> Out {
    let countries: Vec<Id> = [c1, c2].into_iter().filter_map(|c| v.country_named(c)).collect();
    let mut groups: BTreeMap<(String, i64, String, i64, String), i64> = BTreeMap::new();
    for m in v.messages() {
        let p = v.person(m.creator)?;
        let Some(home) = v.home(p).filter(|h| countries.contains(h)) else { continue };
        if !day_range(m.creation_date, start, end) {
            continue;
        }
        // Whole years lived by 2013-01-01.
        let mut years = 0;
        while p.birthday.year() + years < 2013
            && Date::from_ymd(p.birthday.year() + years + 1, p.birthday.month(), p.birthday.day())
                .unwrap_or(Date::ymd(p.birthday.year() + years + 1, 3, 1))
                <= Date::ymd(2013, 1, 1)
        {
            years += 1;
        }
        for &t in &m.tags {
            let key = (v.place_name(home), m.creation_date.month() as i64, p.gender.clone(), (years / 5) as i64, v.tag_name(t));
            *groups.entry(key).or_default() += 1;
        }
    }
    let rows = groups
        .into_iter()
        .filter(|(_, n)| *n > 100)
        .map(|((c, month, gender, age, tag), n)| vec![Value::Str(c), int(month), Value::Str(gender), int(age), Value::Str(tag), int(n)])
        .collect();
    Ok(order(rows, &[(5, Desc), (4, Asc), (3, Asc), (2, Asc), (1, Asc), (0, Asc)], 0))
}

fn bi3(v: &View, year: i64, month: i64) -> Out {
    if !(1..=12).contains(&month) {
        return Err(OracleError::InvalidBinding(format!("month {month}")));
    }
    let first = Date::ymd(year as i32, month as u32, 1);
    let second = first.add_days(31);
    let second = Date::ymd(second.year(), second.month(), 1);
    let in_month = |m: &Message, d: Date| m.creation_date.year() == d.year() && m.creation_date.month() == d.month();
    let mut rows = Vec::new();
    for t in v.g.tags().values() {
        let a = v.messages().filter(|m| m.tags.contains(&t.id) && in_month(m, first)).count() as i64;
        let b = v.messages().filter(|m| m.tags.contains(&t.id) && in_month(m, second)).count() as i64;
        if a + b > 0 {
            rows.push(vec![s(&t.name), int(a), int(b), int((a - b).abs())]);
        }
    }
    Ok(order(rows, &[(3, Desc), (0, Asc)], 0))
}

fn bi4(v: &View, class: &str, country: &str) -> Out {
    let (Some(class), Some(country)) = (v.class_named(class), v.country_named(country)) else { return Ok(Vec::new()) };
    let mut rows = Vec::new();
    for f in v.g.forums().values() {
        if v.home(v.person(f.moderator)?) != Some(country) {
            continue;
        }
        let n = v
            .messages()
            .filter(|m| m.forum() == Some(f.id) && m.tags.iter().any(|&t| v.direct(t, class)))
            .count() as i64;
        if n > 0 {
            rows.push(vec![id(f.id), s(&f.title), Value::DateTime(f.creation_date), id(f.moderator), int(n)]);
        }
    }
    Ok(order(rows, &[(4, Desc), (0, Asc)], 0))
}

fn bi5(v: &View, country: &str) -> Out {
    let Some(country) = v.country_named(country) else { return Ok(Vec::new()) };
    let members = &v.g.edges().members;
    let mut popular = Vec::new();
    for f in v.g.forums().values() {
        let n = members
            .keys()
            .filter(|(forum, p)| *forum == f.id && v.home(&v.g.persons()[p]) == Some(country))
            .count() as i64;
        if n > 0 {
            popular.push(vec![id(f.id), int(n)]);
        }
    }
    let mut popular = order(popular, &[(1, Desc), (0, Asc)], 0);
    popular.truncate(100);
    let top: BTreeSet<Id> = popular.iter().map(|r| r[0].as_int().unwrap() as Id).collect();
    let mut rows = Vec::new();
    for p in v.g.persons().values() {
        if !members.keys().any(|(f, q)| *q == p.id && top.contains(f)) {
            continue;
        }
        let n = v.messages_by(p.id).filter(|m| m.forum().is_some_and(|f| top.contains(&f))).count() as i64;
        let [a, b, c] = person_names(p);
        rows.push(vec![a, b, c, Value::DateTime(p.creation_date), int(n)]);
    }
    Ok(order(rows, &[(4, Desc), (0, Asc)], 0))
}

fn bi6(v: &View, tag: &str) -> Out {
    let Some(tag) = v.tag_named(tag) else { return Ok(Vec::new()) };
    let mut rows = Vec::new();
    for p in v.g.persons().values() {
        let tagged: Vec<&Message> = v.messages_by(p.id).filter(|m| m.tags.contains(&tag)).collect();
        if tagged.is_empty() {
            continue;
        }
        let likes: i64 = tagged.iter().map(|m| v.like_count(m.id)).sum();
        let replies = v.messages().filter(|c| c.reply_of().is_some_and(|r| tagged.iter().any(|m| m.id == r))).count() as i64;
        let n = tagged.len() as i64;
        rows.push(vec![id(p.id), int(replies), int(likes), int(n), int(n + 2 * replies + 10 * likes)]);
    }
    Ok(order(rows, &[(4, Desc), (0, Asc)], 0))
}

fn bi7(v: &View, tag: &str) -> Out {
    let Some(tag) = v.tag_named(tag) else { return Ok(Vec::new()) };
    let mut rows = Vec::new();
    for p in v.g.persons().values() {
        let tagged: BTreeSet<Id> = v.messages_by(p.id).filter(|m| m.tags.contains(&tag)).map(|m| m.id).collect();
        if tagged.is_empty() {
            continue;
        }
        let likers: BTreeSet<Id> = v.g.edges().likes.keys().filter(|(_, m)| tagged.contains(m)).map(|(q, _)| *q).collect();
        let mut score = 0i64;
        for q in likers {
            score += v.messages_by(q).map(|m| v.like_count(m.id)).sum::<i64>();
        }
        rows.push(vec![id(p.id), int(score)]);
    }
    Ok(order(rows, &[(1, Desc), (0, Asc)], 0))
}

fn bi8(v: &View, tag: &str) -> Out {
    let Some(tag) = v.tag_named(tag) else { return Ok(Vec::new()) };
    let replies: Vec<&Message> = v
        .messages()
        .filter(|c| !c.tags.contains(&tag) && c.reply_of().is_some_and(|r| v.g.messages()[&r].tags.contains(&tag)))
        .collect();
    let mut rows = Vec::new();
    for t in v.g.tags().values() {
        let n = replies.iter().filter(|c| c.tags.contains(&t.id)).count() as i64;
        if n > 0 {
            rows.push(vec![s(&t.name), int(n)]);
        }
    }
    Ok(order(rows, &[(1, Desc), (0, Asc)], 0))
}

fn bi9(v: &View, c1: &str, c2: &str, threshold: i64) -> Out {
    let (Some(c1), Some(c2)) = (v.class_named(c1), v.class_named(c2)) else { return Ok(Vec::new()) };
    let mut rows = Vec::new();
    for f in v.g.forums().values() {
        let members = v.g.edges().members.keys().filter(|(x, _)| *x == f.id).count() as i64;
        if members <= threshold {
            continue;
        }
        let posts: Vec<&Message> = v.messages().filter(|m| m.forum() == Some(f.id)).collect();
        let n1 = posts.iter().filter(|m| m.tags.iter().any(|&t| v.direct(t, c1))).count() as i64;
        let n2 = posts.iter().filter(|m| m.tags.iter().any(|&t| v.direct(t, c2))).count() as i64;
        if n1 > 0 && n2 > 0 {
            rows.push(vec![id(f.id), int(n1), int(n2), int((n2 - n1).abs())]);
        }
    }
    Ok(order(rows, &[(3, Desc), (0, Asc)], 1))
}

fn bi10(v: &View, tag: &str, date: Date) -> Out {
    let Some(tag) = v.tag_named(tag) else { return Ok(Vec::new()) };
    let score = |p: Id| -> i64 {
        let interest = if v.g.edges().interests.contains(&(p, tag)) { 100 } else { 0 };
        let msgs = v.messages_by(p).filter(|m| m.tags.contains(&tag) && m.creation_date > date.to_datetime()).count();
        interest + msgs as i64
    };
    let mut rows = Vec::new();
    for p in v.g.persons().keys() {
        let own = score(*p);
        if own == 0 {
            continue;
        }
        let friends: i64 = v.adj[p].iter().map(|&f| score(f)).sum();
        rows.push(vec![id(*p), int(own), int(friends), int(own + friends)]);
    }
    Ok(order(rows, &[(3, Desc), (0, Asc)], 1))
}

fn bi11(v: &View, country: &str, blacklist: &[String]) -> Out {
    let Some(country) = v.country_named(country) else { return Ok(Vec::new()) };
    let mut valid = Vec::new();
    for c in v.messages() {
        let Some(parent) = c.reply_of() else { continue };
        let parent = v.msg(parent)?;
        if v.home(v.person(c.creator)?) != Some(country) {
            continue;
        }
        let shared = c.tags.intersection(&parent.tags).next().is_some();
        let banned = blacklist.iter().any(|w| !w.is_empty() && c.content.contains(w.as_str()));
        if !shared && !banned {
            valid.push(c);
        }
    }
    let mut rows = Vec::new();
    let pairs: BTreeSet<(Id, Id)> = valid.iter().flat_map(|c| c.tags.iter().map(|&t| (c.creator, t))).collect();
    for (p, t) in pairs {
        let hits: Vec<&&Message> = valid.iter().filter(|c| c.creator == p && c.tags.contains(&t)).collect();
        let likes: i64 = hits.iter().map(|c| v.like_count(c.id)).sum();
        rows.push(vec![id(p), Value::Str(v.tag_name(t)), int(likes), int(hits.len() as i64)]);
    }
    Ok(order(rows, &[(2, Desc), (0, Asc), (1, Asc)], 0))
}

fn bi12(v: &View, date: Date, threshold: i64) -> Out {
    let mut rows = Vec::new();
    for m in v.messages().filter(|m| m.creation_date > date.to_datetime()) {
        let likes = v.like_count(m.id);
        if likes > threshold {
            let p = v.person(m.creator)?;
            rows.push(vec![id(m.id), Value::DateTime(m.creation_date), s(&p.first_name), s(&p.last_name), int(likes)]);
        }
    }
    Ok(order(rows, &[(4, Desc), (0, Asc)], 0))
}

fn bi13(v: &View, country: &str) -> Out {
    let Some(country) = v.country_named(country) else { return Ok(Vec::new()) };
    let local: Vec<&Message> = v.messages().filter(|m| m.country == country).collect();
    let months: BTreeSet<(i32, u32)> = local.iter().map(|m| (m.creation_date.year(), m.creation_date.month())).collect();
    let mut rows = Vec::new();
    for (year, month) in months {
        let group: Vec<&&Message> =
            local.iter().filter(|m| m.creation_date.year() == year && m.creation_date.month() == month).collect();
        let mut tags = Vec::new();
        for t in v.g.tags().values() {
            let n = group.iter().filter(|m| m.tags.contains(&t.id)).count() as i64;
            if n > 0 {
                tags.push(vec![s(&t.name), int(n)]);
            }
        }
        let mut tags = order(tags, &[(1, Desc), (0, Asc)], 0);
        tags.truncate(5);
        rows.push(vec![int(year), int(month), Value::List(tags.into_iter().map(Value::List).collect())]);
    }
    Ok(order(rows, &[(0, Desc), (1, Asc)], 0))
}

fn bi14(v: &View, start: Date, end: Date) -> Out {
    let mut rows = Vec::new();
    for p in v.g.persons().values() {
        let threads: BTreeSet<Id> = v
            .messages_by(p.id)
            .filter(|m| m.is_post() && day_range(m.creation_date, start, end))
            .map(|m| m.id)
            .collect();
        if threads.is_empty() {
            continue;
        }
        let n = v
            .messages()
            .filter(|m| day_range(m.creation_date, start, end) && threads.contains(&v.root(m).id))
            .count() as i64;
        let [a, b, c] = person_names(p);
        rows.push(vec![a, b, c, int(threads.len() as i64), int(n)]);
    }
    Ok(order(rows, &[(4, Desc), (0, Asc)], 0))
}

fn bi15(v: &View, country: &str) -> Out {
    let Some(country) = v.country_named(country) else { return Ok(Vec::new()) };
    let people: BTreeSet<Id> = v.residents(country).iter().map(|p| p.id).collect();
    if people.is_empty() {
        return Ok(Vec::new());
    }
    let counts: Vec<(Id, i64)> =
        people.iter().map(|&p| (p, people.iter().filter(|&&q| v.knows(p, q)).count() as i64)).collect();
    let normal = counts.iter().map(|c| c.1).sum::<i64>() / counts.len() as i64;
    let rows = counts.into_iter().filter(|c| c.1 == normal).map(|(p, c)| vec![id(p), int(c)]).collect();
    Ok(order(rows, &[(0, Asc)], 0))
}

fn bi16(v: &View, start: Id, country: &str, class: &str, min: i64, max: i64) -> Out {
    v.person(start)?;
    if min < 1 || min > max || max > 4 {
        return Err(OracleError::InvalidBinding(format!("trail range {min}..={max}")));
    }
    let (Some(country), Some(class)) = (v.country_named(country), v.class_named(class)) else { return Ok(Vec::new()) };
    let reach = exhaustive_trail_endpoints(&v.adj, start, min as u32, max as u32);
    let mut rows = Vec::new();
    for p in reach {
        if v.home(v.person(p)?) != Some(country) {
            continue;
        }
        let msgs: Vec<&Message> = v.messages_by(p).filter(|m| m.tags.iter().any(|&t| v.direct(t, class))).collect();
        for t in v.g.tags().values() {
            let n = msgs.iter().filter(|m| m.tags.contains(&t.id)).count() as i64;
            if n > 0 {
                rows.push(vec![id(p), s(&t.name), int(n)]);
            }
        }
    }
    Ok(order(rows, &[(2, Desc), (1, Asc), (0, Asc)], 0))
}

fn bi17(v: &View, country: &str) -> Out {
    let nodes: BTreeSet<Id> = match v.country_named(country) {
        Some(c) => v.residents(c).iter().map(|p| p.id).collect(),
        None => BTreeSet::new(),
    };
    Ok(vec![vec![int(brute_force_triangles(&v.adj, &nodes) as i64)]])
}

fn bi18(v: &View, date: Date, threshold: i64, languages: &[String]) -> Out {
    let mut per_person = Vec::new();
    for p in v.g.persons().keys() {
        let n = v
            .messages_by(*p)
            .filter(|m| !m.content.is_empty() && (m.length as i64) < threshold && m.creation_date > date.to_datetime())
            .filter(|m| languages.iter().any(|l| l == v.root(m).language()))
            .count() as i64;
        per_person.push(n);
    }
    let values: BTreeSet<i64> = per_person.iter().copied().collect();
    let rows = values
        .into_iter()
        .map(|n| vec![int(n), int(per_person.iter().filter(|&&x| x == n).count() as i64)])
        .collect();
    Ok(order(rows, &[(1, Desc), (0, Desc)], 0))
}

fn bi19(v: &View, date: Date, c1: &str, c2: &str) -> Out {
    let (Some(c1), Some(c2)) = (v.class_named(c1), v.class_named(c2)) else { return Ok(Vec::new()) };
    let member_of_class = |p: Id, c: Id| {
        v.g.forums().values().any(|f| {
            f.tags.iter().any(|&t| v.direct(t, c)) && v.g.edges().members.contains_key(&(f.id, p))
        })
    };
    let strangers: BTreeSet<Id> =
        v.g.persons().keys().copied().filter(|&p| member_of_class(p, c1) && member_of_class(p, c2)).collect();
    let mut rows = Vec::new();
    for p in v.g.persons().values().filter(|p| p.birthday > date) {
        let mut met = BTreeSet::new();
        let mut count = 0i64;
        for c in v.messages_by(p.id).filter(|m| m.is_comment()) {
            let mut cur = c;
            while let Some(parent) = cur.reply_of() {
                cur = v.msg(parent)?;
                let b = cur.creator;
                if b != p.id && strangers.contains(&b) && !v.knows(p.id, b) {
                    met.insert(b);
                    count += 1;
                }
            }
        }
        if count > 0 {
            rows.push(vec![id(p.id), int(met.len() as i64), int(count)]);
        }
    }
    Ok(order(rows, &[(2, Desc), (0, Asc)], 0))
}

fn bi20(v: &View, classes: &[String]) -> Out {
    let mut rows = Vec::new();
    let mut seen = BTreeSet::new();
    for name in classes {
        let Some(c) = v.class_named(name) else { continue };
        if !seen.insert(c) {
            continue;
        }
        let n = v.messages().filter(|m| m.tags.iter().any(|&t| v.under(t, c))).count() as i64;
        if n > 0 {
            rows.push(vec![s(name), int(n)]);
        }
    }
    Ok(order(rows, &[(1, Desc), (0, Asc)], 0))
}

fn bi21(v: &View, country: &str, end: Date) -> Out {
    let Some(country) = v.country_named(country) else { return Ok(Vec::new()) };
    let end_t = end.to_datetime();
    let zombie = |p: &Person| {
        if p.creation_date >= end_t {
            return false;
        }
        let n = v.messages_by(p.id).filter(|m| m.creation_date < end_t).count() as f64;
        n / (months_by_day_walk(p.creation_date, end_t) as f64) < 1.0
    };
    let zombies: BTreeSet<Id> = v.residents(country).into_iter().filter(|p| zombie(p)).map(|p| p.id).collect();
    let mut rows = Vec::new();
    for &z in &zombies {
        let mut total = 0i64;
        let mut from_zombies = 0i64;
        for (&(liker, m), _) in &v.g.edges().likes {
            if liker == z || v.msg(m)?.creator != z || v.person(liker)?.creation_date >= end_t {
                continue;
            }
            total += 1;
            if zombies.contains(&liker) {
                from_zombies += 1;
            }
        }
        let score = if total == 0 { 0.0 } else { from_zombies as f64 / total as f64 };
        rows.push(vec![id(z), int(from_zombies), int(total), Value::Float(score)]);
    }
    Ok(order(rows, &[(3, Desc), (0, Asc)], 0))
}

fn bi22(v: &View, c1: &str, c2: &str) -> Out {
    let (Some(c1), Some(c2)) = (v.country_named(c1), v.country_named(c2)) else { return Ok(Vec::new()) };
    let replied = |a: Id, b: Id| {
        v.messages().any(|c| c.creator == a && c.reply_of().is_some_and(|r| v.g.messages()[&r].creator == b))
    };
    let liked = |a: Id, b: Id| v.g.edges().likes.keys().any(|(p, m)| *p == a && v.g.messages()[m].creator == b);
    let side2 = v.residents(c2);
    let mut best: BTreeMap<Id, Row> = BTreeMap::new();
    for p1 in v.residents(c1) {
        for p2 in side2.iter().filter(|p2| p2.id != p1.id) {
            let score = 4 * i64::from(replied(p1.id, p2.id))
                + i64::from(replied(p2.id, p1.id))
                + 15 * i64::from(v.knows(p1.id, p2.id))
                + 10 * i64::from(liked(p1.id, p2.id))
                + i64::from(liked(p2.id, p1.id));
            let row = vec![id(p1.id), id(p2.id), Value::Str(v.place_name(p1.city)), int(score)];
            let better = match best.get(&p1.city) {
                None => true,
                Some(cur) => {
                    let cur_score = cur[3].as_int().unwrap();
                    score > cur_score
                        || (score == cur_score && (p1.id, p2.id) < (cur[0].as_int().unwrap() as Id, cur[1].as_int().unwrap() as Id))
                }
            };
            if better {
                best.insert(p1.city, row);
            }
        }
    }
    Ok(order(best.into_values().collect(), &[(3, Desc), (0, Asc), (1, Asc)], 0))
}

fn bi23(v: &View, country: &str) -> Out {
    let Some(home) = v.country_named(country) else { return Ok(Vec::new()) };
    let mut groups: BTreeMap<(Id, u32), i64> = BTreeMap::new();
    for m in v.messages() {
        if v.home(v.person(m.creator)?) == Some(home) && m.country != home {
            *groups.entry((m.country, m.creation_date.month())).or_default() += 1;
        }
    }
    let rows = groups.into_iter().map(|((d, month), n)| vec![int(n), Value::Str(v.place_name(d)), int(month)]).collect();
    Ok(order(rows, &[(0, Desc), (1, Asc), (2, Asc)], 0))
}

fn bi24(v: &View, class: &str) -> Out {
    let Some(class) = v.class_named(class) else { return Ok(Vec::new()) };
    let mut groups: BTreeMap<(i32, u32, String), (i64, i64)> = BTreeMap::new();
    for m in v.messages().filter(|m| m.tags.iter().any(|&t| v.direct(t, class))) {
        let continent = v.g.places()[&m.country].part_of.map(|c| v.place_name(c)).unwrap_or_default();
        let e = groups.entry((m.creation_date.year(), m.creation_date.month(), continent)).or_default();
        e.0 += 1;
        e.1 += v.like_count(m.id);
    }
    let rows = groups
        .into_iter()
        .map(|((y, mo, c), (n, l))| vec![int(n), int(l), int(y), int(mo), Value::Str(c)])
        .collect();
    Ok(order(rows, &[(2, Asc), (3, Asc), (4, Desc)], 0))
}
