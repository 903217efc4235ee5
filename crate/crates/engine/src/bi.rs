//! Business intelligence reads.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet};

use snbkit_core::{months_between, root_post, Date, GraphSnapshot, Id, Message, Person, Row, Value};

use crate::algorithms::{count_triangles, trail_reachable, weighted_shortest_paths};
use crate::common::{end_of, id, in_days, int, person, place_name, tag_name, text};
use crate::ic::{pair_weight, paths_rows};
use crate::EngineError;

/// Longest trail accepted by BI16.
pub const MAX_TRAIL_LENGTH: u32 = 4;

/// Persons with at least this many messages per month are not zombies.
const ZOMBIE_RATE: i64 = 1;

/// BI2 groups must hold more than this many messages.
const BI2_MIN_GROUP: i64 = 100;

fn messages(g: &GraphSnapshot) -> impl Iterator<Item = &Message> {
    g.messages().values()
}

fn length_category(len: u32) -> i64 {
    match len {
        0..40 => 0,
        40..80 => 1,
        80..160 => 2,
        _ => 3,
    }
}

pub fn bi1(g: &GraphSnapshot, date: Date) -> Result<Vec<Row>, EngineError> {
    let before = date.to_datetime();
    let mut groups: BTreeMap<(Reverse<i32>, bool, i64), (i64, i64)> = BTreeMap::new();
    let mut total = 0i64;
    for m in messages(g).filter(|m| m.creation_date < before) {
        total += 1;
        let e = groups.entry((Reverse(m.creation_date.year()), m.is_comment(), length_category(m.length))).or_default();
        e.0 += 1;
        e.1 += m.length as i64;
    }
    Ok(groups
        .into_iter()
        .map(|((Reverse(year), is_comment, cat), (count, sum))| {
            vec![
                int(year),
                Value::Bool(is_comment),
                int(cat),
                int(count),
                int(sum / count),
                int(sum),
                Value::Float(count as f64 * 100.0 / total as f64),
            ]
        })
        .collect())
}

/// Whole years from `birthday` to 2013-01-01, divided by five.
pub fn age_group(birthday: Date) -> i64 {
    let years = 2013 - birthday.year() as i64 - i64::from((birthday.month(), birthday.day()) > (1, 1));
    years.div_euclid(5)
}

pub fn bi2(g: &GraphSnapshot, start: Date, end: Date, country1: &str, country2: &str) -> Result<Vec<Row>, EngineError> {
    let countries: BTreeSet<Id> = [country1, country2].iter().filter_map(|c| g.country_by_name(c)).collect();
    let mut groups: BTreeMap<(String, u32, String, i64, String), i64> = BTreeMap::new();
    for c in &countries {
        let cname = place_name(g, *c);
        for p in g.persons_in_country(*c) {
            let p = g.person(p).expect("indexed person");
            let age = age_group(p.birthday);
            for m in g.messages_of(p.id).iter().filter_map(|&m| g.message(m)) {
                if !in_days(m.creation_date, start, end) {
                    continue;
                }
                for &t in &m.tags {
                    let key = (cname.clone(), m.creation_date.month(), p.gender.clone(), age, tag_name(g, t));
                    *groups.entry(key).or_default() += 1;
                }
            }
        }
    }
    let mut rows: Vec<_> = groups
        .into_iter()
        .filter(|(_, c)| *c > BI2_MIN_GROUP)
        .map(|((country, month, gender, age, tag), c)| (Reverse(c), tag, age, gender, month, country))
        .collect();
    rows.sort();
    Ok(rows
        .into_iter()
        .map(|(Reverse(c), tag, age, gender, month, country)| {
            vec![Value::Str(country), int(month), Value::Str(gender), int(age), Value::Str(tag), int(c)]
        })
        .collect())
}

pub fn bi3(g: &GraphSnapshot, year: i64, month: i64) -> Result<Vec<Row>, EngineError> {
    if !(1..=12).contains(&month) {
        return Err(EngineError::InvalidBinding(format!("month {month} is not in 1..=12")));
    }
    let first = (year, month);
    let second = if month == 12 { (year + 1, 1) } else { (year, month + 1) };
    let mut counts: BTreeMap<Id, (i64, i64)> = BTreeMap::new();
    for m in messages(g) {
        let ym = (m.creation_date.year() as i64, m.creation_date.month() as i64);
        if ym != first && ym != second {
            continue;
        }
        for &t in &m.tags {
            let e = counts.entry(t).or_default();
            if ym == first {
                e.0 += 1;
            } else {
                e.1 += 1;
            }
        }
    }
    let mut rows: Vec<_> =
        counts.into_iter().map(|(t, (a, b))| (Reverse((a - b).abs()), tag_name(g, t), a, b)).collect();
    rows.sort();
    Ok(rows.into_iter().map(|(Reverse(d), n, a, b)| vec![Value::Str(n), int(a), int(b), int(d)]).collect())
}

pub fn bi4(g: &GraphSnapshot, tag_class: &str, country: &str) -> Result<Vec<Row>, EngineError> {
    let (Some(class), Some(country)) = (g.tag_class_by_name(tag_class), g.country_by_name(country)) else {
        return Ok(Vec::new());
    };
    let tags = g.tags_of_class(class);
    let mut rows = Vec::new();
    for f in g.forums().values() {
        if g.country_of_person(f.moderator) != Some(country) {
            continue;
        }
        let posts = g
            .posts_in(f.id)
            .iter()
            .filter(|&&m| g.message(m).is_some_and(|m| m.tags.iter().any(|t| tags.contains(t))))
            .count() as i64;
        if posts > 0 {
            rows.push((Reverse(posts), f.id));
        }
    }
    rows.sort();
    Ok(rows
        .into_iter()
        .map(|(Reverse(c), f)| {
            let f = g.forum(f).expect("forum exists");
            vec![id(f.id), text(&f.title), Value::DateTime(f.creation_date), id(f.moderator), int(c)]
        })
        .collect())
}

pub fn bi5(g: &GraphSnapshot, country: &str) -> Result<Vec<Row>, EngineError> {
    let Some(country) = g.country_by_name(country) else {
        return Ok(Vec::new());
    };
    let mut popularity: BTreeMap<Id, i64> = BTreeMap::new();
    for p in g.persons_in_country(country) {
        for &f in g.forums_of_member(p) {
            *popularity.entry(f).or_default() += 1;
        }
    }
    let mut ranked: Vec<(Reverse<i64>, Id)> = popularity.into_iter().map(|(f, c)| (Reverse(c), f)).collect();
    ranked.sort();
    ranked.truncate(100);
    let top: BTreeSet<Id> = ranked.into_iter().map(|(_, f)| f).collect();
    let mut counts: BTreeMap<Id, i64> = BTreeMap::new();
    for &f in &top {
        for &p in g.members_of(f).keys() {
            counts.entry(p).or_default();
        }
    }
    for &f in &top {
        for &m in g.posts_in(f) {
            let creator = g.message(m).expect("indexed post").creator;
            if let Some(c) = counts.get_mut(&creator) {
                *c += 1;
            }
        }
    }
    let mut rows: Vec<(Reverse<i64>, Id)> = counts.into_iter().map(|(p, c)| (Reverse(c), p)).collect();
    rows.sort();
    Ok(rows
        .into_iter()
        .map(|(Reverse(c), p)| {
            let p = g.person(p).expect("member exists");
            vec![id(p.id), text(&p.first_name), text(&p.last_name), Value::DateTime(p.creation_date), int(c)]
        })
        .collect())
}

pub fn bi6(g: &GraphSnapshot, tag: &str) -> Result<Vec<Row>, EngineError> {
    let Some(tag) = g.tag_by_name(tag) else {
        return Ok(Vec::new());
    };
    // (messages, replies, likes) per creator.
    let mut stats: BTreeMap<Id, (i64, i64, i64)> = BTreeMap::new();
    for m in g.messages_with_tag(tag).iter().filter_map(|&m| g.message(m)) {
        let e = stats.entry(m.creator).or_default();
        e.0 += 1;
        e.1 += g.replies_to(m.id).len() as i64;
        e.2 += g.likes_of(m.id).len() as i64;
    }
    let mut rows: Vec<_> =
        stats.into_iter().map(|(p, (mc, rc, lc))| (Reverse(mc + 2 * rc + 10 * lc), p, rc, lc, mc)).collect();
    rows.sort();
    Ok(rows
        .into_iter()
        .map(|(Reverse(score), p, rc, lc, mc)| vec![id(p), int(rc), int(lc), int(mc), int(score)])
        .collect())
}

pub fn bi7(g: &GraphSnapshot, tag: &str) -> Result<Vec<Row>, EngineError> {
    let Some(tag) = g.tag_by_name(tag) else {
        return Ok(Vec::new());
    };
    let popularity = |p: Id| g.messages_of(p).iter().map(|&m| g.likes_of(m).len() as i64).sum::<i64>();
    let mut likers: BTreeMap<Id, BTreeSet<Id>> = BTreeMap::new();
    for m in g.messages_with_tag(tag).iter().filter_map(|&m| g.message(m)) {
        likers.entry(m.creator).or_default().extend(g.likes_of(m.id).keys());
    }
    let mut rows: Vec<(Reverse<i64>, Id)> =
        likers.into_iter().map(|(p, ls)| (Reverse(ls.into_iter().map(popularity).sum()), p)).collect();
    rows.sort();
    Ok(rows.into_iter().map(|(Reverse(s), p)| vec![id(p), int(s)]).collect())
}

pub fn bi8(g: &GraphSnapshot, tag: &str) -> Result<Vec<Row>, EngineError> {
    let Some(tag) = g.tag_by_name(tag) else {
        return Ok(Vec::new());
    };
    let mut replies: BTreeSet<Id> = BTreeSet::new();
    for &m in g.messages_with_tag(tag) {
        for &c in g.replies_to(m) {
            if g.message(c).is_some_and(|c| !c.tags.contains(&tag)) {
                replies.insert(c);
            }
        }
    }
    let mut counts: BTreeMap<Id, i64> = BTreeMap::new();
    for c in replies {
        for &t in &g.message(c).expect("reply exists").tags {
            *counts.entry(t).or_default() += 1;
        }
    }
    let mut rows: Vec<_> = counts.into_iter().map(|(t, c)| (Reverse(c), tag_name(g, t))).collect();
    rows.sort();
    Ok(rows.into_iter().map(|(Reverse(c), n)| vec![Value::Str(n), int(c)]).collect())
}

pub fn bi9(g: &GraphSnapshot, class1: &str, class2: &str, threshold: i64) -> Result<Vec<Row>, EngineError> {
    let (Some(c1), Some(c2)) = (g.tag_class_by_name(class1), g.tag_class_by_name(class2)) else {
        return Ok(Vec::new());
    };
    let (t1, t2) = (g.tags_of_class(c1), g.tags_of_class(c2));
    let mut rows = Vec::new();
    for f in g.forums().keys() {
        if (g.members_of(*f).len() as i64) <= threshold {
            continue;
        }
        let (mut n1, mut n2) = (0i64, 0i64);
        for m in g.posts_in(*f).iter().filter_map(|&m| g.message(m)) {
            n1 += i64::from(m.tags.iter().any(|t| t1.contains(t)));
            n2 += i64::from(m.tags.iter().any(|t| t2.contains(t)));
        }
        if n1 > 0 && n2 > 0 {
            rows.push((Reverse((n2 - n1).abs()), *f, n1, n2));
        }
    }
    rows.sort();
    Ok(rows.into_iter().map(|(_, f, n1, n2)| vec![id(f), int(n1), int(n2)]).collect())
}

pub fn bi10(g: &GraphSnapshot, tag: &str, date: Date) -> Result<Vec<Row>, EngineError> {
    let Some(tag) = g.tag_by_name(tag) else {
        return Ok(Vec::new());
    };
    let after = date.to_datetime();
    let mut score: BTreeMap<Id, i64> = BTreeMap::new();
    for &p in g.persons_interested_in(tag) {
        *score.entry(p).or_default() += 100;
    }
    for m in g.messages_with_tag(tag).iter().filter_map(|&m| g.message(m)) {
        if m.creation_date > after {
            *score.entry(m.creator).or_default() += 1;
        }
    }
    let mut rows: Vec<_> = score
        .iter()
        .map(|(&p, &s)| {
            let friends: i64 = g.friends(p).keys().map(|f| score.get(f).copied().unwrap_or(0)).sum();
            (Reverse(s + friends), p, s, friends)
        })
        .collect();
    rows.sort();
    Ok(rows.into_iter().map(|(_, p, s, f)| vec![id(p), int(s), int(f)]).collect())
}

pub fn bi11(g: &GraphSnapshot, country: &str, blacklist: &[String]) -> Result<Vec<Row>, EngineError> {
    let Some(country) = g.country_by_name(country) else {
        return Ok(Vec::new());
    };
    let words: Vec<&str> = blacklist.iter().map(String::as_str).filter(|w| !w.is_empty()).collect();
    // (person, tag) to (likes, replies).
    let mut groups: BTreeMap<(Id, Id), (i64, i64)> = BTreeMap::new();
    for p in g.persons_in_country(country) {
        for c in g.messages_of(p).iter().filter_map(|&m| g.message(m)) {
            let Some(parent) = c.reply_of().and_then(|r| g.message(r)) else { continue };
            if c.tags.iter().any(|t| parent.tags.contains(t)) || words.iter().any(|w| c.content.contains(w)) {
                continue;
            }
            let likes = g.likes_of(c.id).len() as i64;
            for &t in &c.tags {
                let e = groups.entry((p, t)).or_default();
                e.0 += likes;
                e.1 += 1;
            }
        }
    }
    let mut rows: Vec<_> =
        groups.into_iter().map(|((p, t), (likes, replies))| (Reverse(likes), p, tag_name(g, t), replies)).collect();
    rows.sort();
    Ok(rows
        .into_iter()
        .map(|(Reverse(likes), p, t, replies)| vec![id(p), Value::Str(t), int(likes), int(replies)])
        .collect())
}

pub fn bi12(g: &GraphSnapshot, date: Date, threshold: i64) -> Result<Vec<Row>, EngineError> {
    let after = date.to_datetime();
    let mut rows: Vec<(Reverse<i64>, Id)> = messages(g)
        .filter(|m| m.creation_date > after)
        .map(|m| (Reverse(g.likes_of(m.id).len() as i64), m.id))
        .filter(|(Reverse(l), _)| *l > threshold)
        .collect();
    rows.sort();
    Ok(rows
        .into_iter()
        .map(|(Reverse(l), m)| {
            let m = g.message(m).expect("message exists");
            let c = g.person(m.creator).expect("creator exists");
            vec![id(m.id), Value::DateTime(m.creation_date), text(&c.first_name), text(&c.last_name), int(l)]
        })
        .collect())
}

pub fn bi13(g: &GraphSnapshot, country: &str) -> Result<Vec<Row>, EngineError> {
    let Some(country) = g.country_by_name(country) else {
        return Ok(Vec::new());
    };
    let mut groups: BTreeMap<(Reverse<i32>, u32), BTreeMap<Id, i64>> = BTreeMap::new();
    for m in messages(g).filter(|m| m.country == country) {
        let e = groups.entry((Reverse(m.creation_date.year()), m.creation_date.month())).or_default();
        for &t in &m.tags {
            *e.entry(t).or_default() += 1;
        }
    }
    Ok(groups
        .into_iter()
        .map(|((Reverse(year), month), tags)| {
            let mut popular: Vec<(Reverse<i64>, String)> =
                tags.into_iter().map(|(t, c)| (Reverse(c), tag_name(g, t))).collect();
            popular.sort();
            popular.truncate(5);
            let pairs = popular.into_iter().map(|(Reverse(c), n)| Value::List(vec![Value::Str(n), int(c)])).collect();
            vec![int(year), int(month), Value::List(pairs)]
        })
        .collect())
}

pub fn bi14(g: &GraphSnapshot, start: Date, end: Date) -> Result<Vec<Row>, EngineError> {
    let mut stats: BTreeMap<Id, (i64, i64)> = BTreeMap::new();
    for post in messages(g).filter(|m| m.is_post() && in_days(m.creation_date, start, end)) {
        let mut count = 0i64;
        let mut stack = vec![post.id];
        while let Some(m) = stack.pop() {
            if in_days(g.message(m).expect("thread message").creation_date, start, end) {
                count += 1;
            }
            stack.extend(g.replies_to(m));
        }
        let e = stats.entry(post.creator).or_default();
        e.0 += 1;
        e.1 += count;
    }
    let mut rows: Vec<_> = stats.into_iter().map(|(p, (threads, msgs))| (Reverse(msgs), p, threads)).collect();
    rows.sort();
    Ok(rows
        .into_iter()
        .map(|(Reverse(msgs), p, threads)| {
            let p = g.person(p).expect("creator exists");
            vec![id(p.id), text(&p.first_name), text(&p.last_name), int(threads), int(msgs)]
        })
        .collect())
}

pub fn bi15(g: &GraphSnapshot, country: &str) -> Result<Vec<Row>, EngineError> {
    let Some(country) = g.country_by_name(country) else {
        return Ok(Vec::new());
    };
    let residents: BTreeSet<Id> = g.persons_in_country(country).collect();
    if residents.is_empty() {
        return Ok(Vec::new());
    }
    let counts: BTreeMap<Id, i64> = residents
        .iter()
        .map(|&p| (p, g.friends(p).keys().filter(|f| residents.contains(f)).count() as i64))
        .collect();
    let normal = counts.values().sum::<i64>() / counts.len() as i64;
    Ok(counts.into_iter().filter(|(_, c)| *c == normal).map(|(p, c)| vec![id(p), int(c)]).collect())
}

pub fn bi16(
    g: &GraphSnapshot,
    start: Id,
    country: &str,
    tag_class: &str,
    min: i64,
    max: i64,
) -> Result<Vec<Row>, EngineError> {
    person(g, start)?;
    if min < 1 || min > max {
        return Err(EngineError::InvalidBinding(format!("trail length range {min}..={max} is empty")));
    }
    if max > MAX_TRAIL_LENGTH as i64 {
        return Err(EngineError::RangeTooLarge { min, max, cap: MAX_TRAIL_LENGTH });
    }
    let (Some(country), Some(class)) = (g.country_by_name(country), g.tag_class_by_name(tag_class)) else {
        return Ok(Vec::new());
    };
    let class_tags = g.tags_of_class(class);
    let mut counts: BTreeMap<(Id, Id), i64> = BTreeMap::new();
    for p in trail_reachable(g, start, min as u32, max as u32) {
        if g.country_of_person(p) != Some(country) {
            continue;
        }
        for m in g.messages_of(p).iter().filter_map(|&m| g.message(m)) {
            if m.tags.iter().any(|t| class_tags.contains(t)) {
                for &t in &m.tags {
                    *counts.entry((p, t)).or_default() += 1;
                }
            }
        }
    }
    let mut rows: Vec<_> = counts.into_iter().map(|((p, t), c)| (Reverse(c), tag_name(g, t), p)).collect();
    rows.sort();
    Ok(rows.into_iter().map(|(Reverse(c), t, p)| vec![id(p), Value::Str(t), int(c)]).collect())
}

pub fn bi17(g: &GraphSnapshot, country: &str) -> Result<Vec<Row>, EngineError> {
    let residents: BTreeSet<Id> = match g.country_by_name(country) {
        Some(c) => g.persons_in_country(c).collect(),
        None => BTreeSet::new(),
    };
    Ok(vec![vec![int(count_triangles(g, &residents) as i64)]])
}

pub fn bi18(g: &GraphSnapshot, date: Date, threshold: i64, languages: &[String]) -> Result<Vec<Row>, EngineError> {
    let after = date.to_datetime();
    let mut per_person: BTreeMap<Id, i64> = g.persons().keys().map(|&p| (p, 0)).collect();
    for m in messages(g) {
        if m.content.is_empty() || m.length as i64 >= threshold || m.creation_date <= after {
            continue;
        }
        let (root, _) = root_post(g, m.id)?;
        let lang = g.message(root).expect("root exists").language();
        if languages.iter().any(|l| l == lang) {
            *per_person.entry(m.creator).or_default() += 1;
        }
    }
    let mut hist: BTreeMap<i64, i64> = BTreeMap::new();
    for c in per_person.into_values() {
        *hist.entry(c).or_default() += 1;
    }
    let mut rows: Vec<_> = hist.into_iter().map(|(mc, pc)| (Reverse(pc), Reverse(mc))).collect();
    rows.sort();
    Ok(rows.into_iter().map(|(Reverse(pc), Reverse(mc))| vec![int(mc), int(pc)]).collect())
}

/// Persons who belong to a forum tagged with a tag of `class`.
fn members_of_tagged_forums(g: &GraphSnapshot, class: Id) -> BTreeSet<Id> {
    let tags = g.tags_of_class(class);
    g.forums()
        .values()
        .filter(|f| f.tags.iter().any(|t| tags.contains(t)))
        .flat_map(|f| g.members_of(f.id).keys().copied())
        .collect()
}

pub fn bi19(g: &GraphSnapshot, date: Date, class1: &str, class2: &str) -> Result<Vec<Row>, EngineError> {
    let (Some(c1), Some(c2)) = (g.tag_class_by_name(class1), g.tag_class_by_name(class2)) else {
        return Ok(Vec::new());
    };
    let in1 = members_of_tagged_forums(g, c1);
    let in2 = members_of_tagged_forums(g, c2);
    let candidates: BTreeSet<Id> = in1.intersection(&in2).copied().collect();
    let mut rows = Vec::new();
    for p in g.persons().values().filter(|p| p.birthday > date) {
        let mut strangers = BTreeSet::new();
        let mut interactions = 0i64;
        for c in g.messages_of(p.id).iter().filter_map(|&m| g.message(m)) {
            let mut cur = c.reply_of();
            while let Some(a) = cur {
                let ancestor = g.message(a).expect("reply chain");
                let s = ancestor.creator;
                if s != p.id && candidates.contains(&s) && !g.knows(p.id, s) {
                    strangers.insert(s);
                    interactions += 1;
                }
                cur = ancestor.reply_of();
            }
        }
        if interactions > 0 {
            rows.push((Reverse(interactions), p.id, strangers.len() as i64));
        }
    }
    rows.sort();
    Ok(rows.into_iter().map(|(Reverse(i), p, s)| vec![id(p), int(s), int(i)]).collect())
}

pub fn bi20(g: &GraphSnapshot, classes: &[String]) -> Result<Vec<Row>, EngineError> {
    let names: BTreeSet<&str> = classes.iter().map(String::as_str).collect();
    let mut rows = Vec::new();
    for name in names {
        let Some(class) = g.tag_class_by_name(name) else { continue };
        let mut msgs: BTreeSet<Id> = BTreeSet::new();
        for c in g.tag_class_descendants(class) {
            for &t in g.tags_of_class(c) {
                msgs.extend(g.messages_with_tag(t));
            }
        }
        if !msgs.is_empty() {
            rows.push((Reverse(msgs.len() as i64), name.to_string()));
        }
    }
    rows.sort();
    Ok(rows.into_iter().map(|(Reverse(c), n)| vec![Value::Str(n), int(c)]).collect())
}

/// Whether `p` averages fewer than one message per month up to `end`.
fn is_zombie(g: &GraphSnapshot, p: &Person, end: Date) -> bool {
    let end = end.to_datetime();
    if p.creation_date >= end {
        return false;
    }
    let months = months_between(p.creation_date, end);
    let count = g.messages_of(p.id).iter().filter(|&&m| g.message(m).is_some_and(|m| m.creation_date < end)).count();
    (count as i64) < ZOMBIE_RATE * months
}

pub fn bi21(g: &GraphSnapshot, country: &str, end: Date) -> Result<Vec<Row>, EngineError> {
    let Some(country) = g.country_by_name(country) else {
        return Ok(Vec::new());
    };
    let end_t = end.to_datetime();
    let zombies: BTreeSet<Id> =
        g.persons_in_country(country).filter(|&p| is_zombie(g, g.person(p).expect("resident"), end)).collect();
    let mut rows = Vec::new();
    for &z in &zombies {
        let (mut from_zombies, mut total) = (0i64, 0i64);
        for &m in g.messages_of(z) {
            for &liker in g.likes_of(m).keys() {
                if liker == z || g.person(liker).is_none_or(|l| l.creation_date >= end_t) {
                    continue;
                }
                total += 1;
                from_zombies += i64::from(zombies.contains(&liker));
            }
        }
        let score = if total == 0 { 0.0 } else { from_zombies as f64 / total as f64 };
        rows.push((score, z, from_zombies, total));
    }
    rows.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    Ok(rows.into_iter().map(|(s, z, zl, t)| vec![id(z), int(zl), int(t), Value::Float(s)]).collect())
}

/// Interaction score of an ordered pair.
pub fn bi22_score(g: &GraphSnapshot, p1: Id, p2: Id) -> i64 {
    let replied_to = |a: Id, b: Id| {
        g.messages_of(a)
            .iter()
            .filter_map(|&c| g.message(c).and_then(Message::reply_of))
            .any(|r| g.message(r).is_some_and(|m| m.creator == b))
    };
    let liked = |a: Id, b: Id| g.liked_by(a).iter().any(|&m| g.message(m).is_some_and(|m| m.creator == b));
    let mut score = 0;
    if replied_to(p1, p2) {
        score += 4;
    }
    if replied_to(p2, p1) {
        score += 1;
    }
    if g.knows(p1, p2) {
        score += 15;
    }
    if liked(p1, p2) {
        score += 10;
    }
    if liked(p2, p1) {
        score += 1;
    }
    score
}

pub fn bi22(g: &GraphSnapshot, country1: &str, country2: &str) -> Result<Vec<Row>, EngineError> {
    let (Some(c1), Some(c2)) = (g.country_by_name(country1), g.country_by_name(country2)) else {
        return Ok(Vec::new());
    };
    let others: Vec<Id> = g.persons_in_country(c2).collect::<BTreeSet<_>>().into_iter().collect();
    let mut rows = Vec::new();
    for &city in g.place_children(c1) {
        let mut best: Option<(Reverse<i64>, Id, Id)> = None;
        for &p1 in g.persons_in_city(city) {
            for &p2 in others.iter().filter(|&&p2| p2 != p1) {
                let cand = (Reverse(bi22_score(g, p1, p2)), p1, p2);
                if best.is_none_or(|b| cand < b) {
                    best = Some(cand);
                }
            }
        }
        if let Some(b) = best {
            rows.push((b.0, b.1, b.2, place_name(g, city)));
        }
    }
    rows.sort();
    Ok(rows.into_iter().map(|(Reverse(s), p1, p2, city)| vec![id(p1), id(p2), Value::Str(city), int(s)]).collect())
}

pub fn bi23(g: &GraphSnapshot, country: &str) -> Result<Vec<Row>, EngineError> {
    let Some(home) = g.country_by_name(country) else {
        return Ok(Vec::new());
    };
    let mut groups: BTreeMap<(String, u32), i64> = BTreeMap::new();
    for p in g.persons_in_country(home) {
        for m in g.messages_of(p).iter().filter_map(|&m| g.message(m)) {
            if m.country != home {
                *groups.entry((place_name(g, m.country), m.creation_date.month())).or_default() += 1;
            }
        }
    }
    let mut rows: Vec<_> = groups.into_iter().map(|((d, month), c)| (Reverse(c), d, month)).collect();
    rows.sort();
    Ok(rows.into_iter().map(|(Reverse(c), d, month)| vec![int(c), Value::Str(d), int(month)]).collect())
}

pub fn bi24(g: &GraphSnapshot, tag_class: &str) -> Result<Vec<Row>, EngineError> {
    let Some(class) = g.tag_class_by_name(tag_class) else {
        return Ok(Vec::new());
    };
    let mut msgs: BTreeSet<Id> = BTreeSet::new();
    for &t in g.tags_of_class(class) {
        msgs.extend(g.messages_with_tag(t));
    }
    let mut groups: BTreeMap<(i32, u32, Reverse<String>), (i64, i64)> = BTreeMap::new();
    for m in msgs.into_iter().filter_map(|m| g.message(m)) {
        let continent = g.place(m.country).and_then(|c| c.part_of).map(|c| place_name(g, c)).unwrap_or_default();
        let e = groups.entry((m.creation_date.year(), m.creation_date.month(), Reverse(continent))).or_default();
        e.0 += 1;
        e.1 += g.likes_of(m.id).len() as i64;
    }
    Ok(groups
        .into_iter()
        .map(|((year, month, Reverse(continent)), (mc, lc))| {
            vec![int(mc), int(lc), int(year), int(month), Value::Str(continent)]
        })
        .collect())
}

pub fn bi25(g: &GraphSnapshot, a: Id, b: Id, start: Date, end: Date) -> Result<Vec<Row>, EngineError> {
    person(g, a)?;
    person(g, b)?;
    let (lo, hi) = (start.to_datetime(), end_of(end));
    let keep = |c: &Message| {
        root_post(g, c.id)
            .ok()
            .and_then(|(_, f)| g.forum(f))
            .is_some_and(|f| lo <= f.creation_date && f.creation_date < hi)
    };
    let paths = weighted_shortest_paths(g, a, b, |u, v| pair_weight(g, u, v, &keep));
    Ok(paths_rows(paths))
}
