//! Lookups shared by the query implementations.

use std::collections::BTreeMap;

use snbkit_core::{Date, DateTime, EntityKind, GraphSnapshot, Id, Message, Person, Value};

use crate::algorithms::bfs_distances;
use crate::EngineError;

pub fn person(g: &GraphSnapshot, id: Id) -> Result<&Person, EngineError> {
    g.person(id).ok_or(EngineError::UnknownBindingId { kind: EntityKind::Person, id })
}

pub fn message(g: &GraphSnapshot, id: Id) -> Result<&Message, EngineError> {
    g.message(id).ok_or(EngineError::UnknownBindingId { kind: EntityKind::Message, id })
}

/// Persons one to `max` hops from `start`, with their distance.
pub fn within(g: &GraphSnapshot, start: Id, max: u32) -> BTreeMap<Id, u32> {
    bfs_distances(g, start, Some(max)).into_iter().filter(|&(p, d)| p != start && d > 0).collect()
}

/// First instant of the day after `d`; closes inclusive date ranges.
pub fn end_of(d: Date) -> DateTime {
    d.succ().to_datetime()
}

/// Whether `t` falls on a day in `[start, end]`.
pub fn in_days(t: DateTime, start: Date, end: Date) -> bool {
    start.to_datetime() <= t && t < end_of(end)
}

pub fn city_name(g: &GraphSnapshot, p: &Person) -> String {
    g.place(p.city).map(|c| c.name.clone()).unwrap_or_default()
}

pub fn place_name(g: &GraphSnapshot, id: Id) -> String {
    g.place(id).map(|c| c.name.clone()).unwrap_or_default()
}

pub fn tag_name(g: &GraphSnapshot, id: Id) -> String {
    g.tag(id).map(|t| t.name.clone()).unwrap_or_default()
}


pub fn id(v: Id) -> Value {
    Value::Int(v as i64)
}

pub fn int(v: impl Into<i64>) -> Value {
    Value::Int(v.into())
}

pub fn text(s: &str) -> Value {
    Value::Str(s.to_string())
}

pub fn strings<'a>(items: impl IntoIterator<Item = &'a String>) -> Value {
    Value::List(items.into_iter().map(|s| Value::Str(s.clone())).collect())
}
