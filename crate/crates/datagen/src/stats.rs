//! Per-entity counts kept for parameter curation.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use snbkit_core::{GraphSnapshot, Id};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PersonCounts {
    pub friends: u64,
    /// Persons exactly two hops away.
    pub friends_of_friends: u64,
    /// Persons one to three hops away.
    pub within_three_hops: u64,
    pub messages: u64,
    /// Messages authored by friends.
    pub friend_messages: u64,
    /// Messages authored by persons one or two hops away.
    pub two_hop_messages: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CurationStats {
    pub persons: BTreeMap<Id, PersonCounts>,
    pub tag_messages: BTreeMap<Id, u64>,
    pub tag_interests: BTreeMap<Id, u64>,
    /// Messages carrying a tag whose class is exactly this class.
    pub tag_class_messages: BTreeMap<Id, u64>,
    pub country_persons: BTreeMap<Id, u64>,
    /// Messages by country of the message.
    pub country_messages: BTreeMap<Id, u64>,
    pub first_names: BTreeMap<String, u64>,
}

fn person_counts(g: &GraphSnapshot, p: Id) -> PersonCounts {
    let friends: HashSet<Id> = g.friends(p).keys().copied().collect();
    let mut two: HashSet<Id> = HashSet::new();
    for &f in &friends {
        for &ff in g.friends(f).keys() {
            if ff != p && !friends.contains(&ff) {
                two.insert(ff);
            }
        }
    }
    let mut three: HashSet<Id> = HashSet::new();
    for &ff in &two {
        for &fff in g.friends(ff).keys() {
            if fff != p && !friends.contains(&fff) && !two.contains(&fff) {
                three.insert(fff);
            }
        }
    }
    let msgs = |s: &HashSet<Id>| s.iter().map(|q| g.messages_of(*q).len() as u64).sum::<u64>();
    let friend_messages = msgs(&friends);
    PersonCounts {
        friends: friends.len() as u64,
        friends_of_friends: two.len() as u64,
        within_three_hops: (friends.len() + two.len() + three.len()) as u64,
        messages: g.messages_of(p).len() as u64,
        friend_messages,
        two_hop_messages: friend_messages + msgs(&two),
    }
}

pub fn compute_stats(g: &GraphSnapshot) -> CurationStats {
    let ids: Vec<Id> = g.persons().keys().copied().collect();
    let persons = ids.par_iter().map(|&p| (p, person_counts(g, p))).collect();
    let mut s = CurationStats { persons, ..CurationStats::default() };
    for t in g.tags().values() {
        s.tag_messages.insert(t.id, g.messages_with_tag(t.id).len() as u64);
        s.tag_interests.insert(t.id, g.persons_interested_in(t.id).len() as u64);
        *s.tag_class_messages.entry(t.tag_class).or_default() += g.messages_with_tag(t.id).len() as u64;
    }
    for c in g.tag_classes().keys() {
        s.tag_class_messages.entry(*c).or_default();
    }
    for p in g.persons().values() {
        if let Some(c) = g.country_of_city(p.city) {
            *s.country_persons.entry(c).or_default() += 1;
        }
        *s.first_names.entry(p.first_name.clone()).or_default() += 1;
    }
    for m in g.messages().values() {
        *s.country_messages.entry(m.country).or_default() += 1;
    }
    s
}
