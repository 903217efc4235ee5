//! The in-memory graph with its adjacency indexes.
//!
//! Base collections are ordered maps so that iteration order, equality and
//! serialization are deterministic. Every mutation goes through a method that
//! keeps the indexes in step with the base collections.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::ModelError;
use crate::model::*;
use crate::time::DateTime;

/// Relationship tables not embedded in entity records.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EdgeSet {
    /// Undirected; keyed by `(min, max)`.
    pub knows: BTreeMap<(Id, Id), DateTime>,
    /// `(person, message)`.
    pub likes: BTreeMap<(Id, Id), DateTime>,
    /// `(forum, person)` with the join date.
    pub members: BTreeMap<(Id, Id), DateTime>,
    /// `(person, tag)`.
    pub interests: BTreeSet<(Id, Id)>,
    /// `(person, university)` with the class year.
    pub study_at: BTreeMap<(Id, Id), i32>,
    /// `(person, company)` with the year work started.
    pub work_at: BTreeMap<(Id, Id), i32>,
}

pub fn knows_key(a: Id, b: Id) -> (Id, Id) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Indexes {
    friends: HashMap<Id, BTreeMap<Id, DateTime>>,
    person_messages: HashMap<Id, BTreeSet<Id>>,
    forum_posts: HashMap<Id, BTreeSet<Id>>,
    replies: HashMap<Id, BTreeSet<Id>>,
    tag_messages: HashMap<Id, BTreeSet<Id>>,
    message_likes: HashMap<Id, BTreeMap<Id, DateTime>>,
    person_likes: HashMap<Id, BTreeSet<Id>>,
    forum_members: HashMap<Id, BTreeMap<Id, DateTime>>,
    person_forums: HashMap<Id, BTreeSet<Id>>,
    moderated: HashMap<Id, BTreeSet<Id>>,
    person_interests: HashMap<Id, BTreeSet<Id>>,
    tag_interested: HashMap<Id, BTreeSet<Id>>,
    person_study: HashMap<Id, BTreeMap<Id, i32>>,
    person_work: HashMap<Id, BTreeMap<Id, i32>>,
    city_persons: HashMap<Id, BTreeSet<Id>>,
    place_children: HashMap<Id, BTreeSet<Id>>,
    tag_class_children: HashMap<Id, BTreeSet<Id>>,
    tag_class_tags: HashMap<Id, BTreeSet<Id>>,
    country_by_name: HashMap<String, Id>,
    tag_by_name: HashMap<String, Id>,
    tag_class_by_name: HashMap<String, Id>,
}

fn set_add<K: std::hash::Hash + Eq, V: Ord>(m: &mut HashMap<K, BTreeSet<V>>, k: K, v: V) {
    m.entry(k).or_default().insert(v);
}

fn set_del<K: std::hash::Hash + Eq, V: Ord>(m: &mut HashMap<K, BTreeSet<V>>, k: &K, v: &V) {
    if let Some(s) = m.get_mut(k) {
        s.remove(v);
        if s.is_empty() {
            m.remove(k);
        }
    }
}

fn map_add<K: std::hash::Hash + Eq, V: Ord, W>(m: &mut HashMap<K, BTreeMap<V, W>>, k: K, v: V, w: W) {
    m.entry(k).or_default().insert(v, w);
}

fn map_del<K: std::hash::Hash + Eq, V: Ord, W>(m: &mut HashMap<K, BTreeMap<V, W>>, k: &K, v: &V) {
    if let Some(s) = m.get_mut(k) {
        s.remove(v);
        if s.is_empty() {
            m.remove(k);
        }
    }
}

static EMPTY_SET: BTreeSet<Id> = BTreeSet::new();

static EMPTY_DATED: BTreeMap<Id, DateTime> = BTreeMap::new();
static EMPTY_YEARS: BTreeMap<Id, i32> = BTreeMap::new();

#[derive(Clone, Debug, Default)]
pub struct GraphSnapshot {
    places: BTreeMap<Id, Place>,
    organisations: BTreeMap<Id, Organisation>,
    tag_classes: BTreeMap<Id, TagClass>,
    tags: BTreeMap<Id, Tag>,
    persons: BTreeMap<Id, Person>,
    forums: BTreeMap<Id, Forum>,
    messages: BTreeMap<Id, Message>,
    edges: EdgeSet,
    idx: Indexes,
}

/// Equality compares base collections only.
impl PartialEq for GraphSnapshot {
    fn eq(&self, o: &Self) -> bool {
        self.places == o.places
            && self.organisations == o.organisations
            && self.tag_classes == o.tag_classes
            && self.tags == o.tags
            && self.persons == o.persons
            && self.forums == o.forums
            && self.messages == o.messages
            && self.edges == o.edges
    }
}

impl Eq for GraphSnapshot {}

macro_rules! dup {
    ($map:expr, $id:expr, $kind:expr) => {
        if $map.contains_key(&$id) {
            return Err(ModelError::DuplicateId { kind: $kind, id: $id });
        }
    };
}

impl GraphSnapshot {
    pub fn new() -> GraphSnapshot {
        GraphSnapshot::default()
    }

    // ---- base collections -------------------------------------------------

    pub fn places(&self) -> &BTreeMap<Id, Place> {
        &self.places
    }
    pub fn organisations(&self) -> &BTreeMap<Id, Organisation> {
        &self.organisations
    }
    pub fn tag_classes(&self) -> &BTreeMap<Id, TagClass> {
        &self.tag_classes
    }
    pub fn tags(&self) -> &BTreeMap<Id, Tag> {
        &self.tags
    }
    pub fn persons(&self) -> &BTreeMap<Id, Person> {
        &self.persons
    }
    pub fn forums(&self) -> &BTreeMap<Id, Forum> {
        &self.forums
    }
    pub fn messages(&self) -> &BTreeMap<Id, Message> {
        &self.messages
    }
    pub fn edges(&self) -> &EdgeSet {
        &self.edges
    }

    pub fn place(&self, id: Id) -> Option<&Place> {
        self.places.get(&id)
    }
    pub fn organisation(&self, id: Id) -> Option<&Organisation> {
        self.organisations.get(&id)
    }
    pub fn tag_class(&self, id: Id) -> Option<&TagClass> {
        self.tag_classes.get(&id)
    }
    pub fn tag(&self, id: Id) -> Option<&Tag> {
        self.tags.get(&id)
    }
    pub fn person(&self, id: Id) -> Option<&Person> {
        self.persons.get(&id)
    }
    pub fn forum(&self, id: Id) -> Option<&Forum> {
        self.forums.get(&id)
    }
    pub fn message(&self, id: Id) -> Option<&Message> {
        self.messages.get(&id)
    }

    pub fn person_count(&self) -> usize {
        self.persons.len()
    }

    // ---- indexed lookups --------------------------------------------------

    /// Friends of a person with the knows creation date.
    pub fn friends(&self, person: Id) -> &BTreeMap<Id, DateTime> {
        self.idx.friends.get(&person).unwrap_or(&EMPTY_DATED)
    }

    pub fn knows(&self, a: Id, b: Id) -> bool {
        self.edges.knows.contains_key(&knows_key(a, b))
    }

    pub fn messages_of(&self, person: Id) -> &BTreeSet<Id> {
        self.idx.person_messages.get(&person).unwrap_or(&EMPTY_SET)
    }

    pub fn posts_in(&self, forum: Id) -> &BTreeSet<Id> {
        self.idx.forum_posts.get(&forum).unwrap_or(&EMPTY_SET)
    }

    /// Direct replies to a message.
    pub fn replies_to(&self, message: Id) -> &BTreeSet<Id> {
        self.idx.replies.get(&message).unwrap_or(&EMPTY_SET)
    }

    pub fn messages_with_tag(&self, tag: Id) -> &BTreeSet<Id> {
        self.idx.tag_messages.get(&tag).unwrap_or(&EMPTY_SET)
    }

    /// Persons who liked a message, with the like date.
    pub fn likes_of(&self, message: Id) -> &BTreeMap<Id, DateTime> {
        self.idx.message_likes.get(&message).unwrap_or(&EMPTY_DATED)
    }

    /// Messages liked by a person.
    pub fn liked_by(&self, person: Id) -> &BTreeSet<Id> {
        self.idx.person_likes.get(&person).unwrap_or(&EMPTY_SET)
    }

    pub fn members_of(&self, forum: Id) -> &BTreeMap<Id, DateTime> {
        self.idx.forum_members.get(&forum).unwrap_or(&EMPTY_DATED)
    }

    pub fn forums_of_member(&self, person: Id) -> &BTreeSet<Id> {
        self.idx.person_forums.get(&person).unwrap_or(&EMPTY_SET)
    }

    pub fn moderated_by(&self, person: Id) -> &BTreeSet<Id> {
        self.idx.moderated.get(&person).unwrap_or(&EMPTY_SET)
    }

    pub fn interests_of(&self, person: Id) -> &BTreeSet<Id> {
        self.idx.person_interests.get(&person).unwrap_or(&EMPTY_SET)
    }

    pub fn persons_interested_in(&self, tag: Id) -> &BTreeSet<Id> {
        self.idx.tag_interested.get(&tag).unwrap_or(&EMPTY_SET)
    }

    pub fn study_of(&self, person: Id) -> &BTreeMap<Id, i32> {
        self.idx.person_study.get(&person).unwrap_or(&EMPTY_YEARS)
    }

    pub fn work_of(&self, person: Id) -> &BTreeMap<Id, i32> {
        self.idx.person_work.get(&person).unwrap_or(&EMPTY_YEARS)
    }

    pub fn persons_in_city(&self, city: Id) -> &BTreeSet<Id> {
        self.idx.city_persons.get(&city).unwrap_or(&EMPTY_SET)
    }

    /// Places directly part of `place` (cities of a country, countries of a continent).
    pub fn place_children(&self, place: Id) -> &BTreeSet<Id> {
        self.idx.place_children.get(&place).unwrap_or(&EMPTY_SET)
    }

    pub fn tag_class_children(&self, class: Id) -> &BTreeSet<Id> {
        self.idx.tag_class_children.get(&class).unwrap_or(&EMPTY_SET)
    }

    /// Tags whose direct type is `class`.
    pub fn tags_of_class(&self, class: Id) -> &BTreeSet<Id> {
        self.idx.tag_class_tags.get(&class).unwrap_or(&EMPTY_SET)
    }

    pub fn country_by_name(&self, name: &str) -> Option<Id> {
        self.idx.country_by_name.get(name).copied()
    }

    pub fn tag_by_name(&self, name: &str) -> Option<Id> {
        self.idx.tag_by_name.get(name).copied()
    }

    pub fn tag_class_by_name(&self, name: &str) -> Option<Id> {
        self.idx.tag_class_by_name.get(name).copied()
    }

    /// The country a city belongs to.
    pub fn country_of_city(&self, city: Id) -> Option<Id> {
        self.places.get(&city).and_then(|c| c.part_of)
    }

    pub fn country_of_person(&self, person: Id) -> Option<Id> {
        self.persons.get(&person).and_then(|p| self.country_of_city(p.city))
    }

    /// Persons living in any city of `country`.
    pub fn persons_in_country(&self, country: Id) -> impl Iterator<Item = Id> + '_ {
        self.place_children(country)
            .iter()
            .flat_map(move |c| self.persons_in_city(*c).iter().copied())
    }

    /// `class` and all of its transitive subclasses.
    pub fn tag_class_descendants(&self, class: Id) -> BTreeSet<Id> {
        let mut out = BTreeSet::new();
        let mut stack = vec![class];
        while let Some(c) = stack.pop() {
            if out.insert(c) {
                stack.extend(self.tag_class_children(c).iter().copied());
            }
        }
        out
    }

    // ---- inserts ----------------------------------------------------------

    pub fn insert_place(&mut self, p: Place) -> Result<(), ModelError> {
        dup!(self.places, p.id, EntityKind::Place);
        if let Some(parent) = p.part_of {
            set_add(&mut self.idx.place_children, parent, p.id);
        }
        if p.kind == PlaceKind::Country {
            self.idx.country_by_name.insert(p.name.clone(), p.id);
        }
        self.places.insert(p.id, p);
        Ok(())
    }

    pub fn insert_organisation(&mut self, o: Organisation) -> Result<(), ModelError> {
        dup!(self.organisations, o.id, EntityKind::Organisation);
        self.organisations.insert(o.id, o);
        Ok(())
    }

    pub fn insert_tag_class(&mut self, c: TagClass) -> Result<(), ModelError> {
        dup!(self.tag_classes, c.id, EntityKind::TagClass);
        if let Some(parent) = c.parent {
            set_add(&mut self.idx.tag_class_children, parent, c.id);
        }
        self.idx.tag_class_by_name.insert(c.name.clone(), c.id);
        self.tag_classes.insert(c.id, c);
        Ok(())
    }

    pub fn insert_tag(&mut self, t: Tag) -> Result<(), ModelError> {
        dup!(self.tags, t.id, EntityKind::Tag);
        set_add(&mut self.idx.tag_class_tags, t.tag_class, t.id);
        self.idx.tag_by_name.insert(t.name.clone(), t.id);
        self.tags.insert(t.id, t);
        Ok(())
    }

    pub fn insert_person(&mut self, p: Person) -> Result<(), ModelError> {
        dup!(self.persons, p.id, EntityKind::Person);
        set_add(&mut self.idx.city_persons, p.city, p.id);
        self.persons.insert(p.id, p);
        Ok(())
    }

    pub fn insert_forum(&mut self, f: Forum) -> Result<(), ModelError> {
        dup!(self.forums, f.id, EntityKind::Forum);
        set_add(&mut self.idx.moderated, f.moderator, f.id);
        self.forums.insert(f.id, f);
        Ok(())
    }

    pub fn insert_message(&mut self, m: Message) -> Result<(), ModelError> {
        dup!(self.messages, m.id, EntityKind::Message);
        set_add(&mut self.idx.person_messages, m.creator, m.id);
        match m.kind {
            MessageKind::Post { forum, .. } => set_add(&mut self.idx.forum_posts, forum, m.id),
            MessageKind::Comment { reply_of } => set_add(&mut self.idx.replies, reply_of, m.id),
        }
        for t in &m.tags {
            set_add(&mut self.idx.tag_messages, *t, m.id);
        }
        self.messages.insert(m.id, m);
        Ok(())
    }

    pub fn insert_knows(&mut self, a: Id, b: Id, date: DateTime) -> Result<(), ModelError> {
        let key = knows_key(a, b);
        if self.edges.knows.contains_key(&key) {
            return Err(ModelError::DuplicateEdge { relation: "knows", a, b });
        }
        self.edges.knows.insert(key, date);
        map_add(&mut self.idx.friends, a, b, date);
        map_add(&mut self.idx.friends, b, a, date);
        Ok(())
    }

    pub fn insert_like(&mut self, person: Id, message: Id, date: DateTime) -> Result<(), ModelError> {
        if self.edges.likes.contains_key(&(person, message)) {
            return Err(ModelError::DuplicateEdge { relation: "likes", a: person, b: message });
        }
        self.edges.likes.insert((person, message), date);
        map_add(&mut self.idx.message_likes, message, person, date);
        set_add(&mut self.idx.person_likes, person, message);
        Ok(())
    }

    pub fn insert_membership(&mut self, forum: Id, person: Id, join: DateTime) -> Result<(), ModelError> {
        if self.edges.members.contains_key(&(forum, person)) {
            return Err(ModelError::DuplicateEdge { relation: "hasMember", a: forum, b: person });
        }
        self.edges.members.insert((forum, person), join);
        map_add(&mut self.idx.forum_members, forum, person, join);
        set_add(&mut self.idx.person_forums, person, forum);
        Ok(())
    }

    pub fn insert_interest(&mut self, person: Id, tag: Id) -> Result<(), ModelError> {
        if !self.edges.interests.insert((person, tag)) {
            return Err(ModelError::DuplicateEdge { relation: "hasInterest", a: person, b: tag });
        }
        set_add(&mut self.idx.person_interests, person, tag);
        set_add(&mut self.idx.tag_interested, tag, person);
        Ok(())
    }

    pub fn insert_study_at(&mut self, person: Id, org: Id, class_year: i32) -> Result<(), ModelError> {
        if self.edges.study_at.contains_key(&(person, org)) {
            return Err(ModelError::DuplicateEdge { relation: "studyAt", a: person, b: org });
        }
        self.edges.study_at.insert((person, org), class_year);
        map_add(&mut self.idx.person_study, person, org, class_year);
        Ok(())
    }

    pub fn insert_work_at(&mut self, person: Id, org: Id, work_from: i32) -> Result<(), ModelError> {
        if self.edges.work_at.contains_key(&(person, org)) {
            return Err(ModelError::DuplicateEdge { relation: "workAt", a: person, b: org });
        }
        self.edges.work_at.insert((person, org), work_from);
        map_add(&mut self.idx.person_work, person, org, work_from);
        Ok(())
    }

    // ---- removals (no cascading) ------------------------------------------

    pub fn remove_person(&mut self, id: Id) -> Result<Person, ModelError> {
        let p = self
            .persons
            .remove(&id)
            .ok_or(ModelError::UnknownId { kind: EntityKind::Person, id })?;
        set_del(&mut self.idx.city_persons, &p.city, &id);
        Ok(p)
    }

    pub fn remove_forum(&mut self, id: Id) -> Result<Forum, ModelError> {
        let f = self
            .forums
            .remove(&id)
            .ok_or(ModelError::UnknownId { kind: EntityKind::Forum, id })?;
        set_del(&mut self.idx.moderated, &f.moderator, &id);
        Ok(f)
    }

    pub fn remove_message(&mut self, id: Id) -> Result<Message, ModelError> {
        let m = self
            .messages
            .remove(&id)
            .ok_or(ModelError::UnknownId { kind: EntityKind::Message, id })?;
        set_del(&mut self.idx.person_messages, &m.creator, &id);
        match m.kind {
            MessageKind::Post { forum, .. } => set_del(&mut self.idx.forum_posts, &forum, &id),
            MessageKind::Comment { reply_of } => set_del(&mut self.idx.replies, &reply_of, &id),
        }
        for t in &m.tags {
            set_del(&mut self.idx.tag_messages, t, &id);
        }
        Ok(m)
    }

    pub fn remove_knows(&mut self, a: Id, b: Id) -> Result<DateTime, ModelError> {
        let d = self
            .edges
            .knows
            .remove(&knows_key(a, b))
            .ok_or(ModelError::UnknownEdge { relation: "knows", a, b })?;
        map_del(&mut self.idx.friends, &a, &b);
        map_del(&mut self.idx.friends, &b, &a);
        Ok(d)
    }

    pub fn remove_like(&mut self, person: Id, message: Id) -> Result<DateTime, ModelError> {
        let d = self
            .edges
            .likes
            .remove(&(person, message))
            .ok_or(ModelError::UnknownEdge { relation: "likes", a: person, b: message })?;
        map_del(&mut self.idx.message_likes, &message, &person);
        set_del(&mut self.idx.person_likes, &person, &message);
        Ok(d)
    }

    pub fn remove_membership(&mut self, forum: Id, person: Id) -> Result<DateTime, ModelError> {
        let d = self
            .edges
            .members
            .remove(&(forum, person))
            .ok_or(ModelError::UnknownEdge { relation: "hasMember", a: forum, b: person })?;
        map_del(&mut self.idx.forum_members, &forum, &person);
        set_del(&mut self.idx.person_forums, &person, &forum);
        Ok(d)
    }

    pub fn remove_interest(&mut self, person: Id, tag: Id) -> Result<(), ModelError> {
        if !self.edges.interests.remove(&(person, tag)) {
            return Err(ModelError::UnknownEdge { relation: "hasInterest", a: person, b: tag });
        }
        set_del(&mut self.idx.person_interests, &person, &tag);
        set_del(&mut self.idx.tag_interested, &tag, &person);
        Ok(())
    }

    pub fn remove_study_at(&mut self, person: Id, org: Id) -> Result<i32, ModelError> {
        let y = self
            .edges
            .study_at
            .remove(&(person, org))
            .ok_or(ModelError::UnknownEdge { relation: "studyAt", a: person, b: org })?;
        map_del(&mut self.idx.person_study, &person, &org);
        Ok(y)
    }

    pub fn remove_work_at(&mut self, person: Id, org: Id) -> Result<i32, ModelError> {
        let y = self
            .edges
            .work_at
            .remove(&(person, org))
            .ok_or(ModelError::UnknownEdge { relation: "workAt", a: person, b: org })?;
        map_del(&mut self.idx.person_work, &person, &org);
        Ok(y)
    }

    pub fn set_forum_moderator(&mut self, forum: Id, moderator: Id) -> Result<(), ModelError> {
        let f = self
            .forums
            .get_mut(&forum)
            .ok_or(ModelError::UnknownId { kind: EntityKind::Forum, id: forum })?;
        let old = f.moderator;
        f.moderator = moderator;
        set_del(&mut self.idx.moderated, &old, &forum);
        set_add(&mut self.idx.moderated, moderator, forum);
        Ok(())
    }

    // ---- index maintenance ------------------------------------------------

    /// Rebuilds a snapshot from its base collections. Used to check that
    /// incrementally maintained indexes agree with a fresh build.
    pub fn rebuilt(&self) -> GraphSnapshot {
        let mut g = GraphSnapshot::new();
        let bad = "base collections were consistent";
        for p in self.places.values() {
            g.insert_place(p.clone()).expect(bad);
        }
        for o in self.organisations.values() {
            g.insert_organisation(o.clone()).expect(bad);
        }
        for c in self.tag_classes.values() {
            g.insert_tag_class(c.clone()).expect(bad);
        }
        for t in self.tags.values() {
            g.insert_tag(t.clone()).expect(bad);
        }
        for p in self.persons.values() {
            g.insert_person(p.clone()).expect(bad);
        }
        for f in self.forums.values() {
            g.insert_forum(f.clone()).expect(bad);
        }
        for m in self.messages.values() {
            g.insert_message(m.clone()).expect(bad);
        }
        let e = &self.edges;
        for (&(a, b), &d) in &e.knows {
            g.insert_knows(a, b, d).expect(bad);
        }
        for (&(p, m), &d) in &e.likes {
            g.insert_like(p, m, d).expect(bad);
        }
        for (&(f, p), &d) in &e.members {
            g.insert_membership(f, p, d).expect(bad);
        }
        for &(p, t) in &e.interests {
            g.insert_interest(p, t).expect(bad);
        }
        for (&(p, o), &y) in &e.study_at {
            g.insert_study_at(p, o, y).expect(bad);
        }
        for (&(p, o), &y) in &e.work_at {
            g.insert_work_at(p, o, y).expect(bad);
        }
        g
    }

    /// True when the maintained indexes equal those of a fresh rebuild.
    pub fn indexes_consistent(&self) -> bool {
        self.idx == self.rebuilt().idx
    }
}

/// The root Post of a message's thread and the Forum containing it.
pub fn root_post(g: &GraphSnapshot, message: Id) -> Result<(Id, Id), ModelError> {
    let mut cur = message;
    let mut steps = 0usize;
    loop {
        let m = g
            .message(cur)
            .ok_or(ModelError::UnknownId { kind: EntityKind::Message, id: cur })?;
        match m.kind {
            MessageKind::Post { forum, .. } => return Ok((cur, forum)),
            MessageKind::Comment { reply_of } => {
                steps += 1;
                if steps > g.messages().len() {
                    return Err(ModelError::BrokenReplyChain(message));
                }
                cur = reply_of;
            }
        }
    }
}
