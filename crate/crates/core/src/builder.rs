//! Terse construction of small graphs, mainly for tests and examples.

use std::collections::BTreeSet;

use crate::model::*;
use crate::snapshot::GraphSnapshot;
use crate::time::{Date, DateTime};

/// Builds a graph with a fixed static skeleton:
///
/// * continent `Europe` (place 0) with countries `Germany` (1) and `France` (2)
/// * cities `Berlin` (3, Germany) and `Paris` (4, France)
/// * tag classes `Thing` (0) > `Person` (1) > `Artist` (2), and `Place` (3) under `Thing`
/// * tags `Mozart` (0, Artist), `Kant` (1, Person), `Rhine` (2, Place)
/// * university `TU Berlin` (0, Berlin) and company `Acme` (1, France)
pub struct GraphBuilder {
    g: GraphSnapshot,
    next_message: Id,
    next_forum: Id,
}

pub const EUROPE: Id = 0;
pub const GERMANY: Id = 1;
pub const FRANCE: Id = 2;
pub const BERLIN: Id = 3;
pub const PARIS: Id = 4;
pub const CLASS_THING: Id = 0;
pub const CLASS_PERSON: Id = 1;
pub const CLASS_ARTIST: Id = 2;
pub const CLASS_PLACE: Id = 3;
pub const TAG_MOZART: Id = 0;
pub const TAG_KANT: Id = 1;
pub const TAG_RHINE: Id = 2;
pub const UNI_TU_BERLIN: Id = 0;
pub const COMPANY_ACME: Id = 1;

/// `2010-01-01T00:00:00.000` plus `minutes`.
pub fn at(minutes: i64) -> DateTime {
    Date::ymd(2010, 1, 1).to_datetime().plus_millis(minutes * 60_000)
}

impl Default for GraphBuilder {
    fn default() -> Self {
        GraphBuilder::new()
    }
}

impl GraphBuilder {
    pub fn new() -> GraphBuilder {
        let mut g = GraphSnapshot::new();
        let place = |id, name: &str, kind, part_of| Place {
            id,
            name: name.into(),
            url: format!("http://dbpedia.org/resource/{name}"),
            kind,
            part_of,
        };
        let ok = "fresh skeleton";
        g.insert_place(place(EUROPE, "Europe", PlaceKind::Continent, None)).expect(ok);
        g.insert_place(place(GERMANY, "Germany", PlaceKind::Country, Some(EUROPE))).expect(ok);
        g.insert_place(place(FRANCE, "France", PlaceKind::Country, Some(EUROPE))).expect(ok);
        g.insert_place(place(BERLIN, "Berlin", PlaceKind::City, Some(GERMANY))).expect(ok);
        g.insert_place(place(PARIS, "Paris", PlaceKind::City, Some(FRANCE))).expect(ok);
        let class = |id, name: &str, parent| TagClass {
            id,
            name: name.into(),
            url: format!("http://dbpedia.org/ontology/{name}"),
            parent,
        };
        g.insert_tag_class(class(CLASS_THING, "Thing", None)).expect(ok);
        g.insert_tag_class(class(CLASS_PERSON, "Person", Some(CLASS_THING))).expect(ok);
        g.insert_tag_class(class(CLASS_ARTIST, "Artist", Some(CLASS_PERSON))).expect(ok);
        g.insert_tag_class(class(CLASS_PLACE, "Place", Some(CLASS_THING))).expect(ok);
        let tag = |id, name: &str, tag_class| Tag {
            id,
            name: name.into(),
            url: format!("http://dbpedia.org/resource/{name}"),
            tag_class,
        };
        g.insert_tag(tag(TAG_MOZART, "Mozart", CLASS_ARTIST)).expect(ok);
        g.insert_tag(tag(TAG_KANT, "Kant", CLASS_PERSON)).expect(ok);
        g.insert_tag(tag(TAG_RHINE, "Rhine", CLASS_PLACE)).expect(ok);
        g.insert_organisation(Organisation {
            id: UNI_TU_BERLIN,
            kind: OrganisationKind::University,
            name: "TU Berlin".into(),
            url: "http://dbpedia.org/resource/TU_Berlin".into(),
            place: BERLIN,
        })
        .expect(ok);
        g.insert_organisation(Organisation {
            id: COMPANY_ACME,
            kind: OrganisationKind::Company,
            name: "Acme".into(),
            url: "http://dbpedia.org/resource/Acme".into(),
            place: FRANCE,
        })
        .expect(ok);
        GraphBuilder { g, next_message: 0, next_forum: 0 }
    }

    /// A person created at `at(0)` living in `city`.
    pub fn person(&mut self, id: Id, first_name: &str, city: Id) -> &mut Self {
        self.person_with(id, first_name, city, Date::ymd(1990, 6, 15), at(0))
    }

    pub fn person_with(&mut self, id: Id, first_name: &str, city: Id, birthday: Date, created: DateTime) -> &mut Self {
        self.g
            .insert_person(Person {
                id,
                first_name: first_name.into(),
                last_name: format!("Last{id}"),
                gender: if id % 2 == 0 { "female".into() } else { "male".into() },
                birthday,
                creation_date: created,
                location_ip: format!("10.0.0.{}", id % 250),
                browser_used: "Firefox".into(),
                city,
                emails: BTreeSet::from([format!("p{id}@example.org")]),
                languages: BTreeSet::from(["en".to_string()]),
            })
            .expect("unique person id");
        self
    }

    pub fn knows(&mut self, a: Id, b: Id) -> &mut Self {
        self.g.insert_knows(a, b, at(1)).expect("new knows edge");
        self
    }

    pub fn knows_at(&mut self, a: Id, b: Id, date: DateTime) -> &mut Self {
        self.g.insert_knows(a, b, date).expect("new knows edge");
        self
    }

    /// A group forum moderated by `moderator`; returns its id.
    pub fn forum(&mut self, moderator: Id, created: DateTime) -> Id {
        let id = self.next_forum;
        self.next_forum += 1;
        self.g
            .insert_forum(Forum {
                id,
                title: format!("Group for forum {id}"),
                creation_date: created,
                moderator,
                tags: BTreeSet::new(),
            })
            .expect("unique forum id");
        id
    }

    pub fn member(&mut self, forum: Id, person: Id, joined: DateTime) -> &mut Self {
        self.g.insert_membership(forum, person, joined).expect("new membership");
        self
    }

    /// A text post; the creator must be the moderator or a member.
    pub fn post(&mut self, creator: Id, forum: Id, created: DateTime, content: &str, tags: &[Id]) -> Id {
        let id = self.next_message;
        self.next_message += 1;
        let country = self.country_of(creator);
        self.g
            .insert_message(Message {
                id,
                creation_date: created,
                location_ip: "10.1.1.1".into(),
                browser_used: "Chrome".into(),
                content: content.into(),
                length: text_length(content),
                creator,
                country,
                tags: tags.iter().copied().collect(),
                kind: MessageKind::Post { forum, image_file: String::new(), language: "en".into() },
            })
            .expect("unique message id");
        id
    }

    pub fn comment(&mut self, creator: Id, reply_of: Id, created: DateTime, content: &str, tags: &[Id]) -> Id {
        let id = self.next_message;
        self.next_message += 1;
        let country = self.country_of(creator);
        self.g
            .insert_message(Message {
                id,
                creation_date: created,
                location_ip: "10.1.1.2".into(),
                browser_used: "Chrome".into(),
                content: content.into(),
                length: text_length(content),
                creator,
                country,
                tags: tags.iter().copied().collect(),
                kind: MessageKind::Comment { reply_of },
            })
            .expect("unique message id");
        id
    }

    pub fn like(&mut self, person: Id, message: Id, date: DateTime) -> &mut Self {
        self.g.insert_like(person, message, date).expect("new like");
        self
    }

    pub fn interest(&mut self, person: Id, tag: Id) -> &mut Self {
        self.g.insert_interest(person, tag).expect("new interest");
        self
    }

    pub fn graph_mut(&mut self) -> &mut GraphSnapshot {
        &mut self.g
    }

    pub fn graph(&self) -> &GraphSnapshot {
        &self.g
    }

    pub fn build(self) -> GraphSnapshot {
        self.g
    }

    fn country_of(&self, person: Id) -> Id {
        self.g.country_of_person(person).unwrap_or(GERMANY)
    }
}
