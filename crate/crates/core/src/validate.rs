//! Structural checks over a snapshot.

use std::collections::BTreeSet;
use std::fmt;

use crate::model::*;
use crate::snapshot::GraphSnapshot;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SchemaViolation {
    /// An edge or foreign key names an entity that does not exist or has the wrong kind.
    DanglingReference { from: String, to: String },
    /// A Post has both content and an image file, or neither.
    ContentXorImage { post: Id },
    LengthMismatch { message: Id, length: u32, actual: u32 },
    /// A non-moderator posted in a Forum they are not a member of.
    NonMemberPoster { post: Id, forum: Id, person: Id },
    /// A reply chain loops or does not end at a Post.
    BrokenReplyChain { message: Id },
    SelfKnows { person: Id },
    /// TagClass or Place hierarchy has the wrong shape.
    BadHierarchy { what: String },
    EmptyMultiValue { person: Id, attribute: &'static str },
    /// A string attribute contains a character reserved by the CSV encoding.
    ReservedCharacter { entity: String, attribute: &'static str },
    IndexMismatch,
}

impl fmt::Display for SchemaViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemaViolation::DanglingReference { from, to } => write!(f, "dangling reference {from} -> {to}"),
            SchemaViolation::ContentXorImage { post } => write!(f, "post {post} must have exactly one of content and imageFile"),
            SchemaViolation::LengthMismatch { message, length, actual } => {
                write!(f, "message {message} length {length} but content has {actual} characters")
            }
            SchemaViolation::NonMemberPoster { post, forum, person } => {
                write!(f, "post {post} in forum {forum} by non-member {person}")
            }
            SchemaViolation::BrokenReplyChain { message } => write!(f, "reply chain of {message} does not reach a post"),
            SchemaViolation::SelfKnows { person } => write!(f, "person {person} knows itself"),
            SchemaViolation::BadHierarchy { what } => write!(f, "bad hierarchy: {what}"),
            SchemaViolation::EmptyMultiValue { person, attribute } => write!(f, "person {person} has no {attribute}"),
            SchemaViolation::ReservedCharacter { entity, attribute } => {
                write!(f, "{entity}.{attribute} contains a reserved character")
            }
            SchemaViolation::IndexMismatch => write!(f, "indexes disagree with base collections"),
        }
    }
}

struct Checker<'a> {
    g: &'a GraphSnapshot,
    out: Vec<SchemaViolation>,
}

impl Checker<'_> {
    fn dangling(&mut self, from: String, to: String) {
        self.out.push(SchemaViolation::DanglingReference { from, to });
    }

    fn place_of_kind(&mut self, from: impl Fn() -> String, id: Id, kind: PlaceKind) {
        match self.g.place(id) {
            Some(p) if p.kind == kind => {}
            _ => self.dangling(from(), format!("{}({id})", kind.as_str())),
        }
    }

    fn person(&mut self, from: impl Fn() -> String, id: Id) {
        if self.g.person(id).is_none() {
            self.dangling(from(), format!("Person({id})"));
        }
    }

    fn tag(&mut self, from: impl Fn() -> String, id: Id) {
        if self.g.tag(id).is_none() {
            self.dangling(from(), format!("Tag({id})"));
        }
    }

    fn org(&mut self, from: impl Fn() -> String, id: Id, kind: OrganisationKind) {
        match self.g.organisation(id) {
            Some(o) if o.kind == kind => {}
            _ => self.dangling(from(), format!("{}({id})", kind.as_str())),
        }
    }

    fn reserved(&mut self, entity: impl Fn() -> String, attribute: &'static str, value: &str) {
        if value.contains(['|', '\n', '\r']) {
            self.out.push(SchemaViolation::ReservedCharacter { entity: entity(), attribute });
        }
    }

    fn reserved_multi(&mut self, entity: impl Fn() -> String, attribute: &'static str, value: &str) {
        if value.contains(['|', ';', '\n', '\r']) {
            self.out.push(SchemaViolation::ReservedCharacter { entity: entity(), attribute });
        }
    }

    fn static_part(&mut self) {
        let g = self.g;
        for p in g.places().values() {
            let expected_parent = match p.kind {
                PlaceKind::City => Some(PlaceKind::Country),
                PlaceKind::Country => Some(PlaceKind::Continent),
                PlaceKind::Continent => None,
            };
            match (expected_parent, p.part_of) {
                (None, None) => {}
                (Some(k), Some(parent)) => self.place_of_kind(|| format!("Place({})", p.id), parent, k),
                _ => self.out.push(SchemaViolation::BadHierarchy { what: format!("place {} isPartOf", p.id) }),
            }
            self.reserved(|| format!("Place({})", p.id), "name", &p.name);
        }
        for o in g.organisations().values() {
            let kind = match o.kind {
                OrganisationKind::University => PlaceKind::City,
                OrganisationKind::Company => PlaceKind::Country,
            };
            self.place_of_kind(|| format!("Organisation({})", o.id), o.place, kind);
            self.reserved(|| format!("Organisation({})", o.id), "name", &o.name);
        }
        for c in g.tag_classes().values() {
            if let Some(parent) = c.parent {
                if g.tag_class(parent).is_none() {
                    self.dangling(format!("TagClass({})", c.id), format!("TagClass({parent})"));
                }
            }
            // Walk to the root; a chain longer than the class count is a cycle.
            let mut cur = c.parent;
            let mut steps = 0;
            while let Some(x) = cur {
                steps += 1;
                if steps > g.tag_classes().len() {
                    self.out.push(SchemaViolation::BadHierarchy { what: format!("tag class {} cycle", c.id) });
                    break;
                }
                cur = g.tag_class(x).and_then(|t| t.parent);
            }
            self.reserved(|| format!("TagClass({})", c.id), "name", &c.name);
        }
        for t in g.tags().values() {
            if g.tag_class(t.tag_class).is_none() {
                self.dangling(format!("Tag({})", t.id), format!("TagClass({})", t.tag_class));
            }
            self.reserved(|| format!("Tag({})", t.id), "name", &t.name);
        }
    }

    fn persons(&mut self) {
        let g = self.g;
        for p in g.persons().values() {
            let from = || format!("Person({})", p.id);
            self.place_of_kind(from, p.city, PlaceKind::City);
            if p.emails.is_empty() {
                self.out.push(SchemaViolation::EmptyMultiValue { person: p.id, attribute: "email" });
            }
            if p.languages.is_empty() {
                self.out.push(SchemaViolation::EmptyMultiValue { person: p.id, attribute: "speaks" });
            }
            for e in &p.emails {
                self.reserved_multi(from, "email", e);
            }
            for l in &p.languages {
                self.reserved_multi(from, "speaks", l);
            }
            for (attr, v) in [
                ("firstName", &p.first_name),
                ("lastName", &p.last_name),
                ("gender", &p.gender),
                ("locationIP", &p.location_ip),
                ("browserUsed", &p.browser_used),
            ] {
                self.reserved(from, attr, v);
            }
        }
    }

    fn forums(&mut self) {
        let g = self.g;
        for f in g.forums().values() {
            self.person(|| format!("Forum({})", f.id), f.moderator);
            for t in &f.tags {
                self.tag(|| format!("Forum({})", f.id), *t);
            }
            self.reserved(|| format!("Forum({})", f.id), "title", &f.title);
        }
    }

    fn messages(&mut self) {
        let g = self.g;
        for m in g.messages().values() {
            let from = || format!("Message({})", m.id);
            self.person(from, m.creator);
            self.place_of_kind(from, m.country, PlaceKind::Country);
            for t in &m.tags {
                self.tag(from, *t);
            }
            let actual = text_length(&m.content);
            if actual != m.length {
                self.out.push(SchemaViolation::LengthMismatch { message: m.id, length: m.length, actual });
            }
            self.reserved(from, "content", &m.content);
            self.reserved(from, "locationIP", &m.location_ip);
            self.reserved(from, "browserUsed", &m.browser_used);
            match &m.kind {
                MessageKind::Post { forum, image_file, language } => {
                    if m.content.is_empty() == image_file.is_empty() {
                        self.out.push(SchemaViolation::ContentXorImage { post: m.id });
                    }
                    self.reserved(from, "imageFile", image_file);
                    self.reserved(from, "language", language);
                    match g.forum(*forum) {
                        None => self.dangling(from(), format!("Forum({forum})")),
                        Some(f) => {
                            if f.moderator != m.creator && !g.edges().members.contains_key(&(*forum, m.creator)) {
                                self.out.push(SchemaViolation::NonMemberPoster {
                                    post: m.id,
                                    forum: *forum,
                                    person: m.creator,
                                });
                            }
                        }
                    }
                }
                MessageKind::Comment { reply_of } => {
                    if g.message(*reply_of).is_none() {
                        self.dangling(from(), format!("Message({reply_of})"));
                    } else if crate::snapshot::root_post(g, m.id).is_err() {
                        self.out.push(SchemaViolation::BrokenReplyChain { message: m.id });
                    }
                }
            }
        }
    }

    fn edges(&mut self) {
        let g = self.g;
        let e = g.edges();
        for &(a, b) in e.knows.keys() {
            if a == b {
                self.out.push(SchemaViolation::SelfKnows { person: a });
            }
            self.person(|| format!("knows({a},{b})"), a);
            self.person(|| format!("knows({a},{b})"), b);
        }
        for &(p, m) in e.likes.keys() {
            self.person(|| format!("likes({p},{m})"), p);
            if g.message(m).is_none() {
                self.dangling(format!("likes({p},{m})"), format!("Message({m})"));
            }
        }
        for &(f, p) in e.members.keys() {
            if g.forum(f).is_none() {
                self.dangling(format!("hasMember({f},{p})"), format!("Forum({f})"));
            }
            self.person(|| format!("hasMember({f},{p})"), p);
        }
        for &(p, t) in &e.interests {
            self.person(|| format!("hasInterest({p},{t})"), p);
            self.tag(|| format!("hasInterest({p},{t})"), t);
        }
        for &(p, o) in e.study_at.keys() {
            self.person(|| format!("studyAt({p},{o})"), p);
            self.org(|| format!("studyAt({p},{o})"), o, OrganisationKind::University);
        }
        for &(p, o) in e.work_at.keys() {
            self.person(|| format!("workAt({p},{o})"), p);
            self.org(|| format!("workAt({p},{o})"), o, OrganisationKind::Company);
        }
        // Symmetry of the adjacency index.
        for p in g.persons().keys() {
            for f in g.friends(*p).keys() {
                if !g.friends(*f).contains_key(p) {
                    self.out.push(SchemaViolation::IndexMismatch);
                    return;
                }
            }
        }
    }
}

/// Returns every violation found; an empty vector means the snapshot is valid.
pub fn validate_schema(g: &GraphSnapshot) -> Vec<SchemaViolation> {
    let mut c = Checker { g, out: Vec::new() };
    c.static_part();
    c.persons();
    c.forums();
    c.messages();
    c.edges();
    if !g.indexes_consistent() {
        c.out.push(SchemaViolation::IndexMismatch);
    }
    let mut seen = BTreeSet::new();
    c.out.retain(|v| seen.insert(format!("{v:?}")));
    c.out
}
