//! The four CSV dataset layouts and their loader.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use snbkit_core::{
    validate_schema, Date, DateTime, Forum, GraphSnapshot, Id, Message, MessageKind, Organisation,
    OrganisationKind, Person, Place, PlaceKind, Tag, TagClass,
};

use crate::error::SerializeError;
use crate::table::{read_table_files, write_table, TableFile};

pub const ROOT_DIR: &str = "social_network";
pub const STATIC_DIR: &str = "static";
pub const DYNAMIC_DIR: &str = "dynamic";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CsvVariant {
    CsvBasic,
    CsvMergeForeign,
    CsvComposite,
    CsvCompositeMergeForeign,
}

impl CsvVariant {
    pub const ALL: [CsvVariant; 4] =
        [CsvVariant::CsvBasic, CsvVariant::CsvMergeForeign, CsvVariant::CsvComposite, CsvVariant::CsvCompositeMergeForeign];

    /// One-to-one and one-to-many relations become foreign key columns.
    pub fn merge_foreign(self) -> bool {
        matches!(self, CsvVariant::CsvMergeForeign | CsvVariant::CsvCompositeMergeForeign)
    }

    /// Emails and languages are `;`-joined columns of the person file.
    pub fn composite(self) -> bool {
        matches!(self, CsvVariant::CsvComposite | CsvVariant::CsvCompositeMergeForeign)
    }

    pub fn name(self) -> &'static str {
        match self {
            CsvVariant::CsvBasic => "CsvBasic",
            CsvVariant::CsvMergeForeign => "CsvMergeForeign",
            CsvVariant::CsvComposite => "CsvComposite",
            CsvVariant::CsvCompositeMergeForeign => "CsvCompositeMergeForeign",
        }
    }

    /// Every table written for this variant.
    pub fn tables(self) -> Vec<Table> {
        Table::ALL.iter().copied().filter(|t| t.included_in(self)).collect()
    }
}

impl fmt::Display for CsvVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CsvVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<CsvVariant, String> {
        CsvVariant::ALL
            .into_iter()
            .find(|v| v.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown CSV variant {s:?}"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Table {
    Organisation,
    OrganisationIsLocatedIn,
    Place,
    PlaceIsPartOf,
    Tag,
    TagHasType,
    TagClass,
    TagClassIsSubclassOf,
    Comment,
    CommentHasCreator,
    CommentHasTag,
    CommentIsLocatedIn,
    CommentReplyOfComment,
    CommentReplyOfPost,
    Forum,
    ForumContainerOf,
    ForumHasMember,
    ForumHasModerator,
    ForumHasTag,
    Person,
    PersonEmail,
    PersonHasInterest,
    PersonIsLocatedIn,
    PersonKnows,
    PersonLikesComment,
    PersonLikesPost,
    PersonSpeaks,
    PersonStudyAt,
    PersonWorkAt,
    Post,
    PostHasCreator,
    PostHasTag,
    PostIsLocatedIn,
}

impl Table {
    pub const ALL: [Table; 33] = [
        Table::Organisation,
        Table::OrganisationIsLocatedIn,
        Table::Place,
        Table::PlaceIsPartOf,
        Table::Tag,
        Table::TagHasType,
        Table::TagClass,
        Table::TagClassIsSubclassOf,
        Table::Comment,
        Table::CommentHasCreator,
        Table::CommentHasTag,
        Table::CommentIsLocatedIn,
        Table::CommentReplyOfComment,
        Table::CommentReplyOfPost,
        Table::Forum,
        Table::ForumContainerOf,
        Table::ForumHasMember,
        Table::ForumHasModerator,
        Table::ForumHasTag,
        Table::Person,
        Table::PersonEmail,
        Table::PersonHasInterest,
        Table::PersonIsLocatedIn,
        Table::PersonKnows,
        Table::PersonLikesComment,
        Table::PersonLikesPost,
        Table::PersonSpeaks,
        Table::PersonStudyAt,
        Table::PersonWorkAt,
        Table::Post,
        Table::PostHasCreator,
        Table::PostHasTag,
        Table::PostIsLocatedIn,
    ];

    pub fn file_stem(self) -> &'static str {
        match self {
            Table::Organisation => "organisation",
            Table::OrganisationIsLocatedIn => "organisation_isLocatedIn_place",
            Table::Place => "place",
            Table::PlaceIsPartOf => "place_isPartOf_place",
            Table::Tag => "tag",
            Table::TagHasType => "tag_hasType_tagclass",
            Table::TagClass => "tagclass",
            Table::TagClassIsSubclassOf => "tagclass_isSubclassOf_tagclass",
            Table::Comment => "comment",
            Table::CommentHasCreator => "comment_hasCreator_person",
            Table::CommentHasTag => "comment_hasTag_tag",
            Table::CommentIsLocatedIn => "comment_isLocatedIn_place",
            Table::CommentReplyOfComment => "comment_replyOf_comment",
            Table::CommentReplyOfPost => "comment_replyOf_post",
            Table::Forum => "forum",
            Table::ForumContainerOf => "forum_containerOf_post",
            Table::ForumHasMember => "forum_hasMember_person",
            Table::ForumHasModerator => "forum_hasModerator_person",
            Table::ForumHasTag => "forum_hasTag_tag",
            Table::Person => "person",
            Table::PersonEmail => "person_email_emailaddress",
            Table::PersonHasInterest => "person_hasInterest_tag",
            Table::PersonIsLocatedIn => "person_isLocatedIn_place",
            Table::PersonKnows => "person_knows_person",
            Table::PersonLikesComment => "person_likes_comment",
            Table::PersonLikesPost => "person_likes_post",
            Table::PersonSpeaks => "person_speaks_language",
            Table::PersonStudyAt => "person_studyAt_organisation",
            Table::PersonWorkAt => "person_workAt_organisation",
            Table::Post => "post",
            Table::PostHasCreator => "post_hasCreator_person",
            Table::PostHasTag => "post_hasTag_tag",
            Table::PostIsLocatedIn => "post_isLocatedIn_place",
        }
    }

    pub fn is_static(self) -> bool {
        self <= Table::TagClassIsSubclassOf
    }

    fn is_foreign_key(self) -> bool {
        matches!(
            self,
            Table::OrganisationIsLocatedIn
                | Table::PlaceIsPartOf
                | Table::TagHasType
                | Table::TagClassIsSubclassOf
                | Table::CommentHasCreator
                | Table::CommentIsLocatedIn
                | Table::CommentReplyOfComment
                | Table::CommentReplyOfPost
                | Table::ForumContainerOf
                | Table::ForumHasModerator
                | Table::PersonIsLocatedIn
                | Table::PostHasCreator
                | Table::PostIsLocatedIn
        )
    }

    pub fn included_in(self, v: CsvVariant) -> bool {
        if v.merge_foreign() && self.is_foreign_key() {
            return false;
        }
        !(v.composite() && matches!(self, Table::PersonEmail | Table::PersonSpeaks))
    }

    pub fn columns(self, v: CsvVariant) -> Vec<&'static str> {
        let mf = v.merge_foreign();
        let mut cols: Vec<&'static str> = match self {
            Table::Organisation => vec!["id", "type", "name", "url"],
            Table::OrganisationIsLocatedIn => vec!["Organisation.id", "Place.id"],
            Table::Place => vec!["id", "name", "url", "type"],
            Table::PlaceIsPartOf => vec!["Place.id", "Place.id"],
            Table::Tag | Table::TagClass => vec!["id", "name", "url"],
            Table::TagHasType => vec!["Tag.id", "TagClass.id"],
            Table::TagClassIsSubclassOf => vec!["TagClass.id", "TagClass.id"],
            Table::Comment => vec!["id", "creationDate", "locationIP", "browserUsed", "content", "length"],
            Table::CommentHasCreator => vec!["Comment.id", "Person.id"],
            Table::CommentHasTag => vec!["Comment.id", "Tag.id"],
            Table::CommentIsLocatedIn => vec!["Comment.id", "Place.id"],
            Table::CommentReplyOfComment => vec!["Comment.id", "Comment.id"],
            Table::CommentReplyOfPost => vec!["Comment.id", "Post.id"],
            Table::Forum => vec!["id", "title", "creationDate"],
            Table::ForumContainerOf => vec!["Forum.id", "Post.id"],
            Table::ForumHasMember => vec!["Forum.id", "Person.id", "joinDate"],
            Table::ForumHasModerator => vec!["Forum.id", "Person.id"],
            Table::ForumHasTag => vec!["Forum.id", "Tag.id"],
            Table::Person => {
                vec!["id", "firstName", "lastName", "gender", "birthday", "creationDate", "locationIP", "browserUsed"]
            }
            Table::PersonEmail => vec!["Person.id", "email"],
            Table::PersonHasInterest => vec!["Person.id", "Tag.id"],
            Table::PersonIsLocatedIn => vec!["Person.id", "Place.id"],
            Table::PersonKnows => vec!["Person.id", "Person.id", "creationDate"],
            Table::PersonLikesComment => vec!["Person.id", "Comment.id", "creationDate"],
            Table::PersonLikesPost => vec!["Person.id", "Post.id", "creationDate"],
            Table::PersonSpeaks => vec!["Person.id", "language"],
            Table::PersonStudyAt => vec!["Person.id", "Organisation.id", "classYear"],
            Table::PersonWorkAt => vec!["Person.id", "Organisation.id", "workFrom"],
            Table::Post => {
                vec!["id", "imageFile", "creationDate", "locationIP", "browserUsed", "language", "content", "length"]
            }
            Table::PostHasCreator => vec!["Post.id", "Person.id"],
            Table::PostHasTag => vec!["Post.id", "Tag.id"],
            Table::PostIsLocatedIn => vec!["Post.id", "Place.id"],
        };
        match self {
            Table::Organisation if mf => cols.push("place"),
            Table::Place if mf => cols.push("isPartOf"),
            Table::Tag if mf => cols.push("hasType"),
            Table::TagClass if mf => cols.push("isSubclassOf"),
            Table::Comment if mf => cols.extend(["creator", "place", "replyOfPost", "replyOfComment"]),
            Table::Forum if mf => cols.push("moderator"),
            Table::Person => {
                if mf {
                    cols.push("place");
                }
                if v.composite() {
                    cols.extend(["language", "emails"]);
                }
            }
            Table::Post if mf => cols.extend(["creator", "Forum.id", "place"]),
            _ => {}
        }
        cols
    }

    fn rows(self, g: &GraphSnapshot, v: CsvVariant) -> Vec<Vec<String>> {
        let mf = v.merge_foreign();
        let posts = || g.messages().values().filter(|m| m.is_post());
        let comments = || g.messages().values().filter(|m| m.is_comment());
        let pair = |a: Id, b: Id| vec![a.to_string(), b.to_string()];
        let tagged = |msgs: Vec<&Message>| -> Vec<Vec<String>> {
            msgs.into_iter().flat_map(|m| m.tags.iter().map(move |&t| pair(m.id, t))).collect()
        };
        match self {
            Table::Organisation => g
                .organisations()
                .values()
                .map(|o| {
                    let mut r = vec![o.id.to_string(), o.kind.as_str().into(), o.name.clone(), o.url.clone()];
                    if mf {
                        r.push(o.place.to_string());
                    }
                    r
                })
                .collect(),
            Table::OrganisationIsLocatedIn => g.organisations().values().map(|o| pair(o.id, o.place)).collect(),
            Table::Place => g
                .places()
                .values()
                .map(|p| {
                    let mut r = vec![p.id.to_string(), p.name.clone(), p.url.clone(), p.kind.as_str().into()];
                    if mf {
                        r.push(opt(p.part_of));
                    }
                    r
                })
                .collect(),
            Table::PlaceIsPartOf => {
                g.places().values().filter_map(|p| p.part_of.map(|q| pair(p.id, q))).collect()
            }
            Table::Tag => g
                .tags()
                .values()
                .map(|t| {
                    let mut r = vec![t.id.to_string(), t.name.clone(), t.url.clone()];
                    if mf {
                        r.push(t.tag_class.to_string());
                    }
                    r
                })
                .collect(),
            Table::TagHasType => g.tags().values().map(|t| pair(t.id, t.tag_class)).collect(),
            Table::TagClass => g
                .tag_classes()
                .values()
                .map(|c| {
                    let mut r = vec![c.id.to_string(), c.name.clone(), c.url.clone()];
                    if mf {
                        r.push(opt(c.parent));
                    }
                    r
                })
                .collect(),
            Table::TagClassIsSubclassOf => {
                g.tag_classes().values().filter_map(|c| c.parent.map(|p| pair(c.id, p))).collect()
            }
            Table::Comment => comments()
                .map(|m| {
                    let mut r = vec![
                        m.id.to_string(),
                        m.creation_date.to_string(),
                        m.location_ip.clone(),
                        m.browser_used.clone(),
                        m.content.clone(),
                        m.length.to_string(),
                    ];
                    if mf {
                        let parent = m.reply_of().expect("comment");
                        let to_post = g.message(parent).is_some_and(|p| p.is_post());
                        r.push(m.creator.to_string());
                        r.push(m.country.to_string());
                        r.push(if to_post { parent.to_string() } else { "-1".into() });
                        r.push(if to_post { "-1".into() } else { parent.to_string() });
                    }
                    r
                })
                .collect(),
            Table::CommentHasCreator => comments().map(|m| pair(m.id, m.creator)).collect(),
            Table::CommentHasTag => tagged(comments().collect()),
            Table::CommentIsLocatedIn => comments().map(|m| pair(m.id, m.country)).collect(),
            Table::CommentReplyOfComment | Table::CommentReplyOfPost => {
                let want_post = self == Table::CommentReplyOfPost;
                comments()
                    .filter_map(|m| {
                        let parent = m.reply_of().expect("comment");
                        let is_post = g.message(parent).is_some_and(|p| p.is_post());
                        (is_post == want_post).then(|| pair(m.id, parent))
                    })
                    .collect()
            }
            Table::Forum => g
                .forums()
                .values()
                .map(|f| {
                    let mut r = vec![f.id.to_string(), f.title.clone(), f.creation_date.to_string()];
                    if mf {
                        r.push(f.moderator.to_string());
                    }
                    r
                })
                .collect(),
            Table::ForumContainerOf => {
                let mut rows: Vec<(Id, Id)> = posts().map(|m| (m.forum().expect("post"), m.id)).collect();
                rows.sort();
                rows.into_iter().map(|(f, p)| pair(f, p)).collect()
            }
            Table::ForumHasMember => g
                .edges()
                .members
                .iter()
                .map(|(&(f, p), d)| vec![f.to_string(), p.to_string(), d.to_string()])
                .collect(),
            Table::ForumHasModerator => g.forums().values().map(|f| pair(f.id, f.moderator)).collect(),
            Table::ForumHasTag => {
                g.forums().values().flat_map(|f| f.tags.iter().map(move |&t| pair(f.id, t))).collect()
            }
            Table::Person => g
                .persons()
                .values()
                .map(|p| {
                    let mut r = vec![
                        p.id.to_string(),
                        p.first_name.clone(),
                        p.last_name.clone(),
                        p.gender.clone(),
                        p.birthday.to_string(),
                        p.creation_date.to_string(),
                        p.location_ip.clone(),
                        p.browser_used.clone(),
                    ];
                    if mf {
                        r.push(p.city.to_string());
                    }
                    if v.composite() {
                        r.push(join(&p.languages));
                        r.push(join(&p.emails));
                    }
                    r
                })
                .collect(),
            Table::PersonEmail => g
                .persons()
                .values()
                .flat_map(|p| p.emails.iter().map(move |e| vec![p.id.to_string(), e.clone()]))
                .collect(),
            Table::PersonSpeaks => g
                .persons()
                .values()
                .flat_map(|p| p.languages.iter().map(move |l| vec![p.id.to_string(), l.clone()]))
                .collect(),
            Table::PersonHasInterest => g.edges().interests.iter().map(|&(p, t)| pair(p, t)).collect(),
            Table::PersonIsLocatedIn => g.persons().values().map(|p| pair(p.id, p.city)).collect(),
            Table::PersonKnows => g
                .edges()
                .knows
                .iter()
                .map(|(&(a, b), d)| vec![a.to_string(), b.to_string(), d.to_string()])
                .collect(),
            Table::PersonLikesComment | Table::PersonLikesPost => {
                let want_post = self == Table::PersonLikesPost;
                g.edges()
                    .likes
                    .iter()
                    .filter(|((_, m), _)| g.message(*m).is_some_and(|m| m.is_post() == want_post))
                    .map(|(&(p, m), d)| vec![p.to_string(), m.to_string(), d.to_string()])
                    .collect()
            }
            Table::PersonStudyAt | Table::PersonWorkAt => {
                let edges = if self == Table::PersonStudyAt { &g.edges().study_at } else { &g.edges().work_at };
                edges.iter().map(|(&(p, o), y)| vec![p.to_string(), o.to_string(), y.to_string()]).collect()
            }
            Table::Post => posts()
                .map(|m| {
                    let mut r = vec![
                        m.id.to_string(),
                        m.image_file().into(),
                        m.creation_date.to_string(),
                        m.location_ip.clone(),
                        m.browser_used.clone(),
                        m.language().into(),
                        m.content.clone(),
                        m.length.to_string(),
                    ];
                    if mf {
                        r.push(m.creator.to_string());
                        r.push(m.forum().expect("post").to_string());
                        r.push(m.country.to_string());
                    }
                    r
                })
                .collect(),
            Table::PostHasCreator => posts().map(|m| pair(m.id, m.creator)).collect(),
            Table::PostHasTag => tagged(posts().collect()),
            Table::PostIsLocatedIn => posts().map(|m| pair(m.id, m.country)).collect(),
        }
    }
}

fn opt(id: Option<Id>) -> String {
    id.map(|i| i.to_string()).unwrap_or_default()
}

fn join(items: &BTreeSet<String>) -> String {
    items.iter().map(String::as_str).collect::<Vec<_>>().join(";")
}

/// Files written by [`write_dataset`], relative to the output directory.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Manifest {
    pub files: Vec<PathBuf>,
}

impl Manifest {
    pub fn extend(&mut self, other: Manifest) {
        self.files.extend(other.files);
    }
}

fn table_dir(dir: &Path, t: Table) -> PathBuf {
    dir.join(ROOT_DIR).join(if t.is_static() { STATIC_DIR } else { DYNAMIC_DIR })
}

/// Writes `g` as `variant` under `dir/social_network/`, splitting each table
/// into `parts` files named `<table>_<part>_0.csv`.
pub fn write_dataset(g: &GraphSnapshot, variant: CsvVariant, dir: &Path, parts: usize) -> Result<Manifest, SerializeError> {
    let parts = parts.max(1);
    let mut manifest = Manifest::default();
    for t in variant.tables() {
        let out = table_dir(dir, t);
        fs::create_dir_all(&out).map_err(|e| SerializeError::io(&out, e))?;
        let rows = t.rows(g, variant);
        let chunk = rows.len().div_ceil(parts).max(1);
        for p in 0..parts {
            let path = out.join(format!("{}_{p}_0.csv", t.file_stem()));
            let lo = (p * chunk).min(rows.len());
            let hi = ((p + 1) * chunk).min(rows.len());
            write_table(&path, &t.columns(variant), &rows[lo..hi])?;
            manifest.files.push(path.strip_prefix(dir).unwrap_or(&path).to_path_buf());
        }
    }
    Ok(manifest)
}

/// Reads a dataset written in `variant`, accepting any number of parts per
/// table, and checks the result against the schema.
pub fn load_dataset(dir: &Path, variant: CsvVariant) -> Result<GraphSnapshot, SerializeError> {
    let mut s = Staging::default();
    for t in variant.tables() {
        let cols = t.columns(variant);
        for file in read_table_files(&table_dir(dir, t), t.file_stem(), &cols)? {
            s.ingest(t, variant, &file)?;
        }
    }
    let g = s.assemble()?;
    let problems = validate_schema(&g);
    if problems.is_empty() {
        Ok(g)
    } else {
        Err(SerializeError::Schema(problems))
    }
}

struct Cells<'a> {
    file: &'a TableFile,
    line: u64,
    cells: &'a [String],
}

impl Cells<'_> {
    fn err(&self, reason: impl Into<String>) -> SerializeError {
        SerializeError::parse(&self.file.path, self.line, reason)
    }

    fn text(&self, i: usize) -> String {
        self.cells[i].clone()
    }

    fn get<T: FromStr>(&self, i: usize) -> Result<T, SerializeError> {
        let s = &self.cells[i];
        s.parse().map_err(|_| self.err(format!("column {} has invalid value {s:?}", self.file.columns[i])))
    }

    fn id(&self, i: usize) -> Result<Id, SerializeError> {
        self.get(i)
    }

    fn opt_id(&self, i: usize) -> Result<Option<Id>, SerializeError> {
        if self.cells[i].is_empty() || self.cells[i] == "-1" {
            Ok(None)
        } else {
            self.id(i).map(Some)
        }
    }

    fn date(&self, i: usize) -> Result<Date, SerializeError> {
        self.get(i)
    }

    fn datetime(&self, i: usize) -> Result<DateTime, SerializeError> {
        self.get(i)
    }

    fn list(&self, i: usize) -> BTreeSet<String> {
        self.cells[i].split(';').filter(|s| !s.is_empty()).map(str::to_string).collect()
    }
}

struct PostRow {
    m: Message,
    forum: Option<Id>,
}

#[derive(Default)]
struct Staging {
    places: BTreeMap<Id, Place>,
    organisations: BTreeMap<Id, (Organisation, Option<Id>)>,
    tag_classes: BTreeMap<Id, TagClass>,
    tags: BTreeMap<Id, (Tag, Option<Id>)>,
    persons: BTreeMap<Id, (Person, Option<Id>)>,
    forums: BTreeMap<Id, (Forum, Option<Id>)>,
    posts: BTreeMap<Id, PostRow>,
    comments: BTreeMap<Id, (Message, Option<Id>)>,
    post_forums: BTreeMap<Id, Id>,
    reply_of: BTreeMap<Id, Id>,
    creators: BTreeMap<Id, Id>,
    countries: BTreeMap<Id, Id>,
    message_tags: BTreeMap<Id, BTreeSet<Id>>,
    knows: Vec<(Id, Id, DateTime)>,
    likes: Vec<(Id, Id, DateTime)>,
    members: Vec<(Id, Id, DateTime)>,
    interests: Vec<(Id, Id)>,
    study_at: Vec<(Id, Id, i32)>,
    work_at: Vec<(Id, Id, i32)>,
}

impl Staging {
    fn ingest(&mut self, t: Table, v: CsvVariant, file: &TableFile) -> Result<(), SerializeError> {
        let mf = v.merge_foreign();
        for (line, cells) in &file.rows {
            let c = Cells { file, line: *line, cells };
            match t {
                Table::Organisation => {
                    let kind = OrganisationKind::parse(&c.cells[1]).ok_or_else(|| c.err("unknown organisation type"))?;
                    let o = Organisation { id: c.id(0)?, kind, name: c.text(2), url: c.text(3), place: 0 };
                    let place = if mf { Some(c.id(4)?) } else { None };
                    self.organisations.insert(o.id, (o, place));
                }
                Table::OrganisationIsLocatedIn => {
                    let o = self.organisations.get_mut(&c.id(0)?).ok_or_else(|| c.err("unknown organisation"))?;
                    o.1 = Some(c.id(1)?);
                }
                Table::Place => {
                    let kind = PlaceKind::parse(&c.cells[3]).ok_or_else(|| c.err("unknown place type"))?;
                    let part_of = if mf { c.opt_id(4)? } else { None };
                    let p = Place { id: c.id(0)?, name: c.text(1), url: c.text(2), kind, part_of };
                    self.places.insert(p.id, p);
                }
                Table::PlaceIsPartOf => {
                    let p = self.places.get_mut(&c.id(0)?).ok_or_else(|| c.err("unknown place"))?;
                    p.part_of = Some(c.id(1)?);
                }
                Table::Tag => {
                    let tag = Tag { id: c.id(0)?, name: c.text(1), url: c.text(2), tag_class: 0 };
                    let class = if mf { Some(c.id(3)?) } else { None };
                    self.tags.insert(tag.id, (tag, class));
                }
                Table::TagHasType => {
                    let tag = self.tags.get_mut(&c.id(0)?).ok_or_else(|| c.err("unknown tag"))?;
                    tag.1 = Some(c.id(1)?);
                }
                Table::TagClass => {
                    let parent = if mf { c.opt_id(3)? } else { None };
                    let tc = TagClass { id: c.id(0)?, name: c.text(1), url: c.text(2), parent };
                    self.tag_classes.insert(tc.id, tc);
                }
                Table::TagClassIsSubclassOf => {
                    let tc = self.tag_classes.get_mut(&c.id(0)?).ok_or_else(|| c.err("unknown tag class"))?;
                    tc.parent = Some(c.id(1)?);
                }
                Table::Comment => {
                    let id = c.id(0)?;
                    let m = Message {
                        id,
                        creation_date: c.datetime(1)?,
                        location_ip: c.text(2),
                        browser_used: c.text(3),
                        content: c.text(4),
                        length: c.get(5)?,
                        creator: 0,
                        country: 0,
                        tags: BTreeSet::new(),
                        kind: MessageKind::Comment { reply_of: 0 },
                    };
                    let mut parent = None;
                    if mf {
                        self.creators.insert(id, c.id(6)?);
                        self.countries.insert(id, c.id(7)?);
                        let (to_post, to_comment) = (c.get::<i64>(8)?, c.get::<i64>(9)?);
                        parent = Some(snbkit_core::reply_target(to_post, to_comment).map_err(|e| c.err(e.to_string()))?);
                    }
                    self.comments.insert(id, (m, parent));
                }
                Table::CommentReplyOfComment | Table::CommentReplyOfPost => {
                    self.reply_of.insert(c.id(0)?, c.id(1)?);
                }
                Table::CommentHasCreator | Table::PostHasCreator => {
                    self.creators.insert(c.id(0)?, c.id(1)?);
                }
                Table::CommentIsLocatedIn | Table::PostIsLocatedIn => {
                    self.countries.insert(c.id(0)?, c.id(1)?);
                }
                Table::CommentHasTag | Table::PostHasTag => {
                    self.message_tags.entry(c.id(0)?).or_default().insert(c.id(1)?);
                }
                Table::Forum => {
                    let f = Forum {
                        id: c.id(0)?,
                        title: c.text(1),
                        creation_date: c.datetime(2)?,
                        moderator: 0,
                        tags: BTreeSet::new(),
                    };
                    let moderator = if mf { Some(c.id(3)?) } else { None };
                    self.forums.insert(f.id, (f, moderator));
                }
                Table::ForumContainerOf => {
                    self.post_forums.insert(c.id(1)?, c.id(0)?);
                }
                Table::ForumHasMember => self.members.push((c.id(0)?, c.id(1)?, c.datetime(2)?)),
                Table::ForumHasModerator => {
                    let f = self.forums.get_mut(&c.id(0)?).ok_or_else(|| c.err("unknown forum"))?;
                    f.1 = Some(c.id(1)?);
                }
                Table::ForumHasTag => {
                    let f = self.forums.get_mut(&c.id(0)?).ok_or_else(|| c.err("unknown forum"))?;
                    f.0.tags.insert(c.id(1)?);
                }
                Table::Person => {
                    let mut p = Person {
                        id: c.id(0)?,
                        first_name: c.text(1),
                        last_name: c.text(2),
                        gender: c.text(3),
                        birthday: c.date(4)?,
                        creation_date: c.datetime(5)?,
                        location_ip: c.text(6),
                        browser_used: c.text(7),
                        city: 0,
                        emails: BTreeSet::new(),
                        languages: BTreeSet::new(),
                    };
                    let mut next = 8;
                    let mut city = None;
                    if mf {
                        city = Some(c.id(next)?);
                        next += 1;
                    }
                    if v.composite() {
                        p.languages = c.list(next);
                        p.emails = c.list(next + 1);
                    }
                    self.persons.insert(p.id, (p, city));
                }
                Table::PersonEmail => {
                    let p = self.persons.get_mut(&c.id(0)?).ok_or_else(|| c.err("unknown person"))?;
                    p.0.emails.insert(c.text(1));
                }
                Table::PersonSpeaks => {
                    let p = self.persons.get_mut(&c.id(0)?).ok_or_else(|| c.err("unknown person"))?;
                    p.0.languages.insert(c.text(1));
                }
                Table::PersonIsLocatedIn => {
                    let p = self.persons.get_mut(&c.id(0)?).ok_or_else(|| c.err("unknown person"))?;
                    p.1 = Some(c.id(1)?);
                }
                Table::PersonHasInterest => self.interests.push((c.id(0)?, c.id(1)?)),
                Table::PersonKnows => self.knows.push((c.id(0)?, c.id(1)?, c.datetime(2)?)),
                Table::PersonLikesComment | Table::PersonLikesPost => {
                    self.likes.push((c.id(0)?, c.id(1)?, c.datetime(2)?))
                }
                Table::PersonStudyAt => self.study_at.push((c.id(0)?, c.id(1)?, c.get(2)?)),
                Table::PersonWorkAt => self.work_at.push((c.id(0)?, c.id(1)?, c.get(2)?)),
                Table::Post => {
                    let id = c.id(0)?;
                    let m = Message {
                        id,
                        creation_date: c.datetime(2)?,
                        location_ip: c.text(3),
                        browser_used: c.text(4),
                        content: c.text(6),
                        length: c.get(7)?,
                        creator: 0,
                        country: 0,
                        tags: BTreeSet::new(),
                        kind: MessageKind::Post { forum: 0, image_file: c.text(1), language: c.text(5) },
                    };
                    let mut forum = None;
                    if mf {
                        self.creators.insert(id, c.id(8)?);
                        forum = Some(c.id(9)?);
                        self.countries.insert(id, c.id(10)?);
                    }
                    self.posts.insert(id, PostRow { m, forum });
                }
            }
        }
        Ok(())
    }

    fn assemble(self) -> Result<GraphSnapshot, SerializeError> {
        let missing = |what: &str, id: Id, link: &str| {
            SerializeError::Model(snbkit_core::ModelError::Parse(format!("{what} {id} has no {link}")))
        };
        let mut g = GraphSnapshot::new();
        for p in self.places.into_values() {
            g.insert_place(p)?;
        }
        for (mut o, place) in self.organisations.into_values() {
            o.place = place.ok_or_else(|| missing("organisation", o.id, "place"))?;
            g.insert_organisation(o)?;
        }
        for tc in self.tag_classes.into_values() {
            g.insert_tag_class(tc)?;
        }
        for (mut t, class) in self.tags.into_values() {
            t.tag_class = class.ok_or_else(|| missing("tag", t.id, "tag class"))?;
            g.insert_tag(t)?;
        }
        for (mut p, city) in self.persons.into_values() {
            p.city = city.ok_or_else(|| missing("person", p.id, "city"))?;
            g.insert_person(p)?;
        }
        for (mut f, moderator) in self.forums.into_values() {
            f.moderator = moderator.ok_or_else(|| missing("forum", f.id, "moderator"))?;
            g.insert_forum(f)?;
        }
        let finish = |mut m: Message, tags: &BTreeMap<Id, BTreeSet<Id>>| -> Result<Message, SerializeError> {
            m.creator = *self.creators.get(&m.id).ok_or_else(|| missing("message", m.id, "creator"))?;
            m.country = *self.countries.get(&m.id).ok_or_else(|| missing("message", m.id, "country"))?;
            m.tags = tags.get(&m.id).cloned().unwrap_or_default();
            Ok(m)
        };
        for row in self.posts.into_values() {
            let mut m = finish(row.m, &self.message_tags)?;
            let forum = row.forum.or_else(|| self.post_forums.get(&m.id).copied()).ok_or_else(|| missing("post", m.id, "forum"))?;
            if let MessageKind::Post { forum: f, .. } = &mut m.kind {
                *f = forum;
            }
            g.insert_message(m)?;
        }
        for (m, parent) in self.comments.into_values() {
            let mut m = finish(m, &self.message_tags)?;
            m.kind = MessageKind::Comment { reply_of: parent.or_else(|| self.reply_of.get(&m.id).copied()).ok_or_else(|| missing("comment", m.id, "parent"))? };
            g.insert_message(m)?;
        }
        for (a, b, d) in self.knows {
            g.insert_knows(a, b, d)?;
        }
        for (p, m, d) in self.likes {
            g.insert_like(p, m, d)?;
        }
        for (f, p, d) in self.members {
            g.insert_membership(f, p, d)?;
        }
        for (p, t) in self.interests {
            g.insert_interest(p, t)?;
        }
        for (p, o, y) in self.study_at {
            g.insert_study_at(p, o, y)?;
        }
        for (p, o, y) in self.work_at {
            g.insert_work_at(p, o, y)?;
        }
        Ok(g)
    }
}
