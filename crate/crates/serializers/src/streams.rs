//! Update and delete stream files.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use snbkit_core::events::sort_updates;
use snbkit_core::{
    reply_target, DateTime, DeleteEvent, DeleteOp, Forum, GraphSnapshot, Id, Message, MessageKind, Person,
    PersonInsert, UpdateEvent, UpdateOp,
};

use crate::dataset::{Manifest, ROOT_DIR};
use crate::error::SerializeError;
use crate::table::{csv_io, read_rows, writer, TableFile};

pub const PERSON_UPDATES: &str = "updateStream_0_0_person.csv";
pub const FORUM_UPDATES: &str = "updateStream_0_0_forum.csv";
pub const PERSON_DELETES: &str = "deleteStream_0_0_person.csv";
pub const FORUM_DELETES: &str = "deleteStream_0_0_forum.csv";
pub const PROPERTIES: &str = "updateStream.properties";

/// Summary written next to the update streams.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StreamProperties {
    /// Average simulation time between consecutive updates, in milliseconds.
    pub update_interleave: i64,
    pub num_events: usize,
    pub start_time: i64,
    pub end_time: i64,
}

impl StreamProperties {
    pub fn of(updates: &[UpdateEvent]) -> StreamProperties {
        let (Some(first), Some(last)) = (updates.iter().map(|e| e.time).min(), updates.iter().map(|e| e.time).max())
        else {
            return StreamProperties::default();
        };
        let span = last.millis() - first.millis();
        StreamProperties {
            update_interleave: span / updates.len() as i64,
            num_events: updates.len(),
            start_time: first.millis(),
            end_time: last.millis(),
        }
    }

    fn render(&self) -> String {
        format!(
            "update_interleave={}\nnum_events={}\nstart_time={}\nend_time={}\n",
            self.update_interleave, self.num_events, self.start_time, self.end_time
        )
    }

    fn parse(text: &str, path: &Path) -> Result<StreamProperties, SerializeError> {
        let mut out = StreamProperties::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = || SerializeError::parse(path, i as u64 + 1, format!("bad property line {line:?}"));
            let (key, value) = line.split_once('=').ok_or_else(bad)?;
            let value: i64 = value.trim().parse().map_err(|_| bad())?;
            match key.trim() {
                "update_interleave" => out.update_interleave = value,
                "num_events" => out.num_events = usize::try_from(value).map_err(|_| bad())?,
                "start_time" => out.start_time = value,
                "end_time" => out.end_time = value,
                _ => {}
            }
        }
        Ok(out)
    }
}

/// Contents of a stream directory.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Streams {
    pub updates: Vec<UpdateEvent>,
    pub deletes: Vec<DeleteEvent>,
    pub properties: StreamProperties,
}

fn ids(items: &BTreeSet<Id>) -> String {
    items.iter().map(Id::to_string).collect::<Vec<_>>().join(";")
}

fn texts(items: &BTreeSet<String>) -> String {
    items.iter().map(String::as_str).collect::<Vec<_>>().join(";")
}

fn years(items: &BTreeMap<Id, i32>) -> String {
    items.iter().map(|(o, y)| format!("{o},{y}")).collect::<Vec<_>>().join(";")
}

fn payload(op: &UpdateOp, is_post: &dyn Fn(Id) -> bool) -> Vec<String> {
    match op {
        UpdateOp::AddPerson(ins) => {
            let p = &ins.person;
            vec![
                p.id.to_string(),
                p.first_name.clone(),
                p.last_name.clone(),
                p.gender.clone(),
                p.birthday.to_string(),
                p.creation_date.to_string(),
                p.location_ip.clone(),
                p.browser_used.clone(),
                p.city.to_string(),
                texts(&p.languages),
                texts(&p.emails),
                ids(&ins.interests),
                years(&ins.study_at),
                years(&ins.work_at),
            ]
        }
        UpdateOp::AddLikePost { person, post: m, date } | UpdateOp::AddLikeComment { person, comment: m, date } => {
            vec![person.to_string(), m.to_string(), date.to_string()]
        }
        UpdateOp::AddForum(f) => {
            vec![f.id.to_string(), f.title.clone(), f.creation_date.to_string(), f.moderator.to_string(), ids(&f.tags)]
        }
        UpdateOp::AddMembership { forum, person, date } => vec![person.to_string(), forum.to_string(), date.to_string()],
        UpdateOp::AddPost(m) => vec![
            m.id.to_string(),
            m.image_file().to_string(),
            m.creation_date.to_string(),
            m.location_ip.clone(),
            m.browser_used.clone(),
            m.language().to_string(),
            m.content.clone(),
            m.length.to_string(),
            m.creator.to_string(),
            m.forum().expect("post").to_string(),
            m.country.to_string(),
            ids(&m.tags),
        ],
        UpdateOp::AddComment(m) => {
            let parent = m.reply_of().expect("comment");
            let (to_post, to_comment) = if is_post(parent) { (parent as i64, -1) } else { (-1, parent as i64) };
            vec![
                m.id.to_string(),
                m.creation_date.to_string(),
                m.location_ip.clone(),
                m.browser_used.clone(),
                m.content.clone(),
                m.length.to_string(),
                m.creator.to_string(),
                m.country.to_string(),
                to_post.to_string(),
                to_comment.to_string(),
                ids(&m.tags),
            ]
        }
        UpdateOp::AddKnows { person1, person2, date } => vec![person1.to_string(), person2.to_string(), date.to_string()],
    }
}

fn write_lines(path: &Path, lines: &[Vec<String>]) -> Result<(), SerializeError> {
    let mut w = writer(path)?;
    for l in lines {
        w.write_record(l).map_err(|e| csv_io(path, e))?;
    }
    w.flush().map_err(|e| SerializeError::io(path, e))
}

/// Writes insert streams, plus delete streams when `deletes` is non-empty,
/// under `dir/social_network/`. `base` resolves whether a comment's parent
/// is a post when the parent is not itself in `updates`.
pub fn write_streams(
    dir: &Path,
    base: &GraphSnapshot,
    updates: &[UpdateEvent],
    deletes: &[DeleteEvent],
) -> Result<Manifest, SerializeError> {
    let root = dir.join(ROOT_DIR);
    fs::create_dir_all(&root).map_err(|e| SerializeError::io(&root, e))?;
    let new_posts: BTreeSet<Id> = updates
        .iter()
        .filter_map(|e| match &e.op {
            UpdateOp::AddPost(m) => Some(m.id),
            _ => None,
        })
        .collect();
    let is_post = |id: Id| new_posts.contains(&id) || base.message(id).is_some_and(Message::is_post);
    let (mut person, mut forum) = (Vec::new(), Vec::new());
    for e in updates {
        let mut line = vec![e.time.millis().to_string(), e.dependency_time.millis().to_string(), e.op.op_id().to_string()];
        line.extend(payload(&e.op, &is_post));
        if e.op.op_id() == 1 { &mut person } else { &mut forum }.push(line);
    }
    let mut manifest = Manifest::default();
    let mut emit = |name: &str, lines: &[Vec<String>]| -> Result<(), SerializeError> {
        let path = root.join(name);
        write_lines(&path, lines)?;
        manifest.files.push(Path::new(ROOT_DIR).join(name));
        Ok(())
    };
    emit(PERSON_UPDATES, &person)?;
    emit(FORUM_UPDATES, &forum)?;
    if !deletes.is_empty() {
        let (mut person, mut forum) = (Vec::new(), Vec::new());
        for e in deletes {
            let line = vec![
                e.time.millis().to_string(),
                e.dependency_time.millis().to_string(),
                e.op.op_id().to_string(),
                e.op.target().to_string(),
            ];
            if e.op.op_id() == 1 { &mut person } else { &mut forum }.push(line);
        }
        emit(PERSON_DELETES, &person)?;
        emit(FORUM_DELETES, &forum)?;
    }
    let path = root.join(PROPERTIES);
    fs::write(&path, StreamProperties::of(updates).render()).map_err(|e| SerializeError::io(&path, e))?;
    manifest.files.push(Path::new(ROOT_DIR).join(PROPERTIES));
    Ok(manifest)
}

struct Line<'a> {
    file: &'a TableFile,
    line: u64,
    cells: &'a [String],
}

impl Line<'_> {
    fn err(&self, reason: impl Into<String>) -> SerializeError {
        SerializeError::parse(&self.file.path, self.line, reason)
    }

    fn expect_len(&self, n: usize) -> Result<(), SerializeError> {
        if self.cells.len() == n {
            Ok(())
        } else {
            Err(self.err(format!("operation {} needs {n} fields, found {}", self.cells[2], self.cells.len())))
        }
    }

    fn get<T: std::str::FromStr>(&self, i: usize) -> Result<T, SerializeError> {
        let s = &self.cells[i];
        s.parse().map_err(|_| self.err(format!("field {} has invalid value {s:?}", i + 1)))
    }

    fn millis(&self, i: usize) -> Result<DateTime, SerializeError> {
        self.get(i).map(DateTime::from_millis)
    }

    fn ids(&self, i: usize) -> Result<BTreeSet<Id>, SerializeError> {
        self.cells[i]
            .split(';')
            .filter(|s| !s.is_empty())
            .map(|s| s.parse().map_err(|_| self.err(format!("bad id {s:?} in field {}", i + 1))))
            .collect()
    }

    fn texts(&self, i: usize) -> BTreeSet<String> {
        self.cells[i].split(';').filter(|s| !s.is_empty()).map(str::to_string).collect()
    }

    fn years(&self, i: usize) -> Result<BTreeMap<Id, i32>, SerializeError> {
        let mut out = BTreeMap::new();
        for item in self.cells[i].split(';').filter(|s| !s.is_empty()) {
            let bad = || self.err(format!("bad organisation,year pair {item:?}"));
            let (o, y) = item.split_once(',').ok_or_else(bad)?;
            out.insert(o.parse().map_err(|_| bad())?, y.parse().map_err(|_| bad())?);
        }
        Ok(out)
    }

    fn update(&self) -> Result<UpdateEvent, SerializeError> {
        if self.cells.len() < 3 {
            return Err(self.err("expected t|t_d|operation|..."));
        }
        let time = self.millis(0)?;
        let dependency_time = self.millis(1)?;
        let op = match self.get::<u8>(2)? {
            1 => {
                self.expect_len(17)?;
                UpdateOp::AddPerson(PersonInsert {
                    person: Person {
                        id: self.get(3)?,
                        first_name: self.cells[4].clone(),
                        last_name: self.cells[5].clone(),
                        gender: self.cells[6].clone(),
                        birthday: self.get(7)?,
                        creation_date: self.get(8)?,
                        location_ip: self.cells[9].clone(),
                        browser_used: self.cells[10].clone(),
                        city: self.get(11)?,
                        languages: self.texts(12),
                        emails: self.texts(13),
                    },
                    interests: self.ids(14)?,
                    study_at: self.years(15)?,
                    work_at: self.years(16)?,
                })
            }
            2 => {
                self.expect_len(6)?;
                UpdateOp::AddLikePost { person: self.get(3)?, post: self.get(4)?, date: self.get(5)? }
            }
            3 => {
                self.expect_len(6)?;
                UpdateOp::AddLikeComment { person: self.get(3)?, comment: self.get(4)?, date: self.get(5)? }
            }
            4 => {
                self.expect_len(8)?;
                UpdateOp::AddForum(Forum {
                    id: self.get(3)?,
                    title: self.cells[4].clone(),
                    creation_date: self.get(5)?,
                    moderator: self.get(6)?,
                    tags: self.ids(7)?,
                })
            }
            5 => {
                self.expect_len(6)?;
                UpdateOp::AddMembership { person: self.get(3)?, forum: self.get(4)?, date: self.get(5)? }
            }
            6 => {
                self.expect_len(15)?;
                UpdateOp::AddPost(Message {
                    id: self.get(3)?,
                    creation_date: self.get(5)?,
                    location_ip: self.cells[6].clone(),
                    browser_used: self.cells[7].clone(),
                    content: self.cells[9].clone(),
                    length: self.get(10)?,
                    creator: self.get(11)?,
                    country: self.get(13)?,
                    tags: self.ids(14)?,
                    kind: MessageKind::Post {
                        forum: self.get(12)?,
                        image_file: self.cells[4].clone(),
                        language: self.cells[8].clone(),
                    },
                })
            }
            7 => {
                self.expect_len(14)?;
                let parent = reply_target(self.get(11)?, self.get(12)?).map_err(|e| self.err(e.to_string()))?;
                UpdateOp::AddComment(Message {
                    id: self.get(3)?,
                    creation_date: self.get(4)?,
                    location_ip: self.cells[5].clone(),
                    browser_used: self.cells[6].clone(),
                    content: self.cells[7].clone(),
                    length: self.get(8)?,
                    creator: self.get(9)?,
                    country: self.get(10)?,
                    tags: self.ids(13)?,
                    kind: MessageKind::Comment { reply_of: parent },
                })
            }
            8 => {
                self.expect_len(6)?;
                UpdateOp::AddKnows { person1: self.get(3)?, person2: self.get(4)?, date: self.get(5)? }
            }
            other => return Err(self.err(format!("unknown update operation {other}"))),
        };
        Ok(UpdateEvent { time, dependency_time, op })
    }

    fn delete(&self) -> Result<DeleteEvent, SerializeError> {
        if self.cells.len() != 4 {
            return Err(self.err("expected t|t_d|operation|targetId"));
        }
        let op_id = self.get::<u8>(2)?;
        let op = DeleteOp::from_parts(op_id, self.get(3)?)
            .ok_or_else(|| self.err(format!("unknown delete operation {op_id}")))?;
        Ok(DeleteEvent { time: self.millis(0)?, dependency_time: self.millis(1)?, op })
    }
}

fn lines_of<T>(path: &Path, parse: impl for<'a> Fn(&Line<'a>) -> Result<T, SerializeError>) -> Result<Vec<T>, SerializeError> {
    let file = read_rows(path, None)?;
    file.rows.iter().map(|(line, cells)| parse(&Line { file: &file, line: *line, cells })).collect()
}

/// Reads the streams written by [`write_streams`]; delete files are optional.
/// Events come back in replay order.
pub fn read_streams(dir: &Path) -> Result<Streams, SerializeError> {
    let root = dir.join(ROOT_DIR);
    let mut updates = lines_of(&root.join(PERSON_UPDATES), |l| l.update())?;
    updates.extend(lines_of(&root.join(FORUM_UPDATES), |l| l.update())?);
    sort_updates(&mut updates);
    let mut deletes = Vec::new();
    for name in [PERSON_DELETES, FORUM_DELETES] {
        let path = root.join(name);
        if path.exists() {
            deletes.extend(lines_of(&path, |l| l.delete())?);
        }
    }
    deletes.sort_by_key(|e| (e.time, e.op.op_id(), e.op.target()));
    let path = root.join(PROPERTIES);
    let text = fs::read_to_string(&path).map_err(|e| SerializeError::io(&path, e))?;
    let properties = StreamProperties::parse(&text, &path)?;
    Ok(Streams { updates, deletes, properties })
}
