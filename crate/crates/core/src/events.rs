//! Insert and delete events replayed on top of a snapshot.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::ModelError;
use crate::model::{Forum, Id, Message, Person};
use crate::time::DateTime;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PersonInsert {
    pub person: Person,
    pub interests: BTreeSet<Id>,
    /// University id to class year.
    pub study_at: BTreeMap<Id, i32>,
    /// Company id to the year work started.
    pub work_at: BTreeMap<Id, i32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UpdateOp {
    AddPerson(PersonInsert),
    AddLikePost { person: Id, post: Id, date: DateTime },
    AddLikeComment { person: Id, comment: Id, date: DateTime },
    AddForum(Forum),
    AddMembership { forum: Id, person: Id, date: DateTime },
    AddPost(Message),
    AddComment(Message),
    AddKnows { person1: Id, person2: Id, date: DateTime },
}

impl UpdateOp {
    /// Operation number 1..=8 used in update stream files.
    pub fn op_id(&self) -> u8 {
        match self {
            UpdateOp::AddPerson(_) => 1,
            UpdateOp::AddLikePost { .. } => 2,
            UpdateOp::AddLikeComment { .. } => 3,
            UpdateOp::AddForum(_) => 4,
            UpdateOp::AddMembership { .. } => 5,
            UpdateOp::AddPost(_) => 6,
            UpdateOp::AddComment(_) => 7,
            UpdateOp::AddKnows { .. } => 8,
        }
    }

    pub fn name(&self) -> &'static str {
        match self.op_id() {
            1 => "IU1",
            2 => "IU2",
            3 => "IU3",
            4 => "IU4",
            5 => "IU5",
            6 => "IU6",
            7 => "IU7",
            _ => "IU8",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpdateEvent {
    /// When the operation happens in simulation time.
    pub time: DateTime,
    /// Creation time of the latest entity the operation depends on.
    pub dependency_time: DateTime,
    pub op: UpdateOp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DeleteOp {
    Person(Id),
    Forum(Id),
    Post(Id),
    Comment(Id),
}

impl DeleteOp {
    /// Operation number in the delete space.
    pub fn op_id(&self) -> u8 {
        match self {
            DeleteOp::Person(_) => 1,
            DeleteOp::Forum(_) => 4,
            DeleteOp::Post(_) => 6,
            DeleteOp::Comment(_) => 7,
        }
    }

    pub fn target(&self) -> Id {
        match *self {
            DeleteOp::Person(id) | DeleteOp::Forum(id) | DeleteOp::Post(id) | DeleteOp::Comment(id) => id,
        }
    }

    pub fn from_parts(op_id: u8, target: Id) -> Option<DeleteOp> {
        match op_id {
            1 => Some(DeleteOp::Person(target)),
            4 => Some(DeleteOp::Forum(target)),
            6 => Some(DeleteOp::Post(target)),
            7 => Some(DeleteOp::Comment(target)),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeleteEvent {
    pub time: DateTime,
    pub dependency_time: DateTime,
    pub op: DeleteOp,
}

/// Stable replay order: by time, then operation number, then a per-op key.
pub fn sort_updates(events: &mut [UpdateEvent]) {
    events.sort_by_key(|e| (e.time, e.op.op_id(), op_key(&e.op)));
}

fn op_key(op: &UpdateOp) -> (Id, Id) {
    match op {
        UpdateOp::AddPerson(p) => (p.person.id, 0),
        UpdateOp::AddLikePost { person, post, .. } => (*person, *post),
        UpdateOp::AddLikeComment { person, comment, .. } => (*person, *comment),
        UpdateOp::AddForum(f) => (f.id, 0),
        UpdateOp::AddMembership { forum, person, .. } => (*forum, *person),
        UpdateOp::AddPost(m) | UpdateOp::AddComment(m) => (m.id, 0),
        UpdateOp::AddKnows { person1, person2, .. } => (*person1, *person2),
    }
}

/// Resolves the two reply columns of an add-comment operation, where the
/// unused one holds -1.
pub fn reply_target(reply_to_post: i64, reply_to_comment: i64) -> Result<Id, ModelError> {
    match (reply_to_post, reply_to_comment) {
        (p, -1) if p >= 0 => Ok(p as Id),
        (-1, c) if c >= 0 => Ok(c as Id),
        (p, c) => Err(ModelError::Parse(format!(
            "a comment replies to exactly one message, got post {p} and comment {c}"
        ))),
    }
}
