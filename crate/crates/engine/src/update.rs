//! Inserts and cascading deletes.

use snbkit_core::{apply_plan, deletion_plan, DeleteOp, EntityKind, GraphSnapshot, Id, MessageKind, ModelError, UpdateOp};

use crate::EngineError;

/// Entities removed by a delete, by type.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DeletionReport {
    pub persons: usize,
    pub forums: usize,
    pub posts: usize,
    pub comments: usize,
    /// Removed edges of every relation.
    pub edges: usize,
    /// Group forums handed to a new moderator.
    pub reassigned_forums: usize,
}

fn missing(e: ModelError) -> EngineError {
    match e {
        ModelError::UnknownId { .. } | ModelError::UnknownEdge { .. } => EngineError::DependencyMissing(e),
        other => EngineError::Model(other),
    }
}

fn require(present: bool, kind: EntityKind, id: Id) -> Result<(), EngineError> {
    if present {
        Ok(())
    } else {
        Err(missing(ModelError::UnknownId { kind, id }))
    }
}

/// Applies one insert operation.
pub fn apply_insert(g: &mut GraphSnapshot, op: &UpdateOp) -> Result<(), EngineError> {
    match op {
        UpdateOp::AddPerson(ins) => {
            for &t in &ins.interests {
                g.tag(t).ok_or_else(|| missing(ModelError::UnknownId { kind: EntityKind::Tag, id: t }))?;
            }
            for &o in ins.study_at.keys().chain(ins.work_at.keys()) {
                g.organisation(o).ok_or_else(|| {
                    missing(ModelError::UnknownId { kind: EntityKind::Organisation, id: o })
                })?;
            }
            g.insert_person(ins.person.clone()).map_err(missing)?;
            let id = ins.person.id;
            for &t in &ins.interests {
                g.insert_interest(id, t).map_err(missing)?;
            }
            for (&o, &y) in &ins.study_at {
                g.insert_study_at(id, o, y).map_err(missing)?;
            }
            for (&o, &y) in &ins.work_at {
                g.insert_work_at(id, o, y).map_err(missing)?;
            }
        }
        UpdateOp::AddLikePost { person, post: message, date } | UpdateOp::AddLikeComment { person, comment: message, date } => {
            require(g.person(*person).is_some(), EntityKind::Person, *person)?;
            require(g.message(*message).is_some(), EntityKind::Message, *message)?;
            g.insert_like(*person, *message, *date).map_err(missing)?
        }
        UpdateOp::AddForum(f) => {
            require(g.person(f.moderator).is_some(), EntityKind::Person, f.moderator)?;
            for &t in &f.tags {
                require(g.tag(t).is_some(), EntityKind::Tag, t)?;
            }
            g.insert_forum(f.clone()).map_err(missing)?
        }
        UpdateOp::AddMembership { forum, person, date } => {
            require(g.forum(*forum).is_some(), EntityKind::Forum, *forum)?;
            require(g.person(*person).is_some(), EntityKind::Person, *person)?;
            g.insert_membership(*forum, *person, *date).map_err(missing)?
        }
        UpdateOp::AddPost(m) | UpdateOp::AddComment(m) => {
            require(g.person(m.creator).is_some(), EntityKind::Person, m.creator)?;
            require(g.place(m.country).is_some(), EntityKind::Place, m.country)?;
            for &t in &m.tags {
                require(g.tag(t).is_some(), EntityKind::Tag, t)?;
            }
            match m.kind {
                MessageKind::Post { forum, .. } => require(g.forum(forum).is_some(), EntityKind::Forum, forum)?,
                MessageKind::Comment { reply_of } => require(g.message(reply_of).is_some(), EntityKind::Message, reply_of)?,
            }
            g.insert_message(m.clone()).map_err(missing)?
        }
        UpdateOp::AddKnows { person1, person2, date } => {
            require(g.person(*person1).is_some(), EntityKind::Person, *person1)?;
            require(g.person(*person2).is_some(), EntityKind::Person, *person2)?;
            g.insert_knows(*person1, *person2, *date).map_err(missing)?
        }
    }
    Ok(())
}

/// Applies one cascading delete.
pub fn apply_delete(g: &mut GraphSnapshot, op: DeleteOp) -> Result<DeletionReport, EngineError> {
    let (mut posts, mut comments) = (0, 0);
    let plan = deletion_plan(g, op)?;
    for &m in &plan.messages {
        if g.message(m).is_some_and(|m| m.is_post()) {
            posts += 1;
        } else {
            comments += 1;
        }
    }
    apply_plan(g, &plan)?;
    let nodes = plan.persons.len() + plan.forums.len() + plan.messages.len();
    Ok(DeletionReport {
        persons: plan.persons.len(),
        forums: plan.forums.len(),
        posts,
        comments,
        edges: plan.removed_count() - nodes,
        reassigned_forums: plan.new_moderators.len(),
    })
}
