//! Cascading node deletion.
//!
//! A deletion is computed as a [`DeletionPlan`] first and applied second, so
//! callers can inspect what a delete would remove without mutating the graph.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::ModelError;
use crate::events::DeleteOp;
use crate::model::*;
use crate::snapshot::{knows_key, GraphSnapshot};
use crate::time::DateTime;

/// Everything a delete removes, plus group forums that change moderator.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DeletionPlan {
    pub persons: BTreeSet<Id>,
    pub forums: BTreeSet<Id>,
    pub messages: BTreeSet<Id>,
    pub knows: BTreeSet<(Id, Id)>,
    pub likes: BTreeSet<(Id, Id)>,
    /// `(forum, person)`.
    pub memberships: BTreeSet<(Id, Id)>,
    pub interests: BTreeSet<(Id, Id)>,
    pub study_at: BTreeSet<(Id, Id)>,
    pub work_at: BTreeSet<(Id, Id)>,
    /// Group forum to its new moderator.
    pub new_moderators: BTreeMap<Id, Id>,
}

impl DeletionPlan {
    /// Latest creation or edge timestamp among the removed elements.
    pub fn latest_activity(&self, g: &GraphSnapshot) -> Option<DateTime> {
        let mut t: Option<DateTime> = None;
        let mut see = |d: DateTime| t = Some(t.map_or(d, |x| x.max(d)));
        for id in &self.persons {
            see(g.person(*id).expect("planned person").creation_date);
        }
        for id in &self.forums {
            see(g.forum(*id).expect("planned forum").creation_date);
        }
        for id in &self.messages {
            see(g.message(*id).expect("planned message").creation_date);
        }
        let e = g.edges();
        for k in &self.knows {
            see(e.knows[k]);
        }
        for k in &self.likes {
            see(e.likes[k]);
        }
        for k in &self.memberships {
            see(e.members[k]);
        }
        t
    }

    pub fn removed_count(&self) -> usize {
        self.persons.len()
            + self.forums.len()
            + self.messages.len()
            + self.knows.len()
            + self.likes.len()
            + self.memberships.len()
            + self.interests.len()
            + self.study_at.len()
            + self.work_at.len()
    }

    fn add_thread(&mut self, g: &GraphSnapshot, root: Id) {
        let mut stack = vec![root];
        while let Some(m) = stack.pop() {
            if !self.messages.insert(m) {
                continue;
            }
            for &p in g.likes_of(m).keys() {
                self.likes.insert((p, m));
            }
            stack.extend(g.replies_to(m).iter().copied());
        }
    }

    fn add_forum(&mut self, g: &GraphSnapshot, forum: Id) {
        self.forums.insert(forum);
        self.new_moderators.remove(&forum);
        for &p in g.members_of(forum).keys() {
            self.memberships.insert((forum, p));
        }
        for &post in g.posts_in(forum) {
            self.add_thread(g, post);
        }
    }
}

/// Computes what deleting `op`'s target removes.
///
/// * person: the node, its knows/likes/membership/interest/studyAt/workAt
///   edges, its messages with their reply trees, and its wall and album
///   forums. Each group forum it moderates passes to the member with the
///   earliest join date (smallest id on ties) or is removed when no other
///   member remains.
/// * forum: the node, its memberships, and every post with its reply tree.
/// * post / comment: the message and its reply tree.
///
/// Likes on every removed message are removed as well.
pub fn deletion_plan(g: &GraphSnapshot, op: DeleteOp) -> Result<DeletionPlan, ModelError> {
    let mut plan = DeletionPlan::default();
    match op {
        DeleteOp::Person(id) => {
            g.person(id).ok_or(ModelError::UnknownId { kind: EntityKind::Person, id })?;
            plan.persons.insert(id);
            for &f in g.friends(id).keys() {
                plan.knows.insert(knows_key(id, f));
            }
            for &m in g.liked_by(id) {
                plan.likes.insert((id, m));
            }
            for &f in g.forums_of_member(id) {
                plan.memberships.insert((f, id));
            }
            for &t in g.interests_of(id) {
                plan.interests.insert((id, t));
            }
            for &o in g.study_of(id).keys() {
                plan.study_at.insert((id, o));
            }
            for &o in g.work_of(id).keys() {
                plan.work_at.insert((id, o));
            }
            for &f in g.moderated_by(id) {
                let forum = g.forum(f).expect("indexed forum");
                if forum.kind() == ForumKind::Group {
                    let heir = g
                        .members_of(f)
                        .iter()
                        .filter(|(p, _)| **p != id)
                        .min_by_key(|(p, d)| (**d, **p))
                        .map(|(p, _)| *p);
                    if let Some(heir) = heir {
                        plan.new_moderators.insert(f, heir);
                        continue;
                    }
                }
                plan.add_forum(g, f);
            }
            for &m in g.messages_of(id) {
                plan.add_thread(g, m);
            }
        }
        DeleteOp::Forum(id) => {
            g.forum(id).ok_or(ModelError::UnknownId { kind: EntityKind::Forum, id })?;
            plan.add_forum(g, id);
        }
        DeleteOp::Post(id) | DeleteOp::Comment(id) => {
            let m = g.message(id).ok_or(ModelError::UnknownId { kind: EntityKind::Message, id })?;
            let wanted_post = matches!(op, DeleteOp::Post(_));
            if m.is_post() != wanted_post {
                return Err(ModelError::UnknownId { kind: EntityKind::Message, id });
            }
            plan.add_thread(g, id);
        }
    }
    Ok(plan)
}

/// Applies a plan computed on the same graph state.
pub fn apply_plan(g: &mut GraphSnapshot, plan: &DeletionPlan) -> Result<(), ModelError> {
    for (&f, &p) in &plan.new_moderators {
        g.set_forum_moderator(f, p)?;
    }
    for &(a, b) in &plan.knows {
        g.remove_knows(a, b)?;
    }
    for &(p, m) in &plan.likes {
        g.remove_like(p, m)?;
    }
    for &(f, p) in &plan.memberships {
        g.remove_membership(f, p)?;
    }
    for &(p, t) in &plan.interests {
        g.remove_interest(p, t)?;
    }
    for &(p, o) in &plan.study_at {
        g.remove_study_at(p, o)?;
    }
    for &(p, o) in &plan.work_at {
        g.remove_work_at(p, o)?;
    }
    for &m in &plan.messages {
        g.remove_message(m)?;
    }
    for &f in &plan.forums {
        g.remove_forum(f)?;
    }
    for &p in &plan.persons {
        g.remove_person(p)?;
    }
    Ok(())
}

/// Plans and applies a cascading delete.
pub fn delete_cascading(g: &mut GraphSnapshot, op: DeleteOp) -> Result<DeletionPlan, ModelError> {
    let plan = deletion_plan(g, op)?;
    apply_plan(g, &plan)?;
    Ok(plan)
}
