//! Assembling the full network and cutting it into a bulk snapshot plus
//! timestamped insert and delete streams.

use std::collections::BTreeSet;

use snbkit_core::{
    deletion_plan, events::sort_updates, DateTime, DeleteEvent, DeleteOp, ForumKind, GraphSnapshot, Id, ModelError,
    PersonInsert, UpdateEvent, UpdateOp,
};

use crate::activity::Activity;
use crate::config::GeneratorConfig;
use crate::knows::KnowsEdge;
use crate::persons::PersonRecord;
use crate::rng::{after, key_hash, substream, Stream};

/// The undivided network.
pub fn assemble(
    static_graph: &GraphSnapshot,
    persons: &[PersonRecord],
    knows: &[KnowsEdge],
    activity: &Activity,
) -> Result<GraphSnapshot, ModelError> {
    let mut g = static_graph.clone();
    for p in persons {
        g.insert_person(p.person.clone())?;
        for &t in &p.interests {
            g.insert_interest(p.person.id, t)?;
        }
        for (&o, &y) in &p.study_at {
            g.insert_study_at(p.person.id, o, y)?;
        }
        for (&o, &y) in &p.work_at {
            g.insert_work_at(p.person.id, o, y)?;
        }
    }
    for e in knows {
        g.insert_knows(e.a, e.b, e.date)?;
    }
    for f in &activity.forums {
        g.insert_forum(f.clone())?;
    }
    for &(f, p, t) in &activity.memberships {
        g.insert_membership(f, p, t)?;
    }
    for m in &activity.messages {
        g.insert_message(m.clone())?;
    }
    for &(p, m, t) in &activity.likes {
        g.insert_like(p, m, t)?;
    }
    Ok(g)
}

pub fn person_insert(g: &GraphSnapshot, id: Id) -> PersonInsert {
    PersonInsert {
        person: g.person(id).expect("person exists").clone(),
        interests: g.interests_of(id).clone(),
        study_at: g.study_of(id).clone(),
        work_at: g.work_of(id).clone(),
    }
}

fn created(g: &GraphSnapshot, person: Id) -> DateTime {
    g.person(person).expect("person exists").creation_date
}

/// Everything created before `cut` forms the snapshot; the rest becomes
/// insert events ordered by time. Each event's dependency time is the
/// creation time of the latest entity it references (`start` for persons,
/// which reference only static entities).
pub fn split_dataset(full: &GraphSnapshot, cut: DateTime, start: DateTime) -> (GraphSnapshot, Vec<UpdateEvent>) {
    let ok = "full graph is consistent";
    let mut s = GraphSnapshot::new();
    for p in full.places().values() {
        s.insert_place(p.clone()).expect(ok);
    }
    for o in full.organisations().values() {
        s.insert_organisation(o.clone()).expect(ok);
    }
    for c in full.tag_classes().values() {
        s.insert_tag_class(c.clone()).expect(ok);
    }
    for t in full.tags().values() {
        s.insert_tag(t.clone()).expect(ok);
    }
    let mut events = Vec::new();
    let mut push = |time: DateTime, dependency_time: DateTime, op: UpdateOp| {
        events.push(UpdateEvent { time, dependency_time, op });
    };

    for p in full.persons().values() {
        if p.creation_date < cut {
            let ins = person_insert(full, p.id);
            s.insert_person(ins.person).expect(ok);
            for t in ins.interests {
                s.insert_interest(p.id, t).expect(ok);
            }
            for (o, y) in ins.study_at {
                s.insert_study_at(p.id, o, y).expect(ok);
            }
            for (o, y) in ins.work_at {
                s.insert_work_at(p.id, o, y).expect(ok);
            }
        } else {
            push(p.creation_date, start.min(p.creation_date), UpdateOp::AddPerson(person_insert(full, p.id)));
        }
    }
    for (&(a, b), &date) in &full.edges().knows {
        if date < cut {
            s.insert_knows(a, b, date).expect(ok);
        } else {
            let dep = created(full, a).max(created(full, b));
            push(date, dep, UpdateOp::AddKnows { person1: a, person2: b, date });
        }
    }
    for f in full.forums().values() {
        if f.creation_date < cut {
            s.insert_forum(f.clone()).expect(ok);
        } else {
            push(f.creation_date, created(full, f.moderator), UpdateOp::AddForum(f.clone()));
        }
    }
    for (&(forum, person), &date) in &full.edges().members {
        if date < cut {
            s.insert_membership(forum, person, date).expect(ok);
        } else {
            let dep = created(full, person).max(full.forum(forum).expect(ok).creation_date);
            push(date, dep, UpdateOp::AddMembership { forum, person, date });
        }
    }
    for m in full.messages().values() {
        if m.creation_date < cut {
            s.insert_message(m.clone()).expect(ok);
            continue;
        }
        let mut dep = created(full, m.creator);
        let op = match m.reply_of() {
            Some(parent) => {
                dep = dep.max(full.message(parent).expect(ok).creation_date);
                UpdateOp::AddComment(m.clone())
            }
            None => {
                let forum = m.forum().expect("posts have a forum");
                dep = dep.max(full.forum(forum).expect(ok).creation_date);
                if let Some(&join) = full.members_of(forum).get(&m.creator) {
                    dep = dep.max(join);
                }
                UpdateOp::AddPost(m.clone())
            }
        };
        push(m.creation_date, dep, op);
    }
    for (&(person, message), &date) in &full.edges().likes {
        if date < cut {
            s.insert_like(person, message, date).expect(ok);
            continue;
        }
        let msg = full.message(message).expect(ok);
        let dep = created(full, person).max(msg.creation_date);
        let op = if msg.is_post() {
            UpdateOp::AddLikePost { person, post: message, date }
        } else {
            UpdateOp::AddLikeComment { person, comment: message, date }
        };
        push(date, dep, op);
    }
    sort_updates(&mut events);
    (s, events)
}

/// Picks about `delete_fraction` of persons, forums, posts and comments to
/// delete after the cut. Each delete happens after every element it would
/// remove was created, and the selected deletes touch disjoint parts of the
/// graph so they commute with each other and with later inserts.
pub fn select_deletes(full: &GraphSnapshot, cfg: &GeneratorConfig) -> Vec<DeleteEvent> {
    if cfg.delete_fraction <= 0.0 {
        return Vec::new();
    }
    let (cut, end) = (cfg.cut(), cfg.end());
    let kinds: [(u64, Vec<DeleteOp>); 4] = [
        (1, full.persons().keys().map(|&id| DeleteOp::Person(id)).collect()),
        (2, full.forums().keys().map(|&id| DeleteOp::Forum(id)).collect()),
        (3, full.messages().values().filter(|m| m.is_post()).map(|m| DeleteOp::Post(m.id)).collect()),
        (4, full.messages().values().filter(|m| m.is_comment()).map(|m| DeleteOp::Comment(m.id)).collect()),
    ];
    let mut touched_persons = BTreeSet::new();
    let mut touched_forums = BTreeSet::new();
    let mut touched_messages = BTreeSet::new();
    let mut out = Vec::new();
    for (kind, mut candidates) in kinds {
        let quota = (candidates.len() as f64 * cfg.delete_fraction).round() as usize;
        candidates.sort_by_key(|op| (key_hash(cfg.seed, Stream::Delete, (kind << 56) ^ op.target()), op.target()));
        let mut taken = 0;
        for op in candidates {
            if taken == quota {
                break;
            }
            let plan = deletion_plan(full, op).expect("candidate exists");
            let mut forums: BTreeSet<Id> = plan.forums.iter().chain(plan.new_moderators.keys()).copied().collect();
            for &p in &plan.persons {
                forums.extend(
                    full.forums_of_member(p).iter().filter(|f| full.forum(**f).is_some_and(|f| f.kind() == ForumKind::Group)),
                );
            }
            let heirs: BTreeSet<Id> = plan.new_moderators.values().copied().collect();
            if plan.persons.iter().chain(&heirs).any(|p| touched_persons.contains(p))
                || forums.iter().any(|f| touched_forums.contains(f))
                || plan.messages.iter().any(|m| touched_messages.contains(m))
            {
                continue;
            }
            let latest = plan.latest_activity(full).expect("plan removes its target").max(cut);
            let mut rng = substream(cfg.seed, Stream::Delete, kind, op.target());
            let Some(time) = after(&mut rng, latest, 3_600_000, 30 * 86_400_000, end) else { continue };
            touched_persons.extend(plan.persons.iter().chain(&heirs).copied());
            touched_forums.extend(forums);
            touched_messages.extend(plan.messages.iter().copied());
            out.push(DeleteEvent { time, dependency_time: plan.latest_activity(full).expect("non-empty"), op });
            taken += 1;
        }
    }
    out.sort_by_key(|e| (e.time, e.op.op_id(), e.op.target()));
    out
}
