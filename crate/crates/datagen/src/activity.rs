//! Forums, posts, comments and likes.
//!
//! Each person's activity bundle (its wall, albums and groups, with every
//! message and like inside them) is generated from that person's own random
//! stream, so bundles can be built in parallel and concatenated in person
//! order. Ids are assigned during concatenation.

use std::collections::{BTreeSet, HashMap};

use rand::seq::{IndexedRandom, IteratorRandom};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use snbkit_core::{
    text_length, DateTime, Forum, Id, Message, MessageKind, ALBUM_TITLE_PREFIX, GROUP_TITLE_PREFIX, WALL_TITLE_PREFIX,
};

use crate::config::{FlashmobEvent, GeneratorConfig};
use crate::dictionaries::Dictionaries;
use crate::knows::KnowsEdge;
use crate::persons::PersonRecord;
use crate::rng::{after, poisson, strictly_between, stream, substream, Stream};
use crate::world::World;

const MINUTE: i64 = 60_000;
const HOUR: i64 = 60 * MINUTE;
const DAY: i64 = 24 * HOUR;

/// Generated activity with final ids.
#[derive(Clone, Debug, Default)]
pub struct Activity {
    pub forums: Vec<Forum>,
    /// `(forum, person, join date)`.
    pub memberships: Vec<(Id, Id, DateTime)>,
    pub messages: Vec<Message>,
    /// `(person, message, date)`.
    pub likes: Vec<(Id, Id, DateTime)>,
}

/// Flashmob events: the configured ones, or `flashmob_count` random ones.
pub fn flashmob_events(cfg: &GeneratorConfig, world: &World) -> Vec<FlashmobEvent> {
    if !cfg.flashmobs.is_empty() {
        return cfg.flashmobs.clone();
    }
    (0..cfg.flashmob_count as u64)
        .map(|k| {
            let mut rng = stream(cfg.seed, Stream::Flashmob, k);
            FlashmobEvent {
                tag: *world.tags.choose(&mut rng).expect("tags exist"),
                peak: strictly_between(&mut rng, cfg.start(), cfg.end()).expect("window spans years"),
                intensity: rng.random_range(1.0..10.0),
            }
        })
        .collect()
}

/// Friends of each person (by index) with the knows date.
pub fn friend_lists(persons: &[PersonRecord], knows: &[KnowsEdge]) -> Vec<Vec<(usize, DateTime)>> {
    let index: HashMap<Id, usize> = persons.iter().enumerate().map(|(i, p)| (p.person.id, i)).collect();
    let mut out = vec![Vec::new(); persons.len()];
    for e in knows {
        let (a, b) = (index[&e.a], index[&e.b]);
        out[a].push((b, e.date));
        out[b].push((a, e.date));
    }
    for l in &mut out {
        l.sort_unstable();
    }
    out
}

struct Ctx<'a> {
    cfg: &'a GeneratorConfig,
    world: &'a World,
    dicts: &'a Dictionaries,
    persons: &'a [PersonRecord],
    friends: &'a [Vec<(usize, DateTime)>],
    flashmobs: &'a [FlashmobEvent],
    flashmob_weights: f64,
    end: DateTime,
}

/// Messages and forums use indices local to the bundle until concatenation.
#[derive(Default)]
struct Bundle {
    forums: Vec<Forum>,
    memberships: Vec<(usize, Id, DateTime)>,
    /// Message with `id` unset; `kind` holds a local forum or local parent index.
    messages: Vec<Message>,
    likes: Vec<(Id, usize, DateTime)>,
}

/// Who may write in a forum and since when.
type Pool = Vec<(usize, DateTime)>;

impl Ctx<'_> {
    fn text<R: Rng>(&self, rng: &mut R, topic: Option<Id>, words: usize) -> String {
        let mut out: Vec<&str> = Vec::with_capacity(words + 2);
        if let Some(t) = topic {
            out.push("About");
            out.push(&self.world.graph.tag(t).expect("tag").name);
        }
        for _ in 0..words {
            out.push(self.dicts.words.choose(rng).expect("words"));
        }
        out.join(" ")
    }

    /// Country and IP for a message by `author`; one in ten is written abroad.
    fn location<R: Rng>(&self, rng: &mut R, author: usize) -> (Id, String) {
        let p = &self.persons[author];
        if rng.random_bool(0.1) {
            let c = self.world.countries.choose(rng).expect("countries");
            if c.id != p.country {
                return (c.id, format!("{}.{}.{}", c.ip_prefix, rng.random_range(0..=255), rng.random_range(1..=254)));
            }
        }
        (p.country, p.person.location_ip.clone())
    }

    fn tags_for<R: Rng>(&self, rng: &mut R, base: Id) -> BTreeSet<Id> {
        let mut tags = BTreeSet::from([base]);
        if rng.random_bool(self.cfg.tag_enrichment) {
            let class = self.world.graph.tag(base).expect("tag").tag_class;
            if let Some(t) = self.world.tags_by_class.get(&class).and_then(|v| v.choose(rng)) {
                tags.insert(*t);
            }
        }
        tags
    }

    /// Post time after `lo`: usually uniform, sometimes from a flashmob spike.
    /// Returns the time and the flashmob tag when one was used.
    fn post_time<R: Rng>(&self, rng: &mut R, lo: DateTime) -> Option<(DateTime, Option<Id>)> {
        if !self.flashmobs.is_empty() && rng.random_bool(self.cfg.flashmob_share) {
            let mut u = rng.random::<f64>() * self.flashmob_weights;
            let mut ev = &self.flashmobs[0];
            for f in self.flashmobs {
                ev = f;
                if u < f.intensity {
                    break;
                }
                u -= f.intensity;
            }
            let shape = rng.random::<f64>() + rng.random::<f64>() - 1.0;
            let t = ev.peak.plus_millis((shape * self.cfg.flashmob_half_width_ms as f64) as i64);
            if t > lo && t < self.end {
                return Some((t, Some(ev.tag)));
            }
        }
        strictly_between(rng, lo, self.end).map(|t| (t, None))
    }

    fn add_post(&self, b: &mut Bundle, rng: &mut ChaCha8Rng, forum: usize, author: usize, time: DateTime, tags: BTreeSet<Id>, image: Option<String>) -> usize {
        let (country, ip) = self.location(rng, author);
        let p = &self.persons[author];
        let (content, language, image_file) = match image {
            Some(file) => (String::new(), String::new(), file),
            None => {
                let topic = tags.iter().next().copied();
                let words = rng.random_range(3..40);
                let lang = p.person.languages.iter().collect::<Vec<_>>().choose(rng).map(|s| s.to_string()).unwrap_or_default();
                (self.text(rng, topic, words), lang, String::new())
            }
        };
        b.messages.push(Message {
            id: 0,
            creation_date: time,
            location_ip: ip,
            browser_used: p.person.browser_used.clone(),
            length: text_length(&content),
            content,
            creator: p.person.id,
            country,
            tags,
            kind: MessageKind::Post { forum: forum as Id, image_file, language },
        });
        b.messages.len() - 1
    }

    /// Comments replying into the thread rooted at local message `root`,
    /// then likes on every message of the thread.
    fn thread(&self, b: &mut Bundle, rng: &mut ChaCha8Rng, root: usize, pool: &Pool) {
        let mut thread = vec![root];
        for _ in 0..poisson(rng, self.cfg.comments_per_post) {
            let parent = *thread.choose(rng).expect("root");
            let &(author, since) = pool.choose(rng).expect("moderator is in the pool");
            let parent_msg = &b.messages[parent];
            let lo = parent_msg.creation_date.max(since);
            let Some(time) = after(rng, lo, MINUTE, 3 * DAY, self.end) else { continue };
            let tags = match rng.random_range(0..10) {
                0..5 => parent_msg.tags.iter().take(1).copied().collect(),
                5..7 => self.persons[author].interests.iter().choose(rng).into_iter().copied().collect(),
                _ => BTreeSet::new(),
            };
            let content = if rng.random_bool(0.5) {
                self.dicts.short_comments.choose(rng).expect("short comments").clone()
            } else {
                let n = rng.random_range(2..20);
                self.text(rng, None, n)
            };
            let (country, ip) = self.location(rng, author);
            let p = &self.persons[author];
            b.messages.push(Message {
                id: 0,
                creation_date: time,
                location_ip: ip,
                browser_used: p.person.browser_used.clone(),
                length: text_length(&content),
                content,
                creator: p.person.id,
                country,
                tags,
                kind: MessageKind::Comment { reply_of: parent as Id },
            });
            thread.push(b.messages.len() - 1);
        }
        for &m in &thread {
            let creator = b.messages[m].creator;
            let created = b.messages[m].creation_date;
            let mut likers = BTreeSet::new();
            for _ in 0..poisson(rng, self.cfg.likes_per_message) {
                let &(who, since) = pool.choose(rng).expect("pool");
                let id = self.persons[who].person.id;
                if id == creator || !likers.insert(id) {
                    continue;
                }
                if let Some(t) = after(rng, created.max(since), MINUTE, 7 * DAY, self.end) {
                    b.likes.push((id, m, t));
                }
            }
        }
    }

    fn join<R: Rng>(&self, rng: &mut R, b: &mut Bundle, pool: &mut Pool, forum: usize, who: usize, lo: DateTime) {
        if let Some(t) = after(rng, lo, MINUTE, 30 * DAY, self.end) {
            b.memberships.push((forum, self.persons[who].person.id, t));
            pool.push((who, t));
        }
    }

    fn bundle(&self, me: usize) -> Bundle {
        let cfg = self.cfg;
        let p = &self.persons[me];
        let pid = p.person.id;
        let created = p.person.creation_date;
        let mut rng = substream(cfg.seed, Stream::Activity, pid, 0);
        let mut b = Bundle::default();
        let name = format!("{} {}", p.person.first_name, p.person.last_name);
        let friends = &self.friends[me];

        // Wall.
        let Some(wall_time) = after(&mut rng, created, MINUTE, HOUR, self.end) else { return b };
        b.forums.push(Forum {
            id: 0,
            title: format!("{WALL_TITLE_PREFIX}{name}"),
            creation_date: wall_time,
            moderator: pid,
            tags: p.interests.clone(),
        });
        let mut pool: Pool = vec![(me, wall_time)];
        for &(f, since) in friends {
            self.join(&mut rng, &mut b, &mut pool, 0, f, since.max(wall_time));
        }
        let interests: Vec<Id> = p.interests.iter().copied().collect();
        let wall_posts = poisson(&mut rng, cfg.activity_floor + cfg.wall_posts_per_friend * friends.len() as f64);
        for _ in 0..wall_posts {
            let Some((time, mob)) = self.post_time(&mut rng, wall_time) else { continue };
            let base = mob.unwrap_or_else(|| *interests.choose(&mut rng).expect("at least one interest"));
            let tags = self.tags_for(&mut rng, base);
            let post = self.add_post(&mut b, &mut rng, 0, me, time, tags, None);
            self.thread(&mut b, &mut rng, post, &pool);
        }

        // Albums.
        for k in 0..poisson(&mut rng, cfg.albums_per_person) {
            let Some(album_time) = strictly_between(&mut rng, created, self.end) else { continue };
            let forum = b.forums.len();
            b.forums.push(Forum {
                id: 0,
                title: format!("{ALBUM_TITLE_PREFIX}{k} of {name}"),
                creation_date: album_time,
                moderator: pid,
                tags: interests.iter().take(1).copied().collect(),
            });
            let mut pool: Pool = vec![(me, album_time)];
            for &(f, since) in friends {
                if rng.random_bool(0.5) {
                    self.join(&mut rng, &mut b, &mut pool, forum, f, since.max(album_time));
                }
            }
            for j in 0..poisson(&mut rng, cfg.photos_per_album) {
                let Some(time) = strictly_between(&mut rng, album_time, self.end) else { continue };
                let tags = interests.choose(&mut rng).into_iter().copied().collect();
                let file = format!("photo{pid}_{k}_{j}.jpg");
                let post = self.add_post(&mut b, &mut rng, forum, me, time, tags, Some(file));
                self.thread(&mut b, &mut rng, post, &pool);
            }
        }

        // Group.
        if rng.random_bool(cfg.group_probability) {
            let topic = *interests.choose(&mut rng).expect("interest");
            let Some(group_time) = strictly_between(&mut rng, created, self.end) else { return b };
            let forum = b.forums.len();
            let tag_name = &self.world.graph.tag(topic).expect("tag").name;
            let city = &self.world.graph.place(p.person.city).expect("city").name;
            b.forums.push(Forum {
                id: 0,
                title: format!("{GROUP_TITLE_PREFIX}{tag_name} in {city}"),
                creation_date: group_time,
                moderator: pid,
                tags: BTreeSet::from([topic]),
            });
            let mut pool: Pool = vec![(me, group_time)];
            let mut invited = BTreeSet::from([me]);
            for &(f, _) in friends {
                if rng.random_bool(0.7) && invited.insert(f) {
                    self.join(&mut rng, &mut b, &mut pool, forum, f, group_time.max(self.persons[f].person.creation_date));
                }
                for &(g, _) in &self.friends[f] {
                    if rng.random_bool(0.05) && invited.insert(g) {
                        self.join(&mut rng, &mut b, &mut pool, forum, g, group_time.max(self.persons[g].person.creation_date));
                    }
                }
            }
            let posts = poisson(&mut rng, cfg.group_posts_per_member * (pool.len() - 1) as f64);
            for _ in 0..posts {
                let &(author, since) = pool.choose(&mut rng).expect("moderator");
                let Some((time, mob)) = self.post_time(&mut rng, since) else { continue };
                let tags = self.tags_for(&mut rng, mob.unwrap_or(topic));
                let post = self.add_post(&mut b, &mut rng, forum, author, time, tags, None);
                self.thread(&mut b, &mut rng, post, &pool);
            }
        }
        b
    }
}

/// Activity for every person, generated in parallel and numbered in person order.
pub fn generate_activity(
    cfg: &GeneratorConfig,
    world: &World,
    dicts: &Dictionaries,
    persons: &[PersonRecord],
    knows: &[KnowsEdge],
    flashmobs: &[FlashmobEvent],
) -> Activity {
    let friends = friend_lists(persons, knows);
    let ctx = Ctx {
        cfg,
        world,
        dicts,
        persons,
        friends: &friends,
        flashmobs,
        flashmob_weights: flashmobs.iter().map(|f| f.intensity).sum(),
        end: cfg.end(),
    };
    let bundles: Vec<Bundle> = (0..persons.len()).into_par_iter().map(|i| ctx.bundle(i)).collect();

    let mut out = Activity::default();
    let (mut forum_base, mut message_base) = (0 as Id, 0 as Id);
    for b in bundles {
        for mut f in b.forums {
            f.id = out.forums.len() as Id;
            out.forums.push(f);
        }
        for (f, p, t) in b.memberships {
            out.memberships.push((forum_base + f as Id, p, t));
        }
        for (local, mut m) in b.messages.into_iter().enumerate() {
            m.id = message_base + local as Id;
            match &mut m.kind {
                MessageKind::Post { forum, .. } => *forum += forum_base,
                MessageKind::Comment { reply_of } => *reply_of += message_base,
            }
            out.messages.push(m);
        }
        for (p, m, t) in b.likes {
            out.likes.push((p, message_base + m as Id, t));
        }
        forum_base = out.forums.len() as Id;
        message_base = out.messages.len() as Id;
    }
    out.memberships.sort_unstable();
    out.likes.sort_unstable();
    out
}
