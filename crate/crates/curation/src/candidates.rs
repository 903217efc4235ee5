//! Stage one: enumerate bindings per template and attach proxy costs.

use std::collections::{BTreeMap, BTreeSet};

use snbkit_core::{Date, GraphSnapshot, Id, PlaceKind, QueryFamily, QueryTemplateId, ReadQuery};
use snbkit_datagen::{CurationStats, PersonCounts};

use crate::greedy::Candidate;

/// Graph-wide values shared by all templates.
pub struct Context<'a> {
    g: &'a GraphSnapshot,
    stats: &'a CurationStats,
    persons: Vec<Id>,
    countries: Vec<(Id, String)>,
    classes: Vec<(Id, String)>,
    tags: Vec<(Id, String)>,
    /// Messages per creation day.
    days: BTreeMap<Date, u64>,
    first_day: Date,
    last_day: Date,
}

impl<'a> Context<'a> {
    pub fn new(g: &'a GraphSnapshot, stats: &'a CurationStats) -> Context<'a> {
        let mut days = BTreeMap::new();
        for m in g.messages().values() {
            *days.entry(m.creation_date.date()).or_insert(0u64) += 1;
        }
        let fallback = Date::ymd(2010, 1, 1);
        let first_day = days.keys().next().copied().unwrap_or(fallback);
        let last_day = days.keys().next_back().copied().unwrap_or(fallback);
        Context {
            g,
            stats,
            persons: g.persons().keys().copied().collect(),
            countries: g.places().values().filter(|p| p.kind == PlaceKind::Country).map(|p| (p.id, p.name.clone())).collect(),
            classes: g.tag_classes().values().map(|c| (c.id, c.name.clone())).collect(),
            tags: g.tags().values().map(|t| (t.id, t.name.clone())).collect(),
            days,
            first_day,
            last_day,
        }
    }

    fn counts(&self, p: Id) -> PersonCounts {
        self.stats.persons.get(&p).copied().unwrap_or_default()
    }

    fn country_persons(&self, c: Id) -> u64 {
        self.stats.country_persons.get(&c).copied().unwrap_or(0)
    }

    fn country_messages(&self, c: Id) -> u64 {
        self.stats.country_messages.get(&c).copied().unwrap_or(0)
    }

    fn class_messages(&self, c: Id) -> u64 {
        self.stats.tag_class_messages.get(&c).copied().unwrap_or(0)
    }

    fn tag_messages(&self, t: Id) -> u64 {
        self.stats.tag_messages.get(&t).copied().unwrap_or(0)
    }

    fn messages_between(&self, from: Date, to: Date) -> u64 {
        if from > to {
            return 0;
        }
        self.days.range(from..=to).map(|(_, n)| n).sum()
    }

    fn span_days(&self) -> i64 {
        self.last_day.days_since_epoch() - self.first_day.days_since_epoch() + 1
    }

    fn mid_day(&self) -> Date {
        self.first_day.add_days(self.span_days() / 2)
    }

    fn root_class(&self) -> String {
        self.g
            .tag_classes()
            .values()
            .find(|c| c.parent.is_none())
            .map(|c| c.name.clone())
            .unwrap_or_default()
    }

    fn top_tag(&self) -> String {
        self.tags
            .iter()
            .max_by_key(|(id, _)| (self.tag_messages(*id), std::cmp::Reverse(*id)))
            .map(|(_, n)| n.clone())
            .unwrap_or_default()
    }

    /// Countries by descending message count.
    fn busiest_countries(&self) -> Vec<String> {
        let mut c: Vec<&(Id, String)> = self.countries.iter().collect();
        c.sort_by_key(|(id, _)| (std::cmp::Reverse(self.country_messages(*id)), *id));
        c.into_iter().map(|(_, n)| n.clone()).collect()
    }

    fn country_name(&self, person: Id) -> String {
        self.g.country_of_person(person).and_then(|c| self.g.place(c)).map(|p| p.name.clone()).unwrap_or_default()
    }

    /// Persons exactly two hops away, ascending.
    fn second_circle(&self, p: Id) -> BTreeSet<Id> {
        let friends = self.g.friends(p);
        friends
            .keys()
            .flat_map(|f| self.g.friends(*f).keys().copied())
            .filter(|q| *q != p && !friends.contains_key(q))
            .collect()
    }

    /// A second person for pair templates, preferring one two hops away.
    fn partner(&self, i: usize) -> Id {
        let p = self.persons[i];
        self.second_circle(p)
            .first()
            .or_else(|| self.g.friends(p).keys().next())
            .copied()
            .unwrap_or(self.persons[(i + self.persons.len() / 2) % self.persons.len()])
    }

    fn name_near(&self, p: Id) -> String {
        let q = self.second_circle(p).first().or_else(|| self.g.friends(p).keys().next()).copied().unwrap_or(p);
        self.g.person(q).map(|x| x.first_name.clone()).unwrap_or_default()
    }

    fn languages(&self) -> Vec<String> {
        let mut freq: BTreeMap<&str, u64> = BTreeMap::new();
        for p in self.g.persons().values() {
            for l in &p.languages {
                *freq.entry(l).or_default() += 1;
            }
        }
        let mut v: Vec<(&str, u64)> = freq.into_iter().collect();
        v.sort_by_key(|(l, n)| (std::cmp::Reverse(*n), *l));
        v.into_iter().take(3).map(|(l, _)| l.to_string()).collect()
    }

    fn blacklist(&self) -> Vec<String> {
        self.g
            .messages()
            .values()
            .find_map(|m| m.content.split_whitespace().next())
            .map(|w| vec![w.to_string()])
            .unwrap_or_default()
    }

    fn month_starts(&self) -> Vec<Date> {
        let mut out = Vec::new();
        let mut d = Date::ymd(self.first_day.year(), self.first_day.month(), 1);
        while d <= self.last_day {
            out.push(d);
            d = next_month(d);
        }
        out
    }

    fn per_person(&self, f: impl Fn(usize, Id, PersonCounts) -> (ReadQuery, u64)) -> Vec<Candidate> {
        self.persons
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                let (query, cost) = f(i, p, self.counts(p));
                Candidate { query, cost }
            })
            .collect()
    }

    fn per_country(&self, f: impl Fn(&str, Id) -> (ReadQuery, u64)) -> Vec<Candidate> {
        self.countries
            .iter()
            .map(|(id, name)| {
                let (query, cost) = f(name, *id);
                Candidate { query, cost }
            })
            .collect()
    }

    fn per_country_pair(&self, f: impl Fn(&str, &str) -> ReadQuery, cost: impl Fn(Id, Id) -> u64) -> Vec<Candidate> {
        let mut out = Vec::new();
        for (a, an) in &self.countries {
            for (b, bn) in &self.countries {
                if a != b {
                    out.push(Candidate { query: f(an, bn), cost: cost(*a, *b) });
                }
            }
        }
        out
    }

    fn per_class_pair(&self, f: impl Fn(&str, &str) -> ReadQuery) -> Vec<Candidate> {
        let mut out = Vec::new();
        for (a, an) in &self.classes {
            for (b, bn) in &self.classes {
                if a != b {
                    out.push(Candidate { query: f(an, bn), cost: self.class_messages(*a) + self.class_messages(*b) });
                }
            }
        }
        out
    }

    fn per_tag(&self, f: impl Fn(&str) -> ReadQuery) -> Vec<Candidate> {
        self.tags.iter().map(|(id, name)| Candidate { query: f(name), cost: self.tag_messages(*id) }).collect()
    }

    fn per_day(&self, f: impl Fn(Date) -> ReadQuery, cost: impl Fn(Date) -> u64) -> Vec<Candidate> {
        self.days.keys().map(|&d| Candidate { query: f(d), cost: cost(d) }).collect()
    }

    fn pair_cost(&self, i: usize) -> u64 {
        self.counts(self.persons[i]).within_three_hops + self.counts(self.partner(i)).within_three_hops
    }
}

fn next_month(d: Date) -> Date {
    if d.month() == 12 {
        Date::ymd(d.year() + 1, 1, 1)
    } else {
        Date::ymd(d.year(), d.month() + 1, 1)
    }
}

/// All bindings considered for `t`, each with its proxy cost.
pub fn candidates(ctx: &Context<'_>, t: QueryTemplateId) -> Vec<Candidate> {
    use QueryFamily::*;
    use ReadQuery::*;
    let (first, last, mid) = (ctx.first_day, ctx.last_day, ctx.mid_day());
    match (t.family, t.number) {
        (Ic, 1) => ctx.per_person(|_, p, c| (Ic1 { person_id: p, first_name: ctx.name_near(p) }, c.within_three_hops)),
        (Ic, 2) => ctx.per_person(|_, p, c| (Ic2 { person_id: p, max_date: last }, c.friend_messages)),
        (Ic, 3) => {
            let busy = ctx.busiest_countries();
            let x = busy.first().cloned().unwrap_or_default();
            let y = busy.get(1).cloned().unwrap_or_default();
            ctx.per_person(|_, p, c| {
                let q = Ic3 {
                    person_id: p,
                    country_x: x.clone(),
                    country_y: y.clone(),
                    start_date: first,
                    duration_days: ctx.span_days(),
                };
                (q, c.two_hop_messages)
            })
        }
        (Ic, 4) => ctx.per_person(|_, p, c| {
            (Ic4 { person_id: p, start_date: mid, duration_days: (ctx.span_days() / 2).max(1) }, c.friend_messages)
        }),
        (Ic, 5) => ctx.per_person(|_, p, c| (Ic5 { person_id: p, min_date: first }, c.two_hop_messages)),
        (Ic, 6) => {
            let tag = ctx.top_tag();
            ctx.per_person(|_, p, c| (Ic6 { person_id: p, tag_name: tag.clone() }, c.two_hop_messages))
        }
        (Ic, 7) => ctx.per_person(|_, p, c| (Ic7 { person_id: p }, c.messages)),
        (Ic, 8) => ctx.per_person(|_, p, c| (Ic8 { person_id: p }, c.messages)),
        (Ic, 9) => ctx.per_person(|_, p, c| (Ic9 { person_id: p, max_date: last }, c.two_hop_messages)),
        (Ic, 10) => ctx.per_person(|_, p, c| {
            let month = ctx.g.person(p).map_or(1, |x| x.birthday.month()) as i64;
            (Ic10 { person_id: p, month }, c.friends_of_friends)
        }),
        (Ic, 11) => ctx.per_person(|_, p, c| {
            let q = Ic11 { person_id: p, country_name: ctx.country_name(p), work_from_year: last.year() as i64 + 1 };
            (q, c.friends + c.friends_of_friends)
        }),
        (Ic, 12) => {
            let root = ctx.root_class();
            ctx.per_person(|_, p, c| (Ic12 { person_id: p, tag_class_name: root.clone() }, c.friend_messages))
        }
        (Ic, 13) => ctx.per_person(|i, p, _| (Ic13 { person1_id: p, person2_id: ctx.partner(i) }, ctx.pair_cost(i))),
        (Ic, 14) => ctx.per_person(|i, p, _| (Ic14 { person1_id: p, person2_id: ctx.partner(i) }, ctx.pair_cost(i))),
        (Is, 1) => ctx.per_person(|_, p, _| (Is1 { person_id: p }, 1)),
        (Is, 2) => ctx.per_person(|_, p, c| (Is2 { person_id: p }, c.messages)),
        (Is, 3) => ctx.per_person(|_, p, c| (Is3 { person_id: p }, c.friends)),
        (Is, n @ 4..=7) => ctx
            .g
            .messages()
            .keys()
            .map(|&m| {
                let query = match n {
                    4 => Is4 { message_id: m },
                    5 => Is5 { message_id: m },
                    6 => Is6 { message_id: m },
                    _ => Is7 { message_id: m },
                };
                let cost = if n == 7 { ctx.g.replies_to(m).len() as u64 } else { 1 };
                Candidate { query, cost }
            })
            .collect(),
        (Bi, 1) => ctx.per_day(|d| Bi1 { date: d }, |d| ctx.messages_between(first, d)),
        (Bi, 2) => ctx.per_country_pair(
            |a, b| Bi2 { start_date: first, end_date: last, country1: a.into(), country2: b.into() },
            |a, b| ctx.country_messages(a) + ctx.country_messages(b),
        ),
        (Bi, 3) => ctx
            .month_starts()
            .into_iter()
            .map(|d| Candidate {
                query: Bi3 { year: d.year() as i64, month: d.month() as i64 },
                cost: ctx.messages_between(d, next_month(next_month(d)).add_days(-1)),
            })
            .collect(),
        (Bi, 4) => {
            let mut out = Vec::new();
            for (tc, tn) in &ctx.classes {
                for (c, cn) in &ctx.countries {
                    out.push(Candidate {
                        query: Bi4 { tag_class: tn.clone(), country: cn.clone() },
                        cost: ctx.country_persons(*c) * (ctx.class_messages(*tc) + 1),
                    });
                }
            }
            out
        }
        (Bi, 5) => ctx.per_country(|n, c| (Bi5 { country: n.into() }, ctx.country_persons(c))),
        (Bi, 6) => ctx.per_tag(|n| Bi6 { tag: n.into() }),
        (Bi, 7) => ctx.per_tag(|n| Bi7 { tag: n.into() }),
        (Bi, 8) => ctx.per_tag(|n| Bi8 { tag: n.into() }),
        (Bi, 9) => ctx.per_class_pair(|a, b| Bi9 { tag_class1: a.into(), tag_class2: b.into(), threshold: 2 }),
        (Bi, 10) => ctx.per_tag(|n| Bi10 { tag: n.into(), date: mid }),
        (Bi, 11) => {
            let blacklist = ctx.blacklist();
            ctx.per_country(|n, c| (Bi11 { country: n.into(), blacklist: blacklist.clone() }, ctx.country_messages(c)))
        }
        (Bi, 12) => ctx.per_day(|d| Bi12 { date: d, like_threshold: 1 }, |d| ctx.messages_between(d, last)),
        (Bi, 13) => ctx.per_country(|n, c| (Bi13 { country: n.into() }, ctx.country_messages(c))),
        (Bi, 14) => ctx
            .month_starts()
            .into_iter()
            .map(|d| {
                let end = next_month(d).add_days(-1);
                Candidate { query: Bi14 { start_date: d, end_date: end }, cost: ctx.messages_between(d, end) }
            })
            .collect(),
        (Bi, 15) => ctx.per_country(|n, c| (Bi15 { country: n.into() }, ctx.country_persons(c))),
        (Bi, 16) => {
            let root = ctx.root_class();
            ctx.per_person(|_, p, c| {
                let q = Bi16 {
                    person_id: p,
                    country: ctx.country_name(p),
                    tag_class: root.clone(),
                    min_path_distance: 1,
                    max_path_distance: 3,
                };
                (q, c.within_three_hops)
            })
        }
        (Bi, 17) => ctx.per_country(|n, c| (Bi17 { country: n.into() }, ctx.country_persons(c))),
        (Bi, 18) => {
            let languages = ctx.languages();
            ctx.per_day(
                |d| Bi18 { date: d, length_threshold: 20, languages: languages.clone() },
                |d| ctx.messages_between(d, last),
            )
        }
        (Bi, 19) => {
            let born = ctx.g.persons().values().map(|p| p.birthday).min().unwrap_or(first);
            ctx.per_class_pair(|a, b| Bi19 { date: born, tag_class1: a.into(), tag_class2: b.into() })
        }
        (Bi, 20) => {
            let mut out: Vec<Candidate> = ctx
                .classes
                .iter()
                .map(|(id, n)| Candidate { query: Bi20 { tag_classes: vec![n.clone()] }, cost: ctx.class_messages(*id) })
                .collect();
            out.extend(ctx.per_class_pair(|a, b| Bi20 { tag_classes: vec![a.into(), b.into()] }));
            out
        }
        (Bi, 21) => ctx.per_country(|n, c| (Bi21 { country: n.into(), end_date: last }, ctx.country_persons(c))),
        (Bi, 22) => ctx.per_country_pair(
            |a, b| Bi22 { country1: a.into(), country2: b.into() },
            |a, b| ctx.country_persons(a) * ctx.country_persons(b),
        ),
        (Bi, 23) => ctx.per_country(|n, c| (Bi23 { country: n.into() }, ctx.country_persons(c))),
        (Bi, 24) => ctx
            .classes
            .iter()
            .map(|(id, n)| Candidate { query: Bi24 { tag_class: n.clone() }, cost: ctx.class_messages(*id) })
            .collect(),
        (Bi, 25) => ctx.per_person(|i, p, _| {
            (Bi25 { person1_id: p, person2_id: ctx.partner(i), start_date: first, end_date: last }, ctx.pair_cost(i))
        }),
        _ => Vec::new(),
    }
}
