//! Friendship generation by similarity-windowed passes.
//!
//! Each pass sorts persons by a similarity key and connects each person to
//! others at most `W` ranks ahead. Candidate `k` ranks ahead is proposed with
//! probability `c * (1 - p)^(k - 1)`, so accepted rank distances follow a
//! geometric law truncated to the window. Proposals are independent per
//! person, which keeps a pass parallel and order-free. Persons left over
//! budget then shed random excess edges, and unused budget carries into the
//! next pass.

use std::collections::{BTreeMap, HashSet};

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use snbkit_core::{knows_key, DateTime, Id};

use crate::config::GeneratorConfig;
use crate::persons::PersonRecord;
use crate::rng::{after, key_hash, substream, Stream};

/// Study, interest and random passes, in execution order.
pub const DIMENSIONS: [Dimension; 3] = [Dimension::Study, Dimension::Interest, Dimension::Random];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dimension {
    Study = 0,
    Interest = 1,
    Random = 2,
}

/// Share of a person's pass budget left to persons ranked behind it, when a
/// full window of them exists.
const BACKWARD_SHARE: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KnowsEdge {
    /// Smaller person id.
    pub a: Id,
    pub b: Id,
    pub dimension: Dimension,
    /// Rank distance in the dimension's ordering.
    pub distance: u32,
    pub date: DateTime,
}

/// Totally ordered similarity key; the last component breaks ties by a
/// seeded hash of the person id.
pub type SimilarityKey = (u64, u64, u64);

pub fn similarity_key(p: &PersonRecord, dim: Dimension, seed: u64) -> SimilarityKey {
    let h = key_hash(seed ^ ((dim as u64 + 1) << 56), Stream::RandomKey, p.person.id);
    match dim {
        Dimension::Study => match p.university() {
            Some((u, year)) => (u, year as u64, h),
            None => (u64::MAX, u64::MAX, h),
        },
        Dimension::Interest => (p.main_interest, h, 0),
        Dimension::Random => (h, 0, 0),
    }
}

/// Person indices in rank order for `dim`.
pub fn ranking(persons: &[PersonRecord], dim: Dimension, seed: u64) -> Vec<usize> {
    let mut keyed: Vec<(SimilarityKey, usize)> =
        persons.par_iter().enumerate().map(|(i, p)| (similarity_key(p, dim, seed), i)).collect();
    keyed.par_sort_unstable();
    keyed.into_iter().map(|(_, i)| i).collect()
}

/// Per-candidate proposal intensity for a person with pass budget `budget`,
/// `ahead` reachable ranks ahead and `behind` ranks behind within the window.
/// The backward share shrinks with the geometric mass reachable from behind,
/// so the first-ranked person proposes its whole budget.
fn intensity(budget: u32, ahead: u32, behind: u32, window: u32, r: f64) -> f64 {
    if ahead == 0 {
        return 0.0;
    }
    let from_behind = BACKWARD_SHARE * (1.0 - r.powi(behind as i32)) / (1.0 - r.powi(window as i32));
    ((1.0 - from_behind) * budget as f64 * (1.0 - r) / (1.0 - r.powi(ahead as i32))).min(1.0)
}

/// One windowed pass. `budgets` is indexed like `persons`; `existing` holds
/// edges from earlier passes as `(min id, max id)`. Returned edges carry no
/// date yet (`DateTime::from_millis(0)`).
pub fn knows_pass(
    persons: &[PersonRecord],
    dim: Dimension,
    cfg: &GeneratorConfig,
    budgets: &[u32],
    existing: &HashSet<(Id, Id)>,
) -> Vec<KnowsEdge> {
    let n = persons.len();
    let order = ranking(persons, dim, cfg.seed);
    let r = 1.0 - cfg.geometric_p;
    let w = cfg.window as usize;

    // Proposals, independent per rank.
    let proposals: Vec<Vec<(usize, usize, u32)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let me = order[i];
            let reach = w.min(n - 1 - i);
            let c = intensity(budgets[me], reach as u32, w.min(i) as u32, w as u32, r);
            if c <= 0.0 {
                return Vec::new();
            }
            let mut rng = substream(cfg.seed, Stream::KnowsCandidates, persons[me].person.id, dim as u64);
            let mut out = Vec::new();
            let mut q = c;
            for k in 1..=reach {
                if rng.random::<f64>() < q {
                    let other = order[i + k];
                    let key = knows_key(persons[me].person.id, persons[other].person.id);
                    if !existing.contains(&key) {
                        out.push((me, other, k as u32));
                    }
                }
                q *= r;
            }
            out
        })
        .collect();

    // Adjacency of this pass's proposals, keyed by person index.
    let mut edges: Vec<(usize, usize, u32)> = proposals.into_iter().flatten().collect();
    let mut alive = vec![true; edges.len()];
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, &(a, b, _)) in edges.iter().enumerate() {
        incident[a].push(e);
        incident[b].push(e);
    }
    let mut degree: Vec<u32> = incident.iter().map(|v| v.len() as u32).collect();

    // Trim in rank order.
    for &me in &order {
        if degree[me] <= budgets[me] {
            continue;
        }
        let live: Vec<usize> = incident[me].iter().copied().filter(|&e| alive[e]).collect();
        let excess = (degree[me] - budgets[me]) as usize;
        let mut rng = substream(cfg.seed, Stream::KnowsTrim, persons[me].person.id, dim as u64);
        for pick in sample(&mut rng, live.len(), excess) {
            let e = live[pick];
            alive[e] = false;
            degree[edges[e].0] -= 1;
            degree[edges[e].1] -= 1;
        }
    }

    let mut kept: Vec<KnowsEdge> = edges
        .drain(..)
        .zip(alive)
        .filter(|(_, ok)| *ok)
        .map(|((a, b, k), _)| {
            let (x, y) = knows_key(persons[a].person.id, persons[b].person.id);
            KnowsEdge { a: x, b: y, dimension: dim, distance: k, date: DateTime::from_millis(0) }
        })
        .collect();
    kept.sort_unstable();
    kept
}

/// All three passes plus edge dates. Each pass receives
/// `round(cumulative share * target) - degree so far`; the last pass gets the
/// whole remainder.
pub fn generate_knows(persons: &[PersonRecord], cfg: &GeneratorConfig) -> Vec<KnowsEdge> {
    let n = persons.len();
    let index: BTreeMap<Id, usize> = persons.iter().enumerate().map(|(i, p)| (p.person.id, i)).collect();
    let mut degree = vec![0u32; n];
    let mut existing: HashSet<(Id, Id)> = HashSet::new();
    let mut all = Vec::new();
    let mut cumulative = 0.0;
    for (d, dim) in DIMENSIONS.iter().enumerate() {
        cumulative += cfg.dimension_split[d];
        let last = d == DIMENSIONS.len() - 1;
        let budgets: Vec<u32> = persons
            .iter()
            .zip(&degree)
            .map(|(p, &have)| {
                let goal = if last { p.target_degree } else { (cumulative * p.target_degree as f64).round() as u32 };
                goal.saturating_sub(have)
            })
            .collect();
        let pass = knows_pass(persons, *dim, cfg, &budgets, &existing);
        for e in &pass {
            degree[index[&e.a]] += 1;
            degree[index[&e.b]] += 1;
            existing.insert((e.a, e.b));
        }
        all.extend(pass);
    }
    let end = cfg.end();
    all.par_iter_mut().for_each(|e| {
        let (pa, pb) = (&persons[index[&e.a]], &persons[index[&e.b]]);
        let from = pa.person.creation_date.max(pb.person.creation_date);
        let mut rng = substream(cfg.seed, Stream::KnowsDate, e.a, e.b);
        e.date = after(&mut rng, from, 3_600_000, 30 * 86_400_000, end).expect("persons are created a month before the end");
    });
    all.sort_unstable_by_key(|e| (e.a, e.b));
    all
}
