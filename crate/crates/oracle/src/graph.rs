//! Brute-force graph computations used as references.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use snbkit_core::{DateTime, Id};

pub type AdjacencyList = BTreeMap<Id, BTreeSet<Id>>;

fn has_edge(g: &AdjacencyList, a: Id, b: Id) -> bool {
    g.get(&a).is_some_and(|s| s.contains(&b))
}

/// All-pairs hop distances by Floyd-Warshall; `None` marks unreachable pairs.
pub fn floyd_warshall(g: &AdjacencyList) -> BTreeMap<(Id, Id), Option<u64>> {
    let nodes: Vec<Id> = g.keys().copied().collect();
    let n = nodes.len();
    let inf = u64::MAX / 4;
    let mut d = vec![vec![inf; n]; n];
    for i in 0..n {
        d[i][i] = 0;
        for j in 0..n {
            if i != j && has_edge(g, nodes[i], nodes[j]) {
                d[i][j] = 1;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    let mut out = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            out.insert((nodes[i], nodes[j]), (d[i][j] < inf).then_some(d[i][j]));
        }
    }
    out
}

/// Every simple path from `a` to `b` with exactly `len` edges.
fn paths_of_length(g: &AdjacencyList, a: Id, b: Id, len: usize) -> Vec<Vec<Id>> {
    fn go(g: &AdjacencyList, b: Id, len: usize, path: &mut Vec<Id>, out: &mut Vec<Vec<Id>>) {
        let u = *path.last().unwrap();
        if path.len() - 1 == len {
            if u == b {
                out.push(path.clone());
            }
            return;
        }
        for &v in g.get(&u).into_iter().flatten() {
            if !path.contains(&v) {
                path.push(v);
                go(g, b, len, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(g, b, len, &mut vec![a], &mut out);
    out
}

fn connected(g: &AdjacencyList, a: Id, b: Id) -> bool {
    let mut seen = BTreeSet::from([a]);
    let mut stack = vec![a];
    while let Some(u) = stack.pop() {
        for &v in g.get(&u).into_iter().flatten() {
            if seen.insert(v) {
                stack.push(v);
            }
        }
    }
    seen.contains(&b)
}

/// Shortest paths found by iterative deepening over simple paths.
pub fn exhaustive_shortest_paths(g: &AdjacencyList, a: Id, b: Id) -> Vec<Vec<Id>> {
    if !g.contains_key(&a) || !g.contains_key(&b) || !connected(g, a, b) {
        return Vec::new();
    }
    for len in 0..g.len() {
        let mut found = paths_of_length(g, a, b, len);
        if !found.is_empty() {
            found.sort();
            return found;
        }
    }
    Vec::new()
}

/// Shortest paths scored by summing `weight` over consecutive pairs, ordered
/// by weight descending then by vertex sequence.
pub fn exhaustive_weighted_paths(
    g: &AdjacencyList,
    a: Id,
    b: Id,
    weight: impl Fn(Id, Id) -> f64,
) -> Vec<(Vec<Id>, f64)> {
    let mut out: Vec<(Vec<Id>, f64)> = exhaustive_shortest_paths(g, a, b)
        .into_iter()
        .map(|p| {
            let mut w = 0.0;
            for i in 1..p.len() {
                w += weight(p[i - 1].min(p[i]), p[i - 1].max(p[i]));
            }
            (p, w)
        })
        .collect();
    out.sort_by(|x, y| y.1.partial_cmp(&x.1).unwrap().then(x.0.cmp(&y.0)));
    out
}

/// Endpoints (other than `start`) of every trail from `start` whose length is
/// in `[min_len, max_len]`, found by enumerating all trails.
pub fn exhaustive_trail_endpoints(g: &AdjacencyList, start: Id, min_len: u32, max_len: u32) -> BTreeSet<Id> {
    fn go(
        g: &AdjacencyList,
        u: Id,
        len: u32,
        bounds: (u32, u32),
        used: &mut Vec<(Id, Id)>,
        out: &mut BTreeSet<Id>,
    ) {
        if len >= bounds.0 && len <= bounds.1 {
            out.insert(u);
        }
        if len == bounds.1 {
            return;
        }
        for &v in g.get(&u).into_iter().flatten() {
            let e = (u.min(v), u.max(v));
            if !used.contains(&e) {
                used.push(e);
                go(g, v, len + 1, bounds, used, out);
                used.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    if min_len <= max_len {
        go(g, start, 0, (min_len, max_len), &mut Vec::new(), &mut out);
    }
    out.remove(&start);
    out
}

/// Triangles among `nodes` by checking every ordered triple.
pub fn brute_force_triangles(g: &AdjacencyList, nodes: &BTreeSet<Id>) -> u64 {
    let v: Vec<Id> = nodes.iter().copied().collect();
    let mut count = 0;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            for k in j + 1..v.len() {
                if has_edge(g, v[i], v[j]) && has_edge(g, v[j], v[k]) && has_edge(g, v[i], v[k]) {
                    count += 1;
                }
            }
        }
    }
    count
}

/// Counts distinct (year, month) pairs visited by walking day by day.
pub fn months_by_day_walk(from: DateTime, to: DateTime) -> i64 {
    if to < from {
        return 0;
    }
    let mut day = from.date();
    let end = to.date();
    let mut seen = BTreeSet::new();
    loop {
        seen.insert((day.year(), day.month()));
        if day == end {
            break;
        }
        day = day.succ();
    }
    seen.len() as i64
}

/// An undirected G(n, p) graph on vertices `0..n`.
pub fn random_graph(n: u64, edge_prob: f64, seed: u64) -> AdjacencyList {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g: AdjacencyList = (0..n).map(|v| (v, BTreeSet::new())).collect();
    for a in 0..n {
        for b in a + 1..n {
            if rng.random_bool(edge_prob) {
                g.get_mut(&a).expect("vertex").insert(b);
                g.get_mut(&b).expect("vertex").insert(a);
            }
        }
    }
    g
}
