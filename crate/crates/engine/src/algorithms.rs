//! Graph algorithms over the undirected knows relation.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use snbkit_core::{GraphSnapshot, Id};

pub use snbkit_core::months_between;

/// Undirected adjacency view.
pub trait Adjacency {
    fn neighbors(&self, v: Id) -> Vec<Id>;
    fn contains(&self, v: Id) -> bool;
}

impl Adjacency for GraphSnapshot {
    fn neighbors(&self, v: Id) -> Vec<Id> {
        self.friends(v).keys().copied().collect()
    }
    fn contains(&self, v: Id) -> bool {
        self.person(v).is_some()
    }
}

impl Adjacency for BTreeMap<Id, BTreeSet<Id>> {
    fn neighbors(&self, v: Id) -> Vec<Id> {
        self.get(&v).map(|s| s.iter().copied().collect()).unwrap_or_default()
    }
    fn contains(&self, v: Id) -> bool {
        self.contains_key(&v)
    }
}

/// Hop distance from `src` to every vertex within `max_depth` hops (including `src` at 0).
pub fn bfs_distances<A: Adjacency + ?Sized>(adj: &A, src: Id, max_depth: Option<u32>) -> HashMap<Id, u32> {
    let mut dist = HashMap::from([(src, 0u32)]);
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        let d = dist[&u];
        if max_depth.is_some_and(|m| d >= m) {
            continue;
        }
        for v in adj.neighbors(u) {
            if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(v) {
                e.insert(d + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Hop count of the shortest path; 0 for the same vertex, -1 when unreachable.
pub fn shortest_path_length<A: Adjacency + ?Sized>(adj: &A, a: Id, b: Id) -> i64 {
    if a == b {
        return 0;
    }
    // Bidirectional BFS, expanding the smaller frontier.
    let mut da: HashMap<Id, i64> = HashMap::from([(a, 0)]);
    let mut db: HashMap<Id, i64> = HashMap::from([(b, 0)]);
    let mut fa = vec![a];
    let mut fb = vec![b];
    while !fa.is_empty() && !fb.is_empty() {
        let forward = fa.len() <= fb.len();
        let (front, mine, other) = if forward {
            (&mut fa, &mut da, &db)
        } else {
            (&mut fb, &mut db, &da)
        };
        let mut next = Vec::new();
        let mut best: Option<i64> = None;
        for &u in front.iter() {
            let du = mine[&u];
            for v in adj.neighbors(u) {
                if let Some(dv) = other.get(&v) {
                    let total = du + 1 + dv;
                    best = Some(best.map_or(total, |b: i64| b.min(total)));
                }
                if !mine.contains_key(&v) {
                    mine.insert(v, du + 1);
                    next.push(v);
                }
            }
        }
        if let Some(b) = best {
            return b;
        }
        *front = next;
    }
    -1
}

/// Every shortest path from `a` to `b`, each as a vertex sequence, in
/// lexicographic order. Empty when unreachable; `[[a]]` when `a == b`.
pub fn all_shortest_paths<A: Adjacency + ?Sized>(adj: &A, a: Id, b: Id) -> Vec<Vec<Id>> {
    if a == b {
        return vec![vec![a]];
    }
    let dist_b = bfs_distances(adj, b, None);
    let Some(&total) = dist_b.get(&a) else {
        return Vec::new();
    };
    // Walk forward from `a` along vertices one step closer to `b`.
    let mut out = Vec::new();
    let mut path = vec![a];
    fn walk<A: Adjacency + ?Sized>(adj: &A, dist_b: &HashMap<Id, u32>, path: &mut Vec<Id>, out: &mut Vec<Vec<Id>>) {
        let u = *path.last().expect("non-empty");
        let du = dist_b[&u];
        if du == 0 {
            out.push(path.clone());
            return;
        }
        let mut next: Vec<Id> = adj
            .neighbors(u)
            .into_iter()
            .filter(|v| dist_b.get(v) == Some(&(du - 1)))
            .collect();
        next.sort_unstable();
        for v in next {
            path.push(v);
            walk(adj, dist_b, path, out);
            path.pop();
        }
    }
    walk(adj, &dist_b, &mut path, &mut out);
    debug_assert!(out.iter().all(|p| p.len() == total as usize + 1));
    out
}

/// All shortest paths with their weight, where a path's weight is the sum of
/// `weight(u, v)` over its consecutive pairs. Sorted by weight descending,
/// then by the vertex sequence ascending.
pub fn weighted_shortest_paths<A, W>(adj: &A, a: Id, b: Id, mut weight: W) -> Vec<(Vec<Id>, f64)>
where
    A: Adjacency + ?Sized,
    W: FnMut(Id, Id) -> f64,
{
    let mut cache: HashMap<(Id, Id), f64> = HashMap::new();
    let mut out: Vec<(Vec<Id>, f64)> = all_shortest_paths(adj, a, b)
        .into_iter()
        .map(|p| {
            let w = p
                .windows(2)
                .map(|e| {
                    let key = (e[0].min(e[1]), e[0].max(e[1]));
                    *cache.entry(key).or_insert_with(|| weight(key.0, key.1))
                })
                .sum::<f64>();
            (p, w)
        })
        .collect();
    out.sort_by(|x, y| y.1.total_cmp(&x.1).then_with(|| x.0.cmp(&y.0)));
    out
}

/// Vertices other than `start` at the end of some trail (a walk that uses no
/// edge twice) from `start` whose length lies in `[min_len, max_len]`.
pub fn trail_reachable<A: Adjacency + ?Sized>(adj: &A, start: Id, min_len: u32, max_len: u32) -> BTreeSet<Id> {
    let mut found = BTreeSet::new();
    if max_len == 0 || min_len > max_len {
        return found;
    }
    let dist = bfs_distances(adj, start, Some(max_len));
    // A shortest path is a trail, so anything at distance >= min_len is settled.
    let mut pending: HashSet<Id> = HashSet::new();
    for (&v, &d) in &dist {
        if v == start || d == 0 {
            continue;
        }
        if d >= min_len {
            found.insert(v);
        } else {
            pending.insert(v);
        }
    }
    if pending.is_empty() {
        return found;
    }
    // Closer vertices need a longer detour; search trails for them only.
    let mut used: HashSet<(Id, Id)> = HashSet::new();
    fn dfs<A: Adjacency + ?Sized>(
        adj: &A,
        u: Id,
        len: u32,
        min_len: u32,
        max_len: u32,
        used: &mut HashSet<(Id, Id)>,
        pending: &mut HashSet<Id>,
        found: &mut BTreeSet<Id>,
    ) {
        if len >= min_len && pending.remove(&u) {
            found.insert(u);
        }
        if len == max_len || pending.is_empty() {
            return;
        }
        for v in adj.neighbors(u) {
            let e = (u.min(v), u.max(v));
            if used.insert(e) {
                dfs(adj, v, len + 1, min_len, max_len, used, pending, found);
                used.remove(&e);
            }
        }
    }
    dfs(adj, start, 0, min_len, max_len, &mut used, &mut pending, &mut found);
    found
}

/// Number of distinct triangles in the subgraph induced by `nodes`.
pub fn count_triangles<A: Adjacency + ?Sized>(adj: &A, nodes: &BTreeSet<Id>) -> u64 {
    let local: HashMap<Id, BTreeSet<Id>> = nodes
        .iter()
        .map(|&v| (v, adj.neighbors(v).into_iter().filter(|w| nodes.contains(w)).collect()))
        .collect();
    let mut count = 0;
    for (&u, nu) in &local {
        for &v in nu.range(u + 1..) {
            let nv = &local[&v];
            count += nu.range(v + 1..).filter(|w| nv.contains(w)).count() as u64;
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(edges: &[(Id, Id)]) -> BTreeMap<Id, BTreeSet<Id>> {
        let mut g: BTreeMap<Id, BTreeSet<Id>> = BTreeMap::new();
        for &(a, b) in edges {
            g.entry(a).or_default().insert(b);
            g.entry(b).or_default().insert(a);
        }
        g
    }

    #[test]
    fn path_lengths() {
        let g = graph(&[(1, 2), (2, 3), (3, 4), (5, 6)]);
        assert_eq!(shortest_path_length(&g, 1, 1), 0);
        assert_eq!(shortest_path_length(&g, 1, 4), 3);
        assert_eq!(shortest_path_length(&g, 1, 5), -1);
    }

    #[test]
    fn diamond_has_two_shortest_paths() {
        let g = graph(&[(1, 2), (1, 3), (2, 4), (3, 4)]);
        assert_eq!(all_shortest_paths(&g, 1, 4), vec![vec![1, 2, 4], vec![1, 3, 4]]);
        let w = weighted_shortest_paths(&g, 1, 4, |a, b| if (a, b) == (1, 3) { 1.5 } else { 0.5 });
        assert_eq!(w, vec![(vec![1, 3, 4], 2.0), (vec![1, 2, 4], 1.0)]);
    }

    #[test]
    fn trails_in_triangle() {
        let g = graph(&[(1, 2), (2, 3), (1, 3)]);
        // Length exactly 2: 1-2-3 and 1-3-2; the start itself is excluded.
        assert_eq!(trail_reachable(&g, 1, 2, 2), BTreeSet::from([2, 3]));
        assert_eq!(trail_reachable(&g, 1, 4, 4), BTreeSet::new());
    }

    #[test]
    fn triangles_in_k4() {
        let g = graph(&[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]);
        assert_eq!(count_triangles(&g, &BTreeSet::from([1, 2, 3, 4])), 4);
        assert_eq!(count_triangles(&g, &BTreeSet::from([1, 2, 3])), 1);
    }
}
