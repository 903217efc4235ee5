use std::collections::BTreeSet;

use proptest::prelude::*;
use snbkit_core::{Date, DateTime, Id};
use snbkit_engine::{
    all_shortest_paths, count_triangles, months_between, shortest_path_length, trail_reachable,
    weighted_shortest_paths,
};
use snbkit_oracle::graph::*;

#[test]
fn hop_distances_match_floyd_warshall() {
    for seed in 0..20 {
        let g = random_graph(40, 0.06, seed);
        let all = floyd_warshall(&g);
        for (&(a, b), d) in &all {
            let want = d.map_or(-1, |d| d as i64);
            assert_eq!(shortest_path_length(&g, a, b), want, "seed {seed} pair {a}-{b}");
        }
    }
}

#[test]
fn shortest_path_sets_match_enumeration() {
    for seed in 0..20 {
        let g = random_graph(25, 0.12, seed);
        for a in 0..5 {
            for b in 20..25 {
                let mut got = all_shortest_paths(&g, a, b);
                got.sort();
                assert_eq!(got, exhaustive_shortest_paths(&g, a, b), "seed {seed} pair {a}-{b}");
            }
        }
    }
}

#[test]
fn weighted_paths_match_enumeration() {
    let weight = |a: Id, b: Id| ((a * 7 + b * 3) % 5) as f64 * 0.5;
    for seed in 0..20 {
        let g = random_graph(30, 0.1, seed);
        for (a, b) in [(0, 29), (1, 15), (3, 3), (7, 22)] {
            let got = weighted_shortest_paths(&g, a, b, |x, y| weight(x.min(y), x.max(y)));
            assert_eq!(got, exhaustive_weighted_paths(&g, a, b, weight), "seed {seed} pair {a}-{b}");
        }
    }
}

#[test]
fn trails_match_enumeration() {
    for seed in 0..20 {
        let g = random_graph(15, 0.2, seed);
        for (lo, hi) in [(1, 1), (1, 4), (2, 3), (3, 4), (4, 4)] {
            assert_eq!(trail_reachable(&g, 0, lo, hi), exhaustive_trail_endpoints(&g, 0, lo, hi), "seed {seed} {lo}..{hi}");
        }
    }
}

#[test]
fn one_step_trails_are_the_friends() {
    let g = random_graph(20, 0.2, 3);
    assert_eq!(trail_reachable(&g, 0, 1, 1), g[&0]);
}

#[test]
fn trails_never_return_the_start() {
    let g = AdjacencyList::from([
        (0, BTreeSet::from([1, 2])),
        (1, BTreeSet::from([0, 2])),
        (2, BTreeSet::from([0, 1])),
    ]);
    assert_eq!(trail_reachable(&g, 0, 2, 3), BTreeSet::from([1, 2]));
}

#[test]
fn triangles_match_brute_force() {
    for seed in 0..20 {
        let g = random_graph(40, 0.15, seed);
        let subset: BTreeSet<Id> = (0..40).filter(|v| v % 3 != 0).collect();
        assert_eq!(count_triangles(&g, &subset), brute_force_triangles(&g, &subset));
        let all: BTreeSet<Id> = g.keys().copied().collect();
        assert_eq!(count_triangles(&g, &all), brute_force_triangles(&g, &all));
    }
}

#[test]
fn months_between_fixed_points() {
    let t = |y, m, d| Date::ymd(y, m, d).to_datetime();
    assert_eq!(months_between(t(2012, 1, 31), t(2012, 3, 1)), 3);
    assert_eq!(months_between(t(2012, 5, 2), t(2012, 5, 30)), 1);
}

proptest! {
    #[test]
    fn months_between_matches_day_walk(from in 0i64..2000, span in 0i64..900, ms in 0i64..86_400_000) {
        let a = Date::ymd(2009, 1, 1).add_days(from).to_datetime().plus_millis(ms);
        let b = DateTime::from_millis(a.date().add_days(span).to_datetime().millis());
        prop_assert_eq!(months_between(a, b), months_by_day_walk(a, b));
    }
}
