use std::collections::{BTreeMap, HashMap};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use snbkit_core::{
    delete_cascading, validate_schema, Date, DateTime, GraphSnapshot, Id, UpdateEvent, UpdateOp,
};
use snbkit_datagen::{
    generate, generate_persons, generate_social, knows_pass, persons::sample_degree, Dictionaries, Dimension,
    FlashmobEvent, GeneratorConfig, World,
};
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn replay(g: &mut GraphSnapshot, e: &UpdateEvent) {
    let ok = "replayed insert applies";
    match &e.op {
        UpdateOp::AddPerson(p) => {
            g.insert_person(p.person.clone()).expect(ok);
            for &t in &p.interests {
                g.insert_interest(p.person.id, t).expect(ok);
            }
            for (&o, &y) in &p.study_at {
                g.insert_study_at(p.person.id, o, y).expect(ok);
            }
            for (&o, &y) in &p.work_at {
                g.insert_work_at(p.person.id, o, y).expect(ok);
            }
        }
        UpdateOp::AddLikePost { person, post: m, date } | UpdateOp::AddLikeComment { person, comment: m, date } => {
            g.insert_like(*person, *m, *date).expect(ok)
        }
        UpdateOp::AddForum(f) => g.insert_forum(f.clone()).expect(ok),
        UpdateOp::AddMembership { forum, person, date } => g.insert_membership(*forum, *person, *date).expect(ok),
        UpdateOp::AddPost(m) | UpdateOp::AddComment(m) => g.insert_message(m.clone()).expect(ok),
        UpdateOp::AddKnows { person1, person2, date } => g.insert_knows(*person1, *person2, *date).expect(ok),
    }
}

fn average_ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut ranks = vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for k in i..=j {
            ranks[idx[k]] = r;
        }
        i = j + 1;
    }
    ranks
}

fn spearman(x: &[f64], y: &[f64]) -> f64 {
    let (rx, ry) = (average_ranks(x), average_ranks(y));
    let n = x.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

#[test]
fn zero_persons_is_rejected() {
    assert!(generate(&GeneratorConfig::with_persons(0, 1)).is_err());
    let mut cfg = GeneratorConfig::with_persons(10, 1);
    cfg.dimension_split = [0.5, 0.5, 0.5];
    assert!(generate(&cfg).is_err());
}

#[test]
fn a_single_person_has_no_friends() {
    let g = generate(&GeneratorConfig::with_persons(1, 3)).unwrap();
    assert_eq!(g.full.persons().len(), 1);
    assert!(g.persons[0].target_degree >= 1);
    assert!(g.full.edges().knows.is_empty());
}

#[test]
fn person_tables_do_not_depend_on_worker_count() {
    let d = Dictionaries::embedded();
    let w = World::build(&d).unwrap();
    let run = |workers| {
        let cfg = GeneratorConfig { workers, ..GeneratorConfig::with_persons(1000, 42) };
        rayon::ThreadPoolBuilder::new().num_threads(workers).build().unwrap().install(|| generate_persons(&cfg, &w, &d))
    };
    assert_eq!(run(1), run(8));
}

#[test]
fn target_degree_mean_matches_config() {
    let cfg = GeneratorConfig::with_persons(10_000, 5);
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mean = (0..10_000).map(|_| sample_degree(&mut rng, &cfg) as f64).sum::<f64>() / 10_000.0;
    assert!((mean - cfg.degree_mean).abs() <= 0.1 * cfg.degree_mean, "mean {mean}");
}

#[test]
fn two_persons_with_unit_budgets_become_friends() {
    let d = Dictionaries::embedded();
    let w = World::build(&d).unwrap();
    let cfg = GeneratorConfig::with_persons(2, 11);
    let persons = generate_persons(&cfg, &w, &d);
    for dim in [Dimension::Study, Dimension::Interest, Dimension::Random] {
        let edges = knows_pass(&persons, dim, &cfg, &[1, 1], &Default::default());
        assert_eq!(edges.len(), 1);
        assert_eq!((edges[0].a, edges[0].b, edges[0].distance), (0, 1, 1));
    }
}

#[test]
fn knows_edges_respect_the_window_and_a_geometric_law() {
    let cfg = GeneratorConfig::with_persons(2000, 9);
    let (_, persons, knows) = generate_social(&cfg).unwrap();
    assert!(knows.len() >= 10_000, "{} edges", knows.len());
    assert!(knows.iter().all(|e| e.distance >= 1 && e.distance <= cfg.window && e.a < e.b));

    // The stored distance agrees with a recomputed ranking.
    for dim in [Dimension::Study, Dimension::Interest, Dimension::Random] {
        let order = snbkit_datagen::knows::ranking(&persons, dim, cfg.seed);
        let pos: HashMap<Id, i64> = order.iter().enumerate().map(|(r, &i)| (persons[i].person.id, r as i64)).collect();
        for e in knows.iter().filter(|e| e.dimension == dim) {
            assert_eq!((pos[&e.a] - pos[&e.b]).unsigned_abs() as u32, e.distance);
        }
    }

    let p = cfg.geometric_p;
    let r = 1.0 - p;
    let w = cfg.window as i32;
    let norm = 1.0 - r.powi(w);
    let total = knows.len() as f64;
    let mut observed = vec![0.0; w as usize + 1];
    for e in &knows {
        observed[e.distance as usize] += 1.0;
    }
    let (mut chi, mut bins, mut tail_o, mut tail_e) = (0.0, 0, 0.0, 0.0);
    for k in 1..=w {
        let expected = total * p * r.powi(k - 1) / norm;
        if expected >= 5.0 {
            chi += (observed[k as usize] - expected).powi(2) / expected;
            bins += 1;
        } else {
            tail_o += observed[k as usize];
            tail_e += expected;
        }
    }
    if tail_e > 0.0 {
        chi += (tail_o - tail_e).powi(2) / tail_e;
        bins += 1;
    }
    let p_value = 1.0 - ChiSquared::new((bins - 1) as f64).unwrap().cdf(chi);
    assert!(p_value > 0.01, "chi-square {chi} over {bins} bins, p = {p_value}");
}

#[test]
fn realized_degree_stays_within_budget() {
    let cfg = GeneratorConfig::with_persons(1000, 17);
    let (_, persons, knows) = generate_social(&cfg).unwrap();
    let mut degree = vec![0u32; persons.len()];
    for e in &knows {
        degree[e.a as usize] += 1;
        degree[e.b as usize] += 1;
    }
    for (p, d) in persons.iter().zip(&degree) {
        assert!(*d <= p.target_degree, "person {} has {d} > {}", p.person.id, p.target_degree);
    }
    let mean_ratio =
        persons.iter().zip(&degree).map(|(p, d)| *d as f64 / p.target_degree as f64).sum::<f64>() / persons.len() as f64;
    assert!(mean_ratio >= 0.8, "mean realized/target {mean_ratio}");
}

#[test]
fn a_lonely_person_without_activity_floor_only_gets_a_wall() {
    let cfg = GeneratorConfig { activity_floor: 0.0, albums_per_person: 0.0, ..GeneratorConfig::with_persons(1, 4) };
    let g = generate(&cfg).unwrap();
    assert_eq!(g.full.forums().len(), 1);
    assert!(g.full.forums()[&0].title.starts_with("Wall of "));
    assert!(g.full.messages().is_empty());
}

#[test]
fn friendlier_persons_write_more() {
    let g = generate(&GeneratorConfig::with_persons(5000, 21)).unwrap();
    let (mut friends, mut messages) = (Vec::new(), Vec::new());
    for &p in g.full.persons().keys() {
        friends.push(g.full.friends(p).len() as f64);
        messages.push(g.full.messages_of(p).len() as f64);
    }
    let rho = spearman(&friends, &messages);
    assert!(rho > 0.5, "spearman {rho}");
}

#[test]
fn flashmob_concentrates_posts_on_its_peak_day() {
    let peak = Date::ymd(2011, 6, 15).to_datetime().plus_millis(12 * 3_600_000);
    let tag = 5;
    let cfg = GeneratorConfig {
        flashmobs: vec![FlashmobEvent { tag, peak, intensity: 10.0 }],
        ..GeneratorConfig::with_persons(3000, 8)
    };
    let g = generate(&cfg).unwrap();
    let posts: Vec<DateTime> = g
        .full
        .messages()
        .values()
        .filter(|m| m.is_post() && m.tags.contains(&tag))
        .map(|m| m.creation_date)
        .collect();
    let day = peak.date();
    let on_peak = posts.iter().filter(|t| t.date() == day).count() as f64;
    let days = (cfg.end().date().days_since_epoch() - cfg.start().date().days_since_epoch() - 1) as f64;
    let background = (posts.len() as f64 - on_peak) / days;
    assert!(on_peak >= 3.0 * background, "peak {on_peak} vs background {background}/day");
}

#[test]
fn generation_is_deterministic_and_worker_independent() {
    let cfg = GeneratorConfig::with_persons(300, 77);
    let a = generate(&cfg).unwrap();
    let b = generate(&cfg).unwrap();
    let c = generate(&GeneratorConfig { workers: 4, ..cfg.clone() }).unwrap();
    for other in [&b, &c] {
        assert_eq!(a.snapshot, other.snapshot);
        assert_eq!(a.updates, other.updates);
        assert_eq!(a.stats, other.stats);
        assert_eq!(a.knows, other.knows);
    }
}

#[test]
fn smallest_preset_is_fast() {
    let cfg = GeneratorConfig::with_persons(snbkit_datagen::preset_persons("SF0.001").unwrap(), 1);
    let t = std::time::Instant::now();
    generate(&cfg).unwrap();
    assert!(t.elapsed().as_secs_f64() < 5.0);
}

#[test]
fn temporal_order_holds() {
    let g = generate(&GeneratorConfig::with_persons(400, 31)).unwrap().full;
    for m in g.messages().values() {
        assert!(m.creation_date > g.person(m.creator).unwrap().creation_date);
        if let Some(parent) = m.reply_of() {
            assert!(m.creation_date > g.message(parent).unwrap().creation_date);
        }
        if let Some(f) = m.forum() {
            assert!(m.creation_date > g.forum(f).unwrap().creation_date);
            if let Some(join) = g.members_of(f).get(&m.creator) {
                assert!(m.creation_date > *join);
            }
        }
    }
    for (&(p, m), &t) in &g.edges().likes {
        assert!(t > g.message(m).unwrap().creation_date);
        assert!(t > g.person(p).unwrap().creation_date);
        assert_ne!(g.message(m).unwrap().creator, p);
    }
    for (&(f, p), &t) in &g.edges().members {
        assert!(t > g.forum(f).unwrap().creation_date && t > g.person(p).unwrap().creation_date);
    }
    for (&(a, b), &t) in &g.edges().knows {
        assert!(t > g.person(a).unwrap().creation_date && t > g.person(b).unwrap().creation_date);
    }
}

#[test]
fn full_bulk_fraction_leaves_no_updates() {
    let g = generate(&GeneratorConfig { bulk_fraction: 1.0, ..GeneratorConfig::with_persons(150, 2) }).unwrap();
    assert!(g.updates.is_empty());
    assert_eq!(g.snapshot, g.full);
}

#[test]
fn replaying_updates_restores_the_full_graph() {
    let g = generate(&GeneratorConfig::with_persons(300, 13)).unwrap();
    assert!(!g.updates.is_empty());
    assert!(validate_schema(&g.snapshot).is_empty());
    let mut replayed = g.snapshot.clone();
    let mut last = DateTime::from_millis(i64::MIN);
    for e in &g.updates {
        assert!(e.dependency_time <= e.time);
        assert!(e.time >= last);
        last = e.time;
        replay(&mut replayed, e);
    }
    assert_eq!(replayed, g.full);
    assert!(replayed.indexes_consistent());
}

#[test]
fn delete_streams_interleave_with_inserts() {
    let cfg = GeneratorConfig { delete_fraction: 0.05, ..GeneratorConfig::with_persons(300, 14) };
    let g = generate(&cfg).unwrap();
    assert!(!g.deletes.is_empty());
    let mut graph = g.snapshot.clone();
    let (mut i, mut d) = (0, 0);
    while i < g.updates.len() || d < g.deletes.len() {
        let take_insert = d == g.deletes.len() || (i < g.updates.len() && g.updates[i].time <= g.deletes[d].time);
        if take_insert {
            replay(&mut graph, &g.updates[i]);
            i += 1;
        } else {
            let e = &g.deletes[d];
            assert!(e.dependency_time < e.time && e.time >= cfg.cut());
            delete_cascading(&mut graph, e.op).expect("delete target exists");
            d += 1;
        }
    }
    assert_eq!(validate_schema(&graph), vec![]);
}

#[test]
fn curation_stats_match_recounts() {
    let g = generate(&GeneratorConfig::with_persons(150, 3)).unwrap();
    let s = &g.snapshot;
    for (&p, c) in &g.stats.persons {
        let friends: Vec<Id> = s.edges().knows.keys().filter_map(|&(a, b)| (a == p).then_some(b).or((b == p).then_some(a))).collect();
        assert_eq!(c.friends, friends.len() as u64);
        let authored = |q: Id| s.messages().values().filter(|m| m.creator == q).count() as u64;
        assert_eq!(c.messages, authored(p));
        assert_eq!(c.friend_messages, friends.iter().map(|&f| authored(f)).sum::<u64>());
    }
    let mut by_tag: BTreeMap<Id, u64> = BTreeMap::new();
    for m in s.messages().values() {
        for &t in &m.tags {
            *by_tag.entry(t).or_default() += 1;
        }
    }
    for (t, n) in &g.stats.tag_messages {
        assert_eq!(*n, by_tag.get(t).copied().unwrap_or(0));
    }
}
