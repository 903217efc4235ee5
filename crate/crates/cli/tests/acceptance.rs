use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use snbkit_core::builder::*;
use snbkit_core::{
    months_between, reply_target, validate_schema, Date, DateTime, GraphSnapshot, Id, Message, MessageKind,
    QueryTemplateId, ReadQuery, UpdateEvent, UpdateOp, Value,
};
use snbkit_curation::curate_all;
use snbkit_datagen::{generate, generate_social, Dimension, GeneratorConfig};
use snbkit_driver::{build_schedule, check_validity, LogRecord, Parameters, WorkloadDefinition};
use snbkit_engine::{apply_insert, count_triangles, execute, shortest_path_length, trail_reachable, weighted_shortest_paths};
use snbkit_oracle::graph::*;
use snbkit_serializers::{write_dataset, CsvVariant};
use statrs::distribution::{ChiSquared, ContinuousCDF};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:.1?}, limit {limit:?}"))
}

fn tree(root: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in fs::read_dir(&dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                out.insert(path.strip_prefix(root).unwrap().to_path_buf(), fs::read(&path).unwrap());
            }
        }
    }
    out
}

fn determinism() -> Outcome {
    let start = Instant::now();
    let mut trees = Vec::new();
    for workers in ["1", "2", "8"] {
        let tmp = tempfile::tempdir().unwrap();
        let status = Command::new(env!("CARGO_BIN_EXE_snbkit"))
            .args(["--dir", tmp.path().to_str().unwrap(), "generate", "--persons", "1000", "--seed", "7", "--workers", workers])
            .output()
            .map_err(|e| e.to_string())?;
        ensure(status.status.success(), || format!("workers={workers}: {}", String::from_utf8_lossy(&status.stderr)))?;
        trees.push(tree(tmp.path()));
    }
    within(start, Duration::from_secs(60))?;
    let files = trees[0].len();
    let streams = trees[0].keys().filter(|p| p.to_string_lossy().contains("updateStream")).count();
    let params = trees[0].keys().filter(|p| p.starts_with("substitution_parameters")).count();
    ensure(streams > 0 && params > 0, || format!("{streams} stream files, {params} parameter files"))?;
    for (i, t) in trees.iter().enumerate().skip(1) {
        ensure(t == &trees[0], || format!("run {i} differs from the single-worker run"))?;
    }
    Ok(format!("{files} files identical for 1, 2 and 8 workers in {:.1?}", start.elapsed()))
}

fn schema_validity() -> Outcome {
    let start = Instant::now();
    for seed in 0..20 {
        let data = generate(&GeneratorConfig::with_persons(300, seed)).map_err(|e| e.to_string())?;
        for (name, g) in [("snapshot", &data.snapshot), ("full", &data.full)] {
            let v = validate_schema(g);
            ensure(v.is_empty(), || format!("seed {seed} {name}: {} violations, first {:?}", v.len(), v[0]))?;
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("20 seeds clean in {:.1?}", start.elapsed()))
}

fn file_counts() -> Outcome {
    let want = [(CsvVariant::CsvBasic, 33), (CsvVariant::CsvMergeForeign, 20), (CsvVariant::CsvComposite, 31), (CsvVariant::CsvCompositeMergeForeign, 18)];
    let mut got = Vec::new();
    for (variant, n) in want {
        let tmp = tempfile::tempdir().unwrap();
        let m = write_dataset(&GraphSnapshot::new(), variant, tmp.path(), 1).map_err(|e| e.to_string())?;
        ensure(m.files.len() == n, || format!("{variant}: {} files, want {n}", m.files.len()))?;
        got.push(m.files.len().to_string());
    }
    Ok(got.join("/"))
}

fn replay() -> Outcome {
    let start = Instant::now();
    let data = generate(&GeneratorConfig::with_persons(300, 11)).map_err(|e| e.to_string())?;
    let mut g = data.snapshot.clone();
    for ev in &data.updates {
        apply_insert(&mut g, &ev.op).map_err(|e| format!("{}: {e}", ev.op.name()))?;
    }
    ensure(g == data.full, || "replayed graph differs from the full graph".into())?;
    within(start, Duration::from_secs(30))?;
    Ok(format!("{} updates replayed in {:.1?}", data.updates.len(), start.elapsed()))
}

fn engine_vs_oracle() -> Outcome {
    let start = Instant::now();
    let data = generate(&GeneratorConfig::with_persons(150, 5)).map_err(|e| e.to_string())?;
    let g = &data.snapshot;
    let curated = curate_all(g, &data.stats, &QueryTemplateId::all(), 25, 5).map_err(|e| e.to_string())?;
    ensure(curated.len() == 46, || format!("{} templates curated", curated.len()))?;
    let mut checked = 0;
    for c in &curated {
        ensure(c.bindings.len() == 25, || format!("{}: {} bindings", c.template, c.bindings.len()))?;
        for q in c.queries() {
            let want = snbkit_oracle::run(g, &q).map_err(|e| format!("oracle {q:?}: {e}"))?;
            let got = execute(g, &q).map_err(|e| format!("engine {q:?}: {e}"))?;
            ensure(got.rows == want.rows, || format!("{} {q:?} differs", c.template))?;
            checked += 1;
        }
    }
    within(start, Duration::from_secs(600))?;
    Ok(format!("{checked} bindings agree in {:.1?}", start.elapsed()))
}

fn rows(g: &GraphSnapshot, q: ReadQuery) -> Result<Vec<Vec<Value>>, String> {
    execute(g, &q).map(|t| t.rows).map_err(|e| e.to_string())
}

fn fixed_points() -> Outcome {
    let mut b = GraphBuilder::new();
    b.person(1, "Ada", BERLIN).person(2, "Bob", PARIS).person(3, "Cy", PARIS).knows(1, 2);
    let f = b.forum(1, at(2));
    b.member(f, 2, at(3));
    let p1 = b.post(1, f, at(10), "from ada", &[]);
    let p2 = b.post(2, f, at(11), "from bob", &[]);
    b.comment(1, p1, at(12), "ada again", &[]);
    let c = b.comment(1, p2, at(13), "ada replies", &[]);
    b.comment(2, p1, at(14), "bob replies", &[]);
    b.like(1, p2, at(15)).like(2, p1, at(16));
    let mut g = b.build();

    let int = |v: i64| vec![vec![Value::Int(v)]];
    ensure(rows(&g, ReadQuery::Ic13 { person1_id: 1, person2_id: 1 })? == int(0), || "IC13 same person".into())?;
    ensure(rows(&g, ReadQuery::Ic13 { person1_id: 1, person2_id: 3 })? == int(-1), || "IC13 unreachable".into())?;

    let is7 = rows(&g, ReadQuery::Is7 { message_id: p1 })?;
    let own = is7.iter().find(|r| r[3] == Value::Int(1)).ok_or("IS7 lacks the self reply")?;
    ensure(own[6] == Value::Bool(false), || format!("IS7 self reply row {own:?}"))?;

    let day = |y, m, d| Date::ymd(y, m, d).to_datetime();
    ensure(months_between(day(2012, 1, 31), day(2012, 3, 1)) == 3, || "months Jan 31 to Mar 1".into())?;
    let zombie = rows(&g, ReadQuery::Bi21 { country: "France".into(), end_date: Date::ymd(2010, 6, 1) })?;
    let cy = zombie.iter().find(|r| r[0] == Value::Int(3)).ok_or("BI21 lacks the idle person")?;
    ensure(cy[3] == Value::Float(0.0), || format!("BI21 row {cy:?}"))?;

    let bi22 = rows(&g, ReadQuery::Bi22 { country1: "Germany".into(), country2: "France".into() })?;
    ensure(bi22.first().map(|r| &r[3]) == Some(&Value::Int(31)), || format!("BI22 {bi22:?}"))?;

    let target = reply_target(-1, c as i64).map_err(|e| e.to_string())?;
    let reply = Message {
        id: 900,
        creator: 2,
        creation_date: at(20),
        location_ip: "1.2.3.4".into(),
        browser_used: "Firefox".into(),
        content: "nested".into(),
        length: 6,
        country: FRANCE,
        tags: BTreeSet::new(),
        kind: MessageKind::Comment { reply_of: target },
    };
    apply_insert(&mut g, &UpdateOp::AddComment(reply)).map_err(|e| e.to_string())?;
    ensure(g.message(900).and_then(|m| m.reply_of()) == Some(c), || "IU7 parent".into())?;
    ensure(validate_schema(&g).is_empty(), || "IU7 broke the schema".into())?;
    Ok("IC13 0/-1, IS7 false, months 3, zombie 0.0, BI22 31, IU7 -1".into())
}

fn algorithms() -> Outcome {
    let start = Instant::now();
    for seed in 0..200 {
        let g = random_graph(60, 0.05, seed);
        for (&(a, b), d) in &floyd_warshall(&g) {
            let want = d.map_or(-1, |d| d as i64);
            ensure(shortest_path_length(&g, a, b) == want, || format!("hops seed {seed} {a}-{b}"))?;
        }
    }
    let weight = |a: Id, b: Id| ((a * 7 + b * 3) % 5) as f64 * 0.5;
    for seed in 0..100 {
        let g = random_graph(40, 0.1, 1000 + seed);
        for (a, b) in [(0, 39), (1, 20), (5, 5), (10, 33)] {
            let got = weighted_shortest_paths(&g, a, b, |x, y| weight(x.min(y), x.max(y)));
            ensure(got == exhaustive_weighted_paths(&g, a, b, weight), || format!("weighted seed {seed} {a}-{b}"))?;
        }
    }
    for seed in 0..50 {
        let g = random_graph(20, 0.15, 2000 + seed);
        for (lo, hi) in [(1, 4), (2, 4), (4, 4)] {
            ensure(trail_reachable(&g, 0, lo, hi) == exhaustive_trail_endpoints(&g, 0, lo, hi), || format!("trails seed {seed} {lo}..{hi}"))?;
        }
    }
    for seed in 0..100 {
        let g = random_graph(50, 0.12, 3000 + seed);
        let all: BTreeSet<Id> = g.keys().copied().collect();
        ensure(count_triangles(&g, &all) == brute_force_triangles(&g, &all), || format!("triangles seed {seed}"))?;
    }
    within(start, Duration::from_secs(300))?;
    Ok(format!("hops, weighted paths, trails and triangles agree in {:.1?}", start.elapsed()))
}

fn binding(t: QueryTemplateId) -> ReadQuery {
    let texts: Vec<&str> = ReadQuery::param_names(t)
        .iter()
        .map(|n| match *n {
            n if n.ends_with("Date") => "2010-01-01",
            n if n.ends_with("Id") || n.ends_with("Days") || n.ends_with("Year") || n == "month" => "1",
            _ => "x",
        })
        .collect();
    ReadQuery::from_texts(t, &texts).unwrap()
}

fn record(delay_ms: i64) -> LogRecord {
    LogRecord {
        operation: "IC1".into(),
        scheduled_start_ms: 0,
        actual_start_ms: delay_ms,
        duration_us: 100,
        result_count: 1,
        status: "OK".into(),
        entry: 0,
        step: 0,
        params: String::new(),
    }
}

fn scheduling() -> Outcome {
    let updates: Vec<UpdateEvent> = (0..2600)
        .map(|i| {
            let t = DateTime::from_millis(1_000_000 + i as i64 * 10);
            UpdateEvent { time: t, dependency_time: t, op: UpdateOp::AddKnows { person1: 1, person2: i as u64 + 2, date: t } }
        })
        .collect();
    let params: Parameters = (1..=14).map(|ic| (QueryTemplateId::ic(ic), vec![binding(QueryTemplateId::ic(ic))])).collect();
    let s = build_schedule(&updates, &params, &WorkloadDefinition::default()).map_err(|e| e.to_string())?;
    let count = |label: &str| s.iter().filter(|e| e.operation.label() == label).count();
    ensure(count("IC1") == 100 && count("IC9") == 16, || format!("IC1 {} IC9 {}", count("IC1"), count("IC9")))?;
    let log = |late: usize| (0..100).map(|i| record(if i < late { 1500 } else { 5 })).collect::<Vec<_>>();
    ensure(!check_validity(&log(6)).valid, || "94% on time was accepted".into())?;
    ensure(check_validity(&log(5)).valid, || "95% on time was rejected".into())?;
    Ok("IC1 100, IC9 16, 94% invalid, 95% valid".into())
}

fn knows_distribution() -> Outcome {
    let cfg = GeneratorConfig::with_persons(2000, 9);
    let (_, persons, knows) = generate_social(&cfg).map_err(|e| e.to_string())?;
    ensure(knows.len() >= 10_000, || format!("only {} edges", knows.len()))?;
    ensure(knows.iter().all(|e| e.distance >= 1 && e.distance <= cfg.window && e.a < e.b), || "edge outside the window".into())?;
    for dim in [Dimension::Study, Dimension::Interest, Dimension::Random] {
        let order = snbkit_datagen::knows::ranking(&persons, dim, cfg.seed);
        let pos: HashMap<Id, i64> = order.iter().enumerate().map(|(r, &i)| (persons[i].person.id, r as i64)).collect();
        for e in knows.iter().filter(|e| e.dimension == dim) {
            ensure((pos[&e.a] - pos[&e.b]).unsigned_abs() as u32 == e.distance, || format!("{dim:?} distance of {}-{}", e.a, e.b))?;
        }
    }
    let p = cfg.geometric_p;
    let w = cfg.window as i32;
    let norm = 1.0 - (1.0 - p).powi(w);
    let total = knows.len() as f64;
    let mut observed = vec![0.0; w as usize + 1];
    for e in &knows {
        observed[e.distance as usize] += 1.0;
    }
    let (mut chi, mut bins, mut tail_o, mut tail_e) = (0.0, 0, 0.0, 0.0);
    for k in 1..=w {
        let expected = total * p * (1.0 - p).powi(k - 1) / norm;
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
    ensure(p_value > 0.01, || format!("chi-square {chi:.1} over {bins} bins, p = {p_value:.4}"))?;
    Ok(format!("{} edges in window, p = {p_value:.3}", knows.len()))
}

fn months() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..10_000 {
        let a = Date::ymd(2009, 1, 1).add_days(rng.random_range(0..2000)).to_datetime().plus_millis(rng.random_range(0..86_400_000));
        let b = a.date().add_days(rng.random_range(0..900)).to_datetime().plus_millis(rng.random_range(0..86_400_000));
        ensure(months_between(a, b) == months_by_day_walk(a, b), || format!("{a:?} to {b:?}"))?;
    }
    Ok("10000 random spans agree".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("worker-count determinism", determinism),
        ("schema validity over seeds", schema_validity),
        ("layout file counts", file_counts),
        ("snapshot plus replay", replay),
        ("engine agrees with oracle", engine_vs_oracle),
        ("fixed-point constants", fixed_points),
        ("graph algorithm oracles", algorithms),
        ("schedule and validity rule", scheduling),
        ("knows window and distance law", knows_distribution),
        ("month counting", months),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
