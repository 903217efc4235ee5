use std::collections::{BTreeSet, VecDeque};
use std::fs;

use proptest::prelude::*;
use snbkit_core::{GraphSnapshot, Id, ParamValue, QueryTemplateId, ReadQuery};
use snbkit_curation::*;
use snbkit_datagen::{generate, GeneratorConfig};

fn persons_within(g: &GraphSnapshot, start: Id, hops: usize) -> usize {
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([(start, 0)]);
    while let Some((p, d)) = queue.pop_front() {
        if d == hops {
            continue;
        }
        for &f in g.friends(p).keys() {
            if seen.insert(f) {
                queue.push_back((f, d + 1));
            }
        }
    }
    seen.len() - 1
}

fn synthetic(costs: &[u64]) -> Vec<Candidate> {
    costs.iter().enumerate().map(|(i, &cost)| Candidate { query: ReadQuery::Ic7 { person_id: i as Id }, cost }).collect()
}

#[test]
fn single_binding_is_the_median() {
    let c = curate(QueryTemplateId::ic(7), synthetic(&[9, 1, 5, 3, 7, 2, 8, 4, 6]), 1, 0).unwrap();
    assert_eq!(c.bindings[0].cost, 5);
    assert_eq!(c.band, 1.0);
}

#[test]
fn too_few_candidates_is_an_error() {
    let err = curate(QueryTemplateId::ic(7), synthetic(&[1, 4]), 3, 0).unwrap_err();
    match err {
        CurationError::InsufficientCandidates { available, needed, band, .. } => {
            assert_eq!((available, needed), (2, 3));
            assert_eq!(band, 4.0);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn band_is_widened_only_when_needed() {
    let c = curate(QueryTemplateId::ic(7), synthetic(&[1, 10, 100, 1000]), 2, 0).unwrap();
    assert!(c.widened());
    assert_eq!(c.band, 10.0);
}

proptest! {
    #[test]
    fn selection_stays_in_band_when_possible(costs in prop::collection::vec(1u64..500, 1..60), n in 1usize..12) {
        prop_assume!(costs.len() >= n);
        let mut sorted = costs.clone();
        sorted.sort();
        let feasible = (0..=sorted.len() - n).any(|i| sorted[i + n - 1] <= 2 * sorted[i]);
        let c = curate(QueryTemplateId::ic(7), synthetic(&costs), n, 3).unwrap();
        prop_assert_eq!(c.bindings.len(), n);
        let lo = c.bindings.iter().map(|b| b.cost).min().unwrap();
        let hi = c.bindings.iter().map(|b| b.cost).max().unwrap();
        prop_assert_eq!(c.band, band(lo, hi));
        prop_assert_eq!(feasible, !c.widened());
        let best = (0..=sorted.len() - n).map(|i| band(sorted[i], sorted[i + n - 1])).fold(f64::INFINITY, f64::min);
        if !feasible {
            prop_assert_eq!(c.band, best);
        }
    }
}

#[test]
fn ic1_selection_has_similar_neighbourhoods() {
    let data = generate(&GeneratorConfig::with_persons(1000, 21)).unwrap();
    let g = &data.snapshot;
    let ctx = Context::new(g, &data.stats);
    let c = curate(QueryTemplateId::ic(1), candidates(&ctx, QueryTemplateId::ic(1)), 50, 1).unwrap();
    let sizes: Vec<usize> = c
        .bindings
        .iter()
        .map(|b| match b.query {
            ReadQuery::Ic1 { person_id, .. } => persons_within(g, person_id, 3),
            _ => unreachable!(),
        })
        .collect();
    let (lo, hi) = (*sizes.iter().min().unwrap(), *sizes.iter().max().unwrap());
    assert!(lo > 0 && hi <= 2 * lo, "3-hop sizes {lo}..{hi}");
    for (b, s) in c.bindings.iter().zip(&sizes) {
        assert_eq!(b.cost, *s as u64);
    }
}

#[test]
fn every_template_yields_bindings_on_a_small_graph() {
    let data = generate(&GeneratorConfig::with_persons(150, 3)).unwrap();
    let all = curate_all(&data.snapshot, &data.stats, &QueryTemplateId::all(), 25, 9).unwrap();
    assert_eq!(all.len(), 46);
    for c in &all {
        assert_eq!(c.bindings.len(), 25, "{}", c.template);
        assert!(c.bindings.iter().all(|b| b.query.template() == c.template));
    }
    let again = curate_all(&data.snapshot, &data.stats, &QueryTemplateId::all(), 25, 9).unwrap();
    assert_eq!(all, again);
}

#[test]
fn consecutive_blocks_have_similar_cost_distributions() {
    let data = generate(&GeneratorConfig::with_persons(300, 4)).unwrap();
    let all = curate_all(&data.snapshot, &data.stats, &QueryTemplateId::curated(), 20, 2).unwrap();
    for c in all {
        let costs: Vec<f64> = c.bindings.iter().map(|b| b.cost as f64).collect();
        let d = ks_statistic(&costs[..10], &costs[10..20]);
        assert!(d < 0.4, "{} KS {d}", c.template);
    }
}

fn ids(q: &ReadQuery) -> Vec<(&'static str, Id)> {
    ReadQuery::param_names(q.template())
        .iter()
        .zip(q.params())
        .filter_map(|(n, v)| match v {
            ParamValue::Int(i) if n.ends_with("Id") => Some((*n, i as Id)),
            _ => None,
        })
        .collect()
}

#[test]
fn written_files_round_trip_and_resolve() {
    let data = generate(&GeneratorConfig::with_persons(150, 5)).unwrap();
    let g = &data.snapshot;
    let set = parameter_set(&curate_all(g, &data.stats, &QueryTemplateId::curated(), 10, 0).unwrap());
    for format in [ParamFormat::Pipe, ParamFormat::Json] {
        let dir = tempfile::tempdir().unwrap();
        let manifest = write_parameter_files(&set, dir.path(), format).unwrap();
        assert_eq!(manifest.len(), 39);
        let back = read_parameter_files(dir.path()).unwrap();
        assert_eq!(back, set);
    }
    let mut checked = 0;
    for q in set.values().flatten() {
        for (name, id) in ids(q) {
            let found = if name == "messageId" { g.message(id).is_some() } else { g.person(id).is_some() };
            assert!(found, "{name} {id} in {q:?}");
            checked += 1;
        }
    }
    assert!(checked > 100);
}

#[test]
fn ic13_file_layout_and_empty_files() {
    let dir = tempfile::tempdir().unwrap();
    let mut set = ParameterSet::new();
    set.insert(QueryTemplateId::ic(13), vec![ReadQuery::Ic13 { person1_id: 4, person2_id: 9 }]);
    set.insert(QueryTemplateId::bi(5), Vec::new());
    write_parameter_files(&set, dir.path(), ParamFormat::Pipe).unwrap();
    let root = dir.path().join(PARAMS_DIR);
    assert_eq!(fs::read_to_string(root.join("interactive_13_param.txt")).unwrap(), "person1Id|person2Id\n4|9\n");
    assert_eq!(fs::read_to_string(root.join("bi_5_param.txt")).unwrap(), "country\n");
}

#[test]
fn json_lines_carry_named_fields() {
    let dir = tempfile::tempdir().unwrap();
    let mut set = ParameterSet::new();
    set.insert(QueryTemplateId::ic(1), vec![ReadQuery::Ic1 { person_id: 1, first_name: "Lei".into() }]);
    write_parameter_files(&set, dir.path(), ParamFormat::Json).unwrap();
    let text = fs::read_to_string(dir.path().join(PARAMS_DIR).join("interactive_1_param.txt")).unwrap();
    assert_eq!(text, "{\"firstName\":\"Lei\",\"personId\":1}\n");
}

#[test]
fn bad_header_is_reported_with_its_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("interactive_7_param.txt");
    fs::write(&path, "person|x\n1\n").unwrap();
    match read_parameter_file(&path, QueryTemplateId::ic(7)) {
        Err(CurationError::Parse { line, .. }) => assert_eq!(line, 1),
        other => panic!("{other:?}"),
    }
    fs::write(&path, "personId\nabc\n").unwrap();
    match read_parameter_file(&path, QueryTemplateId::ic(7)) {
        Err(CurationError::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("{other:?}"),
    }
}
