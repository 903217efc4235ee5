use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use snbkit_core::{Date, GraphSnapshot, Id, PlaceKind, QueryTemplateId, ReadQuery, Value};
use snbkit_datagen::{generate, GeneratorConfig};

fn same(a: &Value, b: &Value) -> bool {
    match (a, b) {
        (Value::Float(x), Value::Float(y)) => (x - y).abs() <= 1e-9 * x.abs().max(1.0),
        (Value::List(x), Value::List(y)) => x.len() == y.len() && x.iter().zip(y).all(|(p, q)| same(p, q)),
        _ => a == b,
    }
}

struct Sampler<'a> {
    g: &'a GraphSnapshot,
    rng: ChaCha8Rng,
    persons: Vec<Id>,
    messages: Vec<Id>,
    countries: Vec<String>,
    tags: Vec<String>,
    classes: Vec<String>,
    names: Vec<String>,
}

impl<'a> Sampler<'a> {
    fn new(g: &'a GraphSnapshot, seed: u64) -> Self {
        let mut countries: Vec<String> = g
            .persons()
            .values()
            .filter_map(|p| g.country_of_person(p.id))
            .map(|c| g.places()[&c].name.clone())
            .collect();
        countries.sort();
        countries.dedup();
        let mut tags: Vec<String> = g
            .messages()
            .values()
            .flat_map(|m| m.tags.iter().map(|t| g.tags()[t].name.clone()))
            .collect();
        tags.sort();
        tags.dedup();
        let mut names: Vec<String> = g.persons().values().map(|p| p.first_name.clone()).collect();
        names.sort();
        names.dedup();
        assert!(g.places().values().any(|p| p.kind == PlaceKind::Country));
        Sampler {
            g,
            rng: ChaCha8Rng::seed_from_u64(seed),
            persons: g.persons().keys().copied().collect(),
            messages: g.messages().keys().copied().collect(),
            countries,
            tags,
            classes: g.tag_classes().values().map(|c| c.name.clone()).collect(),
            names,
        }
    }

    fn person(&mut self) -> Id {
        *self.persons.choose(&mut self.rng).unwrap()
    }
    fn message(&mut self) -> Id {
        *self.messages.choose(&mut self.rng).unwrap()
    }
    fn country(&mut self) -> String {
        self.countries.choose(&mut self.rng).unwrap().clone()
    }
    fn message_country(&mut self) -> String {
        let m = self.message();
        self.g.places()[&self.g.messages()[&m].country].name.clone()
    }
    fn work_country(&mut self) -> String {
        let jobs: Vec<_> = self.g.edges().work_at.keys().collect();
        let (_, org) = jobs.choose(&mut self.rng).unwrap();
        self.g.places()[&self.g.organisations()[org].place].name.clone()
    }
    fn tag(&mut self) -> String {
        self.tags.choose(&mut self.rng).unwrap().clone()
    }
    fn class(&mut self) -> String {
        self.classes.choose(&mut self.rng).unwrap().clone()
    }
    fn date(&mut self) -> Date {
        let m = self.message();
        self.g.messages()[&m].creation_date.date()
    }

    fn binding(&mut self, t: QueryTemplateId) -> ReadQuery {
        use snbkit_core::QueryFamily::*;
        use ReadQuery::*;
        match (t.family, t.number) {
            (Ic, 1) => Ic1 { person_id: self.person(), first_name: self.names.choose(&mut self.rng).unwrap().clone() },
            (Ic, 2) => Ic2 { person_id: self.person(), max_date: self.date() },
            (Ic, 3) => Ic3 {
                person_id: self.person(),
                country_x: self.message_country(),
                country_y: self.message_country(),
                start_date: self.date(),
                duration_days: self.rng.random_range(30..400),
            },
            (Ic, 4) => Ic4 { person_id: self.person(), start_date: self.date(), duration_days: self.rng.random_range(30..400) },
            (Ic, 5) => Ic5 { person_id: self.person(), min_date: self.date() },
            (Ic, 6) => Ic6 { person_id: self.person(), tag_name: self.tag() },
            (Ic, 7) => Ic7 { person_id: self.person() },
            (Ic, 8) => Ic8 { person_id: self.person() },
            (Ic, 9) => Ic9 { person_id: self.person(), max_date: self.date() },
            (Ic, 10) => Ic10 { person_id: self.person(), month: self.rng.random_range(1..=12) },
            (Ic, 11) => Ic11 { person_id: self.person(), country_name: self.work_country(), work_from_year: self.rng.random_range(2000..2014) },
            (Ic, 12) => Ic12 { person_id: self.person(), tag_class_name: self.class() },
            (Ic, 13) => Ic13 { person1_id: self.person(), person2_id: self.person() },
            (Ic, 14) => Ic14 { person1_id: self.person(), person2_id: self.person() },
            (Is, 1) => Is1 { person_id: self.person() },
            (Is, 2) => Is2 { person_id: self.person() },
            (Is, 3) => Is3 { person_id: self.person() },
            (Is, 4) => Is4 { message_id: self.message() },
            (Is, 5) => Is5 { message_id: self.message() },
            (Is, 6) => Is6 { message_id: self.message() },
            (Is, 7) => Is7 { message_id: self.message() },
            (Bi, 1) => Bi1 { date: self.date() },
            (Bi, 2) => {
                let a = self.date();
                Bi2 { start_date: a, end_date: a.add_days(self.rng.random_range(100..900)), country1: self.country(), country2: self.country() }
            }
            (Bi, 3) => {
                let d = self.date();
                Bi3 { year: d.year() as i64, month: d.month() as i64 }
            }
            (Bi, 4) => Bi4 { tag_class: self.class(), country: self.country() },
            (Bi, 5) => Bi5 { country: self.country() },
            (Bi, 6) => Bi6 { tag: self.tag() },
            (Bi, 7) => Bi7 { tag: self.tag() },
            (Bi, 8) => Bi8 { tag: self.tag() },
            (Bi, 9) => Bi9 { tag_class1: self.class(), tag_class2: self.class(), threshold: self.rng.random_range(0..10) },
            (Bi, 10) => Bi10 { tag: self.tag(), date: self.date() },
            (Bi, 11) => Bi11 { country: self.country(), blacklist: vec!["about".into(), String::new(), "zq".into()] },
            (Bi, 12) => Bi12 { date: self.date(), like_threshold: self.rng.random_range(0..5) },
            (Bi, 13) => Bi13 { country: self.country() },
            (Bi, 14) => {
                let a = self.date();
                Bi14 { start_date: a, end_date: a.add_days(self.rng.random_range(10..300)) }
            }
            (Bi, 15) => Bi15 { country: self.country() },
            (Bi, 16) => {
                let min = self.rng.random_range(1..=3);
                Bi16 {
                    person_id: self.person(),
                    country: self.country(),
                    tag_class: self.class(),
                    min_path_distance: min,
                    max_path_distance: self.rng.random_range(min..=4),
                }
            }
            (Bi, 17) => Bi17 { country: self.country() },
            (Bi, 18) => Bi18 {
                date: self.date(),
                length_threshold: self.rng.random_range(20..200),
                languages: vec!["en".into(), "es".into(), "zh".into()],
            },
            (Bi, 19) => Bi19 { date: Date::ymd(self.rng.random_range(1980..1995), 1, 1), tag_class1: self.class(), tag_class2: self.class() },
            (Bi, 20) => Bi20 { tag_classes: vec![self.class(), self.class(), self.class()] },
            (Bi, 21) => Bi21 { country: self.country(), end_date: self.date() },
            (Bi, 22) => Bi22 { country1: self.country(), country2: self.country() },
            (Bi, 23) => Bi23 { country: self.country() },
            (Bi, 24) => Bi24 { tag_class: self.class() },
            (Bi, 25) => {
                let a = self.date();
                Bi25 { person1_id: self.person(), person2_id: self.person(), start_date: a.add_days(-400), end_date: a }
            }
            _ => unreachable!(),
        }
    }
}

#[test]
fn engine_matches_naive_evaluation_on_sampled_bindings() {
    for seed in [11, 12] {
        check_graph(seed);
    }
}

fn check_graph(seed: u64) {
    let g = generate(&GeneratorConfig::with_persons(150, seed)).unwrap().snapshot;
    let mut sampler = Sampler::new(&g, seed);
    let mut failures = Vec::new();
    let mut nonempty = 0;
    let mut total = 0;
    for t in QueryTemplateId::all() {
        for _ in 0..8 {
            let q = sampler.binding(t);
            let got = snbkit_engine::execute(&g, &q);
            let want = snbkit_oracle::run(&g, &q);
            total += 1;
            match (got, want) {
                (Ok(a), Ok(b)) => {
                    if !a.is_empty() {
                        nonempty += 1;
                    }
                    let ok = a.rows.len() == b.rows.len()
                        && a.rows.iter().zip(&b.rows).all(|(x, y)| x.len() == y.len() && x.iter().zip(y).all(|(p, q)| same(p, q)));
                    if !ok {
                        failures.push(format!("{q:?}\n engine {:?}\n oracle {:?}", &a.rows[..a.rows.len().min(3)], &b.rows[..b.rows.len().min(3)]));
                    }
                }
                (Err(_), Err(_)) => {}
                (a, b) => failures.push(format!("{q:?}\n engine {:?}\n oracle {:?}", a.map(|t| t.len()), b.map(|t| t.len()))),
            }
        }
    }
    assert!(failures.is_empty(), "{} mismatches:\n{}", failures.len(), failures.join("\n"));
    assert!(nonempty * 2 > total, "only {nonempty}/{total} bindings produced rows");
}
