//! Person generation.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rand_distr::{Distribution, LogNormal};
use rayon::prelude::*;
use snbkit_core::{Date, DateTime, Id, Person, PersonInsert};

use crate::config::GeneratorConfig;
use crate::dictionaries::Dictionaries;
use crate::rng::{substream, Stream};
use crate::world::World;

const DAY_MS: i64 = 86_400_000;

/// A generated person with its attribute edges and friendship budget.
#[derive(Clone, Debug, PartialEq)]
pub struct PersonRecord {
    pub person: Person,
    pub country: Id,
    /// Interest drawn first; drives the interest similarity key.
    pub main_interest: Id,
    pub interests: BTreeSet<Id>,
    pub study_at: BTreeMap<Id, i32>,
    pub work_at: BTreeMap<Id, i32>,
    pub target_degree: u32,
}

impl PersonRecord {
    pub fn insert(&self) -> PersonInsert {
        PersonInsert {
            person: self.person.clone(),
            interests: self.interests.clone(),
            study_at: self.study_at.clone(),
            work_at: self.work_at.clone(),
        }
    }

    pub fn university(&self) -> Option<(Id, i32)> {
        self.study_at.iter().next().map(|(u, y)| (*u, *y))
    }
}

/// Target degree from a log-normal with the configured mean, rounded and
/// clipped to `[1, max(1, n - 1)]`.
pub fn sample_degree<R: Rng>(rng: &mut R, cfg: &GeneratorConfig) -> u32 {
    let sigma = cfg.degree_sigma;
    let mu = cfg.degree_mean.ln() - sigma * sigma / 2.0;
    let x = LogNormal::new(mu, sigma).expect("validated parameters").sample(rng);
    let hi = cfg.num_persons.saturating_sub(1).max(1) as f64;
    x.round().clamp(1.0, hi) as u32
}

fn pick_weighted<R: Rng>(rng: &mut R, weights: &[f64]) -> usize {
    let total: f64 = weights.iter().sum();
    let mut u = rng.random::<f64>() * total;
    for (i, w) in weights.iter().enumerate() {
        if u < *w {
            return i;
        }
        u -= w;
    }
    weights.len() - 1
}

fn capitalized(s: &str) -> String {
    let mut c = s.chars();
    c.next().map(|f| f.to_uppercase().chain(c).collect()).unwrap_or_default()
}

pub fn generate_person(id: Id, cfg: &GeneratorConfig, world: &World, d: &Dictionaries) -> PersonRecord {
    let mut rng = substream(cfg.seed, Stream::Person, id, 0);
    let weights: Vec<f64> = world.countries.iter().map(|c| c.weight).collect();
    let country = &world.countries[pick_weighted(&mut rng, &weights)];
    let city = country.cities[rng.random_range(0..country.cities.len())];
    let female = rng.random_bool(0.5);
    let names = if female { &d.female_names } else { &d.male_names };
    let first_name = names.sample(&country.name, &mut rng).to_string();
    let last_name = d.last_names.sample(&country.name, &mut rng).to_string();

    let lo = Date::ymd(1980, 1, 1).days_since_epoch();
    let hi = Date::ymd(1990, 12, 31).days_since_epoch();
    let birthday = Date::from_days_since_epoch(rng.random_range(lo..=hi));
    let start = cfg.start().millis();
    let latest = cfg.end().millis() - 30 * DAY_MS;
    let creation_date = DateTime::from_millis(rng.random_range(start..latest.max(start + 1)));

    let location_ip = format!("{}.{}.{}", country.ip_prefix, rng.random_range(0..=255), rng.random_range(1..=254));
    let browser_used = d.browsers.sample(&mut rng).to_string();
    let mut languages: BTreeSet<String> = country.languages.iter().cloned().collect();
    if rng.random_bool(0.3) {
        languages.insert("en".to_string());
    }
    let mut emails = BTreeSet::new();
    let email_count = 1 + crate::rng::geometric(&mut rng, 0.6).min(3);
    for _ in 0..email_count {
        emails.insert(format!("{}{}@{}", capitalized(&first_name), id, d.email_providers.sample(&mut rng)));
    }

    let main_interest = world.interests.sample_index(&country.name, &mut rng) as Id;
    let mut interests = BTreeSet::from([main_interest]);
    for _ in 0..crate::rng::poisson(&mut rng, 3.0) {
        interests.insert(world.interests.sample_index(&country.name, &mut rng) as Id);
    }

    let birth_year = birthday.year();
    let mut study_at = BTreeMap::new();
    let graduation = birth_year + 22 + rng.random_range(0..3);
    if rng.random_bool(0.8) {
        study_at.insert(world.cities[&city].university, graduation);
    }
    let mut work_at = BTreeMap::new();
    for _ in 0..rng.random_range(0..=2u32) {
        let home = if rng.random_bool(0.9) {
            country
        } else {
            &world.countries[rng.random_range(0..world.countries.len())]
        };
        if home.companies.is_empty() {
            continue;
        }
        let company = home.companies[rng.random_range(0..home.companies.len())];
        work_at.entry(company).or_insert(graduation + rng.random_range(0..4));
    }
    let target_degree = sample_degree(&mut rng, cfg);

    PersonRecord {
        person: Person {
            id,
            first_name,
            last_name,
            gender: if female { "female".into() } else { "male".into() },
            birthday,
            creation_date,
            location_ip,
            browser_used,
            city,
            emails,
            languages,
        },
        country: country.id,
        main_interest,
        interests,
        study_at,
        work_at,
        target_degree,
    }
}

/// Persons `0..num_persons`, generated in parallel on the current pool.
pub fn generate_persons(cfg: &GeneratorConfig, world: &World, d: &Dictionaries) -> Vec<PersonRecord> {
    (0..cfg.num_persons).into_par_iter().map(|id| generate_person(id, cfg, world, d)).collect()
}
