//! Embedded property dictionaries.
//!
//! A property dictionary pairs a value list `D` with a ranking function that,
//! for a correlation key (for instance a country), orders every value of `D`,
//! and a probability function over ranks. Sampling draws a rank, then maps it
//! through the key's ranking.

use std::collections::HashMap;

use rand::Rng;

use crate::rng::{key_hash, Stream};

const COUNTRIES: &str = include_str!("../dictionaries/countries.txt");
const FIRST_NAMES: &str = include_str!("../dictionaries/first_names.txt");
const LAST_NAMES: &str = include_str!("../dictionaries/last_names.txt");
const TAG_CLASSES: &str = include_str!("../dictionaries/tag_classes.txt");
const TAGS: &str = include_str!("../dictionaries/tags.txt");
const COMPANIES: &str = include_str!("../dictionaries/companies.txt");
const BROWSERS: &str = include_str!("../dictionaries/browsers.txt");
const EMAIL_PROVIDERS: &str = include_str!("../dictionaries/email_providers.txt");
const WORDS: &str = include_str!("../dictionaries/words.txt");
const SHORT_COMMENTS: &str = include_str!("../dictionaries/short_comments.txt");

/// Non-comment, non-blank lines split on `|`.
pub fn rows(text: &str) -> impl Iterator<Item = Vec<&str>> {
    text.lines()
        .map(str::trim_end)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.split('|').collect())
}

fn list(field: &str) -> Vec<String> {
    field.split(';').filter(|s| !s.is_empty()).map(str::to_string).collect()
}

#[derive(Clone, Debug)]
pub struct PropertyDictionary {
    values: Vec<String>,
    rankings: HashMap<String, Vec<u32>>,
    default_ranking: Vec<u32>,
    cumulative: Vec<f64>,
}

impl PropertyDictionary {
    /// `preferred[key]` lists value indices ranked first for `key`; the rest of
    /// `D` follows in a key-specific pseudo-random order. Rank `r` has
    /// probability proportional to `(1 - decay)^r`.
    pub fn new(values: Vec<String>, preferred: &HashMap<String, Vec<usize>>, decay: f64) -> PropertyDictionary {
        let n = values.len();
        let rank_for = |key: &str, first: &[usize]| -> Vec<u32> {
            let salt = key.bytes().fold(0u64, |h, b| h.wrapping_mul(131).wrapping_add(b as u64));
            let mut rest: Vec<usize> = (0..n).filter(|i| !first.contains(i)).collect();
            rest.sort_by_key(|&i| (key_hash(salt, Stream::RandomKey, i as u64), i));
            first.iter().chain(rest.iter()).map(|&i| i as u32).collect()
        };
        let rankings = preferred.iter().map(|(k, v)| (k.clone(), rank_for(k, v))).collect();
        let default_ranking = (0..n as u32).collect();
        let mut cumulative = Vec::with_capacity(n);
        let mut acc = 0.0;
        for r in 0..n {
            acc += (1.0 - decay).powi(r as i32);
            cumulative.push(acc);
        }
        PropertyDictionary { values, rankings, default_ranking, cumulative }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[String] {
        &self.values
    }

    /// The ranking for `key`: a permutation of all value indices.
    pub fn ranking(&self, key: &str) -> &[u32] {
        self.rankings.get(key).unwrap_or(&self.default_ranking)
    }

    pub fn sample_rank<R: Rng>(&self, rng: &mut R) -> usize {
        let total = *self.cumulative.last().expect("non-empty dictionary");
        let u = rng.random::<f64>() * total;
        self.cumulative.partition_point(|&c| c <= u).min(self.values.len() - 1)
    }

    /// Index into `values()` drawn for `key`.
    pub fn sample_index<R: Rng>(&self, key: &str, rng: &mut R) -> usize {
        self.ranking(key)[self.sample_rank(rng)] as usize
    }

    pub fn sample<R: Rng>(&self, key: &str, rng: &mut R) -> &str {
        &self.values[self.sample_index(key, rng)]
    }
}

/// Weighted list sampled by cumulative weight.
#[derive(Clone, Debug)]
pub struct WeightedList {
    pub values: Vec<String>,
    cumulative: Vec<f64>,
}

impl WeightedList {
    fn parse(text: &str) -> WeightedList {
        let mut values = Vec::new();
        let mut cumulative = Vec::new();
        let mut acc = 0.0;
        for r in rows(text) {
            acc += r[1].parse::<f64>().expect("numeric weight");
            values.push(r[0].to_string());
            cumulative.push(acc);
        }
        WeightedList { values, cumulative }
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> &str {
        let u = rng.random::<f64>() * self.cumulative.last().expect("non-empty");
        &self.values[self.cumulative.partition_point(|&c| c <= u).min(self.values.len() - 1)]
    }
}

#[derive(Clone, Debug)]
pub struct CountryEntry {
    pub name: String,
    pub continent: String,
    pub weight: f64,
    pub languages: Vec<String>,
    pub ip_prefix: String,
    pub cities: Vec<String>,
    pub companies: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct Dictionaries {
    pub countries: Vec<CountryEntry>,
    /// `(name, parent name)` in dependency order.
    pub tag_classes: Vec<(String, Option<String>)>,
    /// `(name, class name)`.
    pub tags: Vec<(String, String)>,
    pub female_names: PropertyDictionary,
    pub male_names: PropertyDictionary,
    pub last_names: PropertyDictionary,
    pub browsers: WeightedList,
    pub email_providers: WeightedList,
    pub words: Vec<String>,
    pub short_comments: Vec<String>,
}

impl Dictionaries {
    /// The dictionaries compiled into the binary.
    pub fn embedded() -> Dictionaries {
        let companies: HashMap<&str, Vec<String>> = rows(COMPANIES).map(|r| (r[0], list(r[1]))).collect();
        let countries: Vec<CountryEntry> = rows(COUNTRIES)
            .map(|r| CountryEntry {
                name: r[0].to_string(),
                continent: r[1].to_string(),
                weight: r[2].parse().expect("numeric weight"),
                languages: list(r[3]),
                ip_prefix: r[4].to_string(),
                cities: list(r[5]),
                companies: companies.get(r[0]).cloned().unwrap_or_default(),
            })
            .collect();
        let tag_classes = rows(TAG_CLASSES)
            .map(|r| (r[0].to_string(), (!r[1].is_empty()).then(|| r[1].to_string())))
            .collect();
        let tags = rows(TAGS).map(|r| (r[0].to_string(), r[1].to_string())).collect();

        let names_for = |gender: &str| {
            let mut values: Vec<String> = Vec::new();
            let mut preferred: HashMap<String, Vec<usize>> = HashMap::new();
            for r in rows(FIRST_NAMES).filter(|r| r[1] == gender) {
                let mut idx = Vec::new();
                for name in list(r[2]) {
                    let i = match values.iter().position(|v| *v == name) {
                        Some(i) => i,
                        None => {
                            values.push(name);
                            values.len() - 1
                        }
                    };
                    idx.push(i);
                }
                preferred.insert(r[0].to_string(), idx);
            }
            PropertyDictionary::new(values, &preferred, 0.3)
        };
        let mut surnames: Vec<String> = Vec::new();
        let mut preferred: HashMap<String, Vec<usize>> = HashMap::new();
        for r in rows(LAST_NAMES) {
            let mut idx = Vec::new();
            for name in list(r[1]) {
                let i = surnames.iter().position(|v| *v == name).unwrap_or_else(|| {
                    surnames.push(name);
                    surnames.len() - 1
                });
                idx.push(i);
            }
            preferred.insert(r[0].to_string(), idx);
        }
        let words = rows(WORDS).map(|r| r[0].to_string()).collect();
        let short_comments = rows(SHORT_COMMENTS).map(|r| r[0].to_string()).collect();
        Dictionaries {
            countries,
            tag_classes,
            tags,
            female_names: names_for("female"),
            male_names: names_for("male"),
            last_names: PropertyDictionary::new(surnames, &preferred, 0.25),
            browsers: WeightedList::parse(BROWSERS),
            email_providers: WeightedList::parse(EMAIL_PROVIDERS),
            words,
            short_comments,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn embedded_dictionaries_parse() {
        let d = Dictionaries::embedded();
        assert!(d.countries.len() >= 25);
        assert!(d.countries.iter().all(|c| c.cities.len() == 3 && !c.companies.is_empty()));
        assert!(d.tags.len() >= 60);
        for (_, class) in &d.tags {
            assert!(d.tag_classes.iter().any(|(n, _)| n == class), "{class}");
        }
    }

    #[test]
    fn ranking_is_a_permutation_preferring_the_key() {
        let d = Dictionaries::embedded();
        let r = d.female_names.ranking("Hungary");
        let mut sorted = r.to_vec();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..d.female_names.len() as u32).collect::<Vec<_>>());
        assert_eq!(d.female_names.values()[r[0] as usize], "Hanna");
    }

    #[test]
    fn sampling_favours_low_ranks() {
        let d = Dictionaries::embedded();
        let mut rng = stream(1, Stream::Person, 0);
        let hits = (0..2000)
            .filter(|_| {
                let n = d.male_names.sample("Japan", &mut rng);
                ["Haruto", "Sota", "Ren", "Takumi", "Hiroshi", "Kenji"].contains(&n)
            })
            .count();
        assert!(hits > 1500, "{hits}");
    }
}
