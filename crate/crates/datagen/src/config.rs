use snbkit_core::{Date, DateTime, Id};

use crate::error::GenError;

/// A burst of posts about one tag around a peak instant.
#[derive(Clone, Debug, PartialEq)]
pub struct FlashmobEvent {
    pub tag: Id,
    pub peak: DateTime,
    pub intensity: f64,
}

/// Named dataset sizes.
pub const SCALE_PRESETS: &[(&str, u64)] = &[
    ("SF0.001", 150),
    ("SF0.003", 350),
    ("SF0.01", 1100),
    ("SF0.03", 2700),
    ("SF0.1", 7300),
];

pub fn preset_persons(name: &str) -> Option<u64> {
    SCALE_PRESETS.iter().find(|(n, _)| n.eq_ignore_ascii_case(name)).map(|(_, p)| *p)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorConfig {
    pub num_persons: u64,
    pub start_year: i32,
    pub num_years: u32,
    pub seed: u64,
    /// Size of the rayon pool; does not affect the output.
    pub workers: usize,
    /// Similarity window `W`.
    pub window: u32,
    /// Success probability of the geometric rank-distance distribution.
    pub geometric_p: f64,
    pub degree_mean: f64,
    pub degree_sigma: f64,
    /// Shares of each person's degree given to the study, interest and random passes.
    pub dimension_split: [f64; 3],
    pub flashmob_count: u32,
    /// Fraction of text posts drawn from flashmob spikes rather than the background.
    pub flashmob_share: f64,
    /// Half-width of a flashmob spike in milliseconds.
    pub flashmob_half_width_ms: i64,
    /// Explicit flashmob events; when non-empty they replace the random ones.
    pub flashmobs: Vec<FlashmobEvent>,
    pub bulk_fraction: f64,
    /// Expected wall posts per friend.
    pub wall_posts_per_friend: f64,
    /// Expected text posts per person regardless of friends.
    pub activity_floor: f64,
    pub albums_per_person: f64,
    pub photos_per_album: f64,
    /// Probability that a person moderates a group.
    pub group_probability: f64,
    pub group_posts_per_member: f64,
    pub comments_per_post: f64,
    pub likes_per_message: f64,
    /// Probability of adding a random tag of the same class to a message.
    pub tag_enrichment: f64,
    /// Fraction of entities to delete after the bulk cut; 0 disables delete streams.
    pub delete_fraction: f64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            num_persons: 150,
            start_year: 2010,
            num_years: 3,
            seed: 0,
            workers: 1,
            window: 50,
            geometric_p: 0.12,
            degree_mean: 15.0,
            degree_sigma: 1.0,
            dimension_split: [0.45, 0.45, 0.10],
            flashmob_count: 6,
            flashmob_share: 0.05,
            flashmob_half_width_ms: 12 * 3_600_000,
            flashmobs: Vec::new(),
            bulk_fraction: 0.9,
            wall_posts_per_friend: 0.6,
            activity_floor: 0.5,
            albums_per_person: 0.6,
            photos_per_album: 3.0,
            group_probability: 0.3,
            group_posts_per_member: 0.5,
            comments_per_post: 1.5,
            likes_per_message: 1.2,
            tag_enrichment: 0.2,
            delete_fraction: 0.0,
        }
    }
}

impl GeneratorConfig {
    pub fn with_persons(num_persons: u64, seed: u64) -> GeneratorConfig {
        GeneratorConfig { num_persons, seed, ..GeneratorConfig::default() }
    }

    pub fn start(&self) -> DateTime {
        Date::ymd(self.start_year, 1, 1).to_datetime()
    }

    pub fn end(&self) -> DateTime {
        Date::ymd(self.start_year + self.num_years as i32, 1, 1).to_datetime()
    }

    /// Instant separating the bulk snapshot from the update stream.
    pub fn cut(&self) -> DateTime {
        let (s, e) = (self.start().millis(), self.end().millis());
        DateTime::from_millis(s + ((e - s) as f64 * self.bulk_fraction).round() as i64)
    }

    pub fn validate(&self) -> Result<(), GenError> {
        let bad = |m: &str| Err(GenError::InvalidConfig(m.to_string()));
        if self.num_persons == 0 {
            return bad("numPersons must be at least 1");
        }
        if self.num_years == 0 {
            return bad("numYears must be at least 1");
        }
        if !(1900..=2100).contains(&self.start_year) {
            return bad("startYear out of range");
        }
        if self.dimension_split.iter().any(|s| *s < 0.0) || (self.dimension_split.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return bad("dimensionSplit must be nonnegative and sum to 1");
        }
        if !(self.bulk_fraction > 0.0 && self.bulk_fraction <= 1.0) {
            return bad("bulkFraction must be in (0, 1]");
        }
        if self.window == 0 {
            return bad("window must be at least 1");
        }
        if !(self.geometric_p > 0.0 && self.geometric_p < 1.0) {
            return bad("geometric p must be in (0, 1)");
        }
        if !(self.degree_mean >= 1.0 && self.degree_sigma >= 0.0) {
            return bad("degree distribution parameters out of range");
        }
        if !(0.0..=1.0).contains(&self.flashmob_share) || !(0.0..=1.0).contains(&self.delete_fraction) {
            return bad("shares must be in [0, 1]");
        }
        let (s, e) = (self.start(), self.end());
        if self.flashmobs.iter().any(|f| f.peak < s || f.peak >= e || f.intensity <= 0.0) {
            return bad("flashmob peak outside the simulation window or non-positive intensity");
        }
        Ok(())
    }
}
