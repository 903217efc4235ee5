//! Window selection over proxy costs.

use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use snbkit_core::{QueryTemplateId, ReadQuery};

use crate::error::CurationError;

/// Largest accepted max/min cost ratio before the band is widened.
pub const TARGET_BAND: f64 = 2.0;

#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub query: ReadQuery,
    /// Intermediate-result count standing in for runtime.
    pub cost: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Curated {
    pub template: QueryTemplateId,
    /// Interleaved by cost rank so that any prefix and the following block look alike.
    pub bindings: Vec<Candidate>,
    /// Achieved max/min cost ratio.
    pub band: f64,
}

impl Curated {
    pub fn widened(&self) -> bool {
        self.band > TARGET_BAND
    }

    pub fn queries(&self) -> Vec<ReadQuery> {
        self.bindings.iter().map(|c| c.query.clone()).collect()
    }
}

/// Max/min ratio of a cost range; infinite when only the maximum is nonzero.
pub fn band(min: u64, max: u64) -> f64 {
    match (min, max) {
        (_, 0) => 1.0,
        (0, _) => f64::INFINITY,
        (lo, hi) => hi as f64 / lo as f64,
    }
}

struct Window {
    start: usize,
    band: f64,
    spread: f64,
    offset: u64,
}

impl Window {
    fn rank(&self, other: &Window) -> Ordering {
        let outside = |w: &Window| w.band > TARGET_BAND;
        outside(self)
            .cmp(&outside(other))
            .then_with(|| if outside(self) { self.band.total_cmp(&other.band) } else { Ordering::Equal })
            .then_with(|| self.spread.total_cmp(&other.spread))
            .then_with(|| self.offset.cmp(&other.offset))
            .then_with(|| self.start.cmp(&other.start))
    }
}

/// Picks `n` candidates whose costs lie as close together as possible.
///
/// Candidates are shuffled with `seed`, stably sorted by cost, and every run
/// of `n` consecutive candidates is scored by `(max - min) / median`. Runs
/// inside the target band win over runs outside it; ties go to the run whose
/// median is nearest the overall median. Zero-cost candidates are dropped
/// when enough others remain.
pub fn curate(template: QueryTemplateId, mut candidates: Vec<Candidate>, n: usize, seed: u64) -> Result<Curated, CurationError> {
    if candidates.len() < n {
        let lo = candidates.iter().map(|c| c.cost).min().unwrap_or(0);
        let hi = candidates.iter().map(|c| c.cost).max().unwrap_or(0);
        return Err(CurationError::InsufficientCandidates {
            template,
            available: candidates.len(),
            needed: n,
            band: band(lo, hi),
        });
    }
    if n == 0 {
        return Ok(Curated { template, bindings: Vec::new(), band: 1.0 });
    }
    candidates.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    candidates.sort_by_key(|c| c.cost);
    if candidates.iter().filter(|c| c.cost > 0).count() >= n {
        candidates.retain(|c| c.cost > 0);
    }
    let costs: Vec<u64> = candidates.iter().map(|c| c.cost).collect();
    let overall = costs[(costs.len() - 1) / 2];
    let best = (0..=costs.len() - n)
        .map(|start| {
            let (lo, hi, med) = (costs[start], costs[start + n - 1], costs[start + (n - 1) / 2]);
            Window { start, band: band(lo, hi), spread: (hi - lo) as f64 / med.max(1) as f64, offset: med.abs_diff(overall) }
        })
        .min_by(|a, b| a.rank(b))
        .expect("at least one window");
    let chosen: Vec<Candidate> = candidates.drain(best.start..best.start + n).collect();
    let (evens, odds): (Vec<_>, Vec<_>) = chosen.into_iter().enumerate().partition(|(i, _)| i % 2 == 0);
    let bindings = evens.into_iter().chain(odds).map(|(_, c)| c).collect();
    Ok(Curated { template, bindings, band: best.band })
}

/// Two-sample Kolmogorov-Smirnov statistic.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    if a.is_empty() || b.is_empty() {
        return if a.len() == b.len() { 0.0 } else { 1.0 };
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs());
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ks_of_identical_samples_is_zero() {
        assert_eq!(ks_statistic(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]), 0.0);
    }

    #[test]
    fn ks_of_disjoint_samples_is_one() {
        assert_eq!(ks_statistic(&[1.0, 2.0], &[5.0, 6.0, 7.0]), 1.0);
    }

    #[test]
    fn band_edges() {
        assert_eq!(band(0, 0), 1.0);
        assert!(band(0, 3).is_infinite());
        assert_eq!(band(4, 8), 2.0);
    }
}
