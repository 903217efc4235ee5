//! Counter-keyed random streams.
//!
//! Every entity draws from its own stream derived from
//! `(seed, stream kind, entity id)`, so the values it receives do not depend
//! on which worker generates it or in what order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use snbkit_core::DateTime;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Person = 1,
    KnowsCandidates = 2,
    KnowsTrim = 3,
    KnowsDate = 4,
    Activity = 5,
    Flashmob = 6,
    RandomKey = 7,
    Delete = 8,
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A 64-bit hash of the key triple.
pub fn key_hash(seed: u64, stream: Stream, id: u64) -> u64 {
    splitmix(splitmix(splitmix(seed) ^ (stream as u64)).wrapping_add(id))
}

/// Independent random stream for one entity.
pub fn stream(seed: u64, stream: Stream, id: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(key_hash(seed, stream, id))
}

/// Stream for a sub-entity, e.g. one pass of one person.
pub fn substream(seed: u64, s: Stream, id: u64, sub: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix(key_hash(seed, s, id) ^ splitmix(sub.wrapping_add(0x5151))))
}

/// Uniform instant strictly inside `(lo, hi)`, or `None` when the interval has no interior.
pub fn strictly_between<R: Rng>(rng: &mut R, lo: DateTime, hi: DateTime) -> Option<DateTime> {
    let (a, b) = (lo.millis(), hi.millis());
    if b - a < 2 {
        return None;
    }
    Some(DateTime::from_millis(rng.random_range(a + 1..b)))
}

/// `lo` plus a delay drawn uniformly from `[min_ms, max_ms]`, constrained to stay below `hi`.
pub fn after<R: Rng>(rng: &mut R, lo: DateTime, min_ms: i64, max_ms: i64, hi: DateTime) -> Option<DateTime> {
    let room = hi.millis() - lo.millis() - 1;
    if room < 1 {
        return None;
    }
    let max = max_ms.min(room).max(1);
    let min = min_ms.min(max).max(1);
    Some(lo.plus_millis(rng.random_range(min..=max)))
}

/// Poisson draw with the given mean; 0 for a non-positive mean.
pub fn poisson<R: Rng>(rng: &mut R, mean: f64) -> u32 {
    match rand_distr::Poisson::new(mean) {
        Ok(d) => rng.sample(d).min(1e6) as u32,
        Err(_) => 0,
    }
}

/// Number of failures before the first success, success probability `p`.
pub fn geometric<R: Rng>(rng: &mut R, p: f64) -> u32 {
    match rand_distr::Geometric::new(p) {
        Ok(d) => rng.sample(d).min(1_000_000) as u32,
        Err(_) => 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_keyed() {
        let a: u64 = stream(7, Stream::Person, 3).random();
        let b: u64 = stream(7, Stream::Person, 3).random();
        let c: u64 = stream(7, Stream::Person, 4).random();
        let d: u64 = stream(8, Stream::Person, 3).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }

    #[test]
    fn between_respects_bounds() {
        let mut r = stream(1, Stream::Activity, 1);
        let lo = DateTime::from_millis(10);
        let hi = DateTime::from_millis(13);
        for _ in 0..100 {
            let t = strictly_between(&mut r, lo, hi).unwrap();
            assert!(t > lo && t < hi);
        }
        assert!(strictly_between(&mut r, lo, DateTime::from_millis(11)).is_none());
    }
}
