//! Workload mix and pacing.

use crate::error::DriverError;

/// Updates issued per complex read, IC1 to IC14, by scale factor.
pub const FREQUENCIES: &[(&str, [u32; 14])] = &[
    ("SF1", [26, 37, 69, 36, 57, 129, 87, 45, 157, 30, 16, 44, 19, 49]),
    ("SF3", [26, 37, 79, 36, 61, 172, 72, 27, 209, 32, 17, 44, 19, 49]),
    ("SF10", [26, 37, 92, 36, 66, 236, 54, 15, 287, 35, 19, 44, 19, 49]),
    ("SF30", [26, 37, 106, 36, 72, 316, 48, 9, 384, 37, 20, 44, 19, 49]),
    ("SF100", [26, 37, 123, 36, 78, 434, 38, 5, 527, 40, 22, 44, 19, 49]),
    ("SF300", [26, 37, 142, 36, 84, 580, 32, 3, 705, 44, 24, 44, 19, 49]),
    ("SF1000", [26, 37, 165, 36, 91, 796, 25, 1, 967, 47, 26, 44, 19, 49]),
];

pub fn frequencies_for(scale: &str) -> Option<[u32; 14]> {
    FREQUENCIES.iter().find(|(s, _)| s.eq_ignore_ascii_case(scale)).map(|(_, f)| *f)
}

#[derive(Clone, Debug, PartialEq)]
pub struct WorkloadDefinition {
    pub frequencies: [u32; 14],
    /// Simulation time is divided by this to get wall-clock offsets.
    pub tcr: f64,
    pub short_read_probability: f64,
    /// Factor applied to the continuation probability after each short-read sequence.
    pub short_read_decay: f64,
    pub seed: u64,
    /// Average simulation gap between updates, from the stream properties.
    pub update_interleave_ms: i64,
    /// Clock used when the update stream is empty.
    pub synthetic_span_ms: Option<i64>,
    /// Leading schedule entries excluded from scoring.
    pub warmup_ops: usize,
}

impl Default for WorkloadDefinition {
    fn default() -> Self {
        WorkloadDefinition {
            frequencies: frequencies_for("SF1").expect("SF1 row"),
            tcr: 1.0,
            short_read_probability: 1.0,
            short_read_decay: 0.1,
            seed: 0,
            update_interleave_ms: 0,
            synthetic_span_ms: None,
            warmup_ops: 0,
        }
    }
}

impl WorkloadDefinition {
    pub fn frequency(&self, ic: u8) -> u32 {
        self.frequencies[ic as usize - 1]
    }

    pub fn validate(&self) -> Result<(), DriverError> {
        let bad = |m: &str| Err(DriverError::InvalidWorkload(m.to_string()));
        if !(self.tcr.is_finite() && self.tcr > 0.0) {
            return bad("tcr must be positive");
        }
        if self.frequencies.contains(&0) {
            return bad("frequencies must be positive");
        }
        if !(0.0..=1.0).contains(&self.short_read_probability) || !(0.0..=1.0).contains(&self.short_read_decay) {
            return bad("short read probability and decay must lie in [0, 1]");
        }
        Ok(())
    }
}
