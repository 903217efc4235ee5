//! Parameter curation: enumerate candidate bindings with proxy costs, then
//! greedily keep runs of similar cost.

pub mod candidates;
pub mod error;
pub mod files;
pub mod greedy;

use rayon::prelude::*;
use snbkit_core::{GraphSnapshot, QueryTemplateId};
use snbkit_datagen::CurationStats;

pub use candidates::{candidates, Context};
pub use error::CurationError;
pub use files::{file_name, read_parameter_file, read_parameter_files, write_parameter_files, ParamFormat, ParameterSet, PARAMS_DIR};
pub use greedy::{band, curate, ks_statistic, Candidate, Curated, TARGET_BAND};

fn template_seed(seed: u64, t: QueryTemplateId) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ ((t.family as u64) << 8 | t.number as u64)
}

/// Curates `n` bindings for each template, in the order given.
pub fn curate_all(
    g: &GraphSnapshot,
    stats: &CurationStats,
    templates: &[QueryTemplateId],
    n: usize,
    seed: u64,
) -> Result<Vec<Curated>, CurationError> {
    let ctx = Context::new(g, stats);
    templates.par_iter().map(|&t| curate(t, candidates(&ctx, t), n, template_seed(seed, t))).collect()
}

/// Curated bindings as a parameter set.
pub fn parameter_set(curated: &[Curated]) -> ParameterSet {
    curated.iter().map(|c| (c.template, c.queries())).collect()
}
