//! Deterministic generator for a correlated social network.
//!
//! Generation runs in stages: static entities from embedded dictionaries,
//! persons, friendships in three similarity passes, then per-person activity.
//! Every random draw comes from a stream keyed by the entity it belongs to,
//! so output is identical for any worker count.

pub mod activity;
pub mod config;
pub mod dictionaries;
pub mod error;
pub mod knows;
pub mod persons;
pub mod rng;
pub mod split;
pub mod stats;
pub mod world;

use snbkit_core::{DeleteEvent, GraphSnapshot, UpdateEvent};

pub use activity::{flashmob_events, generate_activity, Activity};
pub use config::{preset_persons, FlashmobEvent, GeneratorConfig, SCALE_PRESETS};
pub use dictionaries::{Dictionaries, PropertyDictionary};
pub use error::GenError;
pub use knows::{generate_knows, knows_pass, Dimension, KnowsEdge};
pub use persons::{generate_persons, PersonRecord};
pub use split::{assemble, select_deletes, split_dataset};
pub use stats::{compute_stats, CurationStats, PersonCounts};
pub use world::World;

/// Generator output.
#[derive(Clone, Debug)]
pub struct Generated {
    /// Entities created before the cut.
    pub snapshot: GraphSnapshot,
    /// Inserts at or after the cut, in replay order.
    pub updates: Vec<UpdateEvent>,
    /// Empty unless `delete_fraction > 0`.
    pub deletes: Vec<DeleteEvent>,
    /// Counts over `snapshot`.
    pub stats: CurationStats,
    /// The undivided network.
    pub full: GraphSnapshot,
    pub persons: Vec<PersonRecord>,
    /// Knows edges with the pass that produced them.
    pub knows: Vec<KnowsEdge>,
    pub flashmobs: Vec<FlashmobEvent>,
}

/// Persons and friendships only.
pub fn generate_social(cfg: &GeneratorConfig) -> Result<(World, Vec<PersonRecord>, Vec<KnowsEdge>), GenError> {
    cfg.validate()?;
    in_pool(cfg, || {
        let dicts = Dictionaries::embedded();
        let world = World::build(&dicts)?;
        let persons = generate_persons(cfg, &world, &dicts);
        let knows = generate_knows(&persons, cfg);
        Ok((world, persons, knows))
    })
}

pub fn generate(cfg: &GeneratorConfig) -> Result<Generated, GenError> {
    cfg.validate()?;
    in_pool(cfg, || {
        let dicts = Dictionaries::embedded();
        let world = World::build(&dicts)?;
        let persons = generate_persons(cfg, &world, &dicts);
        let knows = generate_knows(&persons, cfg);
        let flashmobs = flashmob_events(cfg, &world);
        let activity = generate_activity(cfg, &world, &dicts, &persons, &knows, &flashmobs);
        let full = assemble(&world.graph, &persons, &knows, &activity)?;
        let (snapshot, updates) = split_dataset(&full, cfg.cut(), cfg.start());
        let deletes = select_deletes(&full, cfg);
        let stats = compute_stats(&snapshot);
        Ok(Generated { snapshot, updates, deletes, stats, full, persons, knows, flashmobs })
    })
}

fn in_pool<T: Send>(cfg: &GeneratorConfig, f: impl FnOnce() -> Result<T, GenError> + Send) -> Result<T, GenError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers.max(1))
        .build()
        .map_err(|e| GenError::Pool(e.to_string()))?;
    pool.install(f)
}
