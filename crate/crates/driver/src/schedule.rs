//! Merging updates and complex reads into one timed plan.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use snbkit_core::{QueryTemplateId, ReadQuery, UpdateEvent};

use crate::error::DriverError;
use crate::workload::WorkloadDefinition;

pub type Parameters = BTreeMap<QueryTemplateId, Vec<ReadQuery>>;

#[derive(Clone, Debug, PartialEq)]
pub enum Operation {
    Read(ReadQuery),
    Update(UpdateEvent),
}

impl Operation {
    pub fn label(&self) -> String {
        match self {
            Operation::Read(q) => q.template().to_string(),
            Operation::Update(e) => format!("IU{}", e.op.op_id()),
        }
    }

    pub fn is_update(&self) -> bool {
        matches!(self, Operation::Update(_))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScheduleEntry {
    /// Wall-clock offset from the start of the run.
    pub scheduled_ms: i64,
    pub operation: Operation,
    /// Updates earlier in the schedule; reads wait for all of them.
    pub updates_before: usize,
}

fn offset(sim_ms: i64, tcr: f64) -> i64 {
    (sim_ms as f64 / tcr).round() as i64
}

/// Interleaves complex reads into the update stream.
///
/// Instance `k` of IC `q` follows update number `k * freq(q)`, so a stream
/// of `n` updates yields `n / freq(q)` instances. Bindings are taken
/// round-robin from `params`, starting at a seeded position.
pub fn build_schedule(updates: &[UpdateEvent], params: &Parameters, wd: &WorkloadDefinition) -> Result<Vec<ScheduleEntry>, DriverError> {
    wd.validate()?;
    let (count, time_of): (u64, Box<dyn Fn(u64) -> i64 + '_>) = match updates.first() {
        Some(first) => {
            let t0 = first.time.millis();
            (updates.len() as u64, Box::new(move |i| offset(updates[i as usize].time.millis() - t0, wd.tcr)))
        }
        None => match wd.synthetic_span_ms {
            Some(span) if wd.update_interleave_ms > 0 => {
                let gap = wd.update_interleave_ms;
                ((span / gap) as u64, Box::new(move |i| offset((i as i64 + 1) * gap, wd.tcr)))
            }
            _ => return Err(DriverError::EmptyClock),
        },
    };

    // (update index the read follows, IC number, binding)
    let mut reads: Vec<(u64, u8, ReadQuery)> = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(wd.seed);
    for ic in 1..=14u8 {
        let freq = wd.frequency(ic) as u64;
        let instances = count / freq;
        if instances == 0 {
            continue;
        }
        let t = QueryTemplateId::ic(ic);
        let pool = params.get(&t).filter(|p| !p.is_empty()).ok_or(DriverError::MissingParameters(t))?;
        let start = rng.random_range(0..pool.len());
        for k in 0..instances {
            reads.push(((k + 1) * freq - 1, ic, pool[(start + k as usize) % pool.len()].clone()));
        }
    }
    reads.sort_by_key(|(after, ic, _)| (*after, *ic));

    let mut out = Vec::with_capacity(updates.len() + reads.len());
    let mut reads = reads.into_iter().peekable();
    for (i, e) in updates.iter().enumerate() {
        out.push(ScheduleEntry { scheduled_ms: time_of(i as u64), operation: Operation::Update(e.clone()), updates_before: i });
        while let Some((_, _, q)) = reads.next_if(|(after, _, _)| *after == i as u64) {
            out.push(ScheduleEntry { scheduled_ms: time_of(i as u64), operation: Operation::Read(q), updates_before: i + 1 });
        }
    }
    for (after, _, q) in reads {
        out.push(ScheduleEntry { scheduled_ms: time_of(after), operation: Operation::Read(q), updates_before: 0 });
    }
    Ok(out)
}

/// Wall-clock length of a schedule.
pub fn span_ms(schedule: &[ScheduleEntry]) -> i64 {
    match (schedule.first(), schedule.last()) {
        (Some(a), Some(b)) => b.scheduled_ms - a.scheduled_ms,
        _ => 0,
    }
}
