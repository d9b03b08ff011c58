//! Runs one policy against one environment for a full horizon.

use alloc::string::String;
use alloc::vec::Vec;

use crate::environment::{Environment, TruthTable};
use crate::error::{Error, Result};
use crate::metrics::{
    per_round_satisficing_regret, per_round_standard_regret, RunTrace, SlotRecord,
};
use crate::policy::Policy;

/// Plays slots `1..=T`. Channel draws depend only on `(channel_seed, t)`,
/// so policies sharing a seed see common random numbers.
pub fn run_policy(
    policy: &mut dyn Policy,
    env: &Environment,
    truth: &TruthTable,
    threshold: f64,
    channel_seed: u64,
) -> Result<RunTrace> {
    if policy.dims() != env.dims() || truth.dims() != env.dims() {
        return Err(Error::InvalidDims(
            "policy, environment and truth table disagree on dimensions".into(),
        ));
    }
    let horizon = env.dims().horizon();
    let mut records = Vec::with_capacity(horizon as usize);
    for t in 1..=horizon {
        let sel = policy.select(t)?;
        let feedback = env.step(&sel.assignment, channel_seed, t)?;
        policy.observe(&sel.assignment, &feedback, t)?;
        records.push(SlotRecord {
            slot: t,
            satisficing_regret: per_round_satisficing_regret(&sel.assignment, truth, threshold),
            standard_regret: per_round_standard_regret(&sel.assignment, truth),
            assignment: sel.assignment,
            feedback,
            phase: sel.phase,
        });
    }
    Ok(RunTrace {
        policy: String::from(policy.name()),
        seed: channel_seed,
        threshold,
        rates: env.rates().as_slice().to_vec(),
        records,
    })
}
