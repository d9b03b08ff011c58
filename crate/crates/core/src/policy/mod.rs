//! Sequential decision policies behind one contract: [`Policy::select`]
//! produces the assignment for slot `t`, then [`Policy::observe`] ingests the
//! per-UE ACK/NACK bits for exactly that assignment.

mod cts;
mod cucb;
mod satcts;

use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Beta, Distribution};

pub use cts::Cts;
pub use cucb::Cucb;
pub use satcts::{SatCts, SatCtsConfig};

use crate::error::Result;
use crate::model::{Assignment, Choice, Feedback, ProblemDims, RateSet};
use crate::stats::{BetaPosterior, ScoreTable};

/// What produced a slot's assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    /// Covering schedule before the first gate check.
    Init,
    /// The LCB gate fired.
    Lcb,
    /// The MEAN gate fired.
    Mean,
    /// Committed CTS round `i` of SAT-CTS (1-based).
    Committed(u32),
    /// Plain CTS baseline.
    Thompson,
    /// CUCB baseline.
    Ucb,
}

impl Phase {
    pub fn label(&self) -> &'static str {
        match self {
            Phase::Init => "INIT",
            Phase::Lcb => "LCB",
            Phase::Mean => "MEAN",
            Phase::Committed(_) | Phase::Thompson => "CTS",
            Phase::Ucb => "UCB",
        }
    }

    /// Committed-round index, if any.
    pub fn round(&self) -> Option<u32> {
        match self {
            Phase::Committed(i) => Some(*i),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub assignment: Assignment,
    pub phase: Phase,
}

pub trait Policy {
    fn name(&self) -> &'static str;

    fn dims(&self) -> &ProblemDims;

    fn select(&mut self, t: u64) -> Result<Selection>;

    fn observe(&mut self, assignment: &Assignment, feedback: &Feedback, t: u64) -> Result<()>;
}

/// Covering initialization: `B*K*R` rounds; in round `j` (0-based) UE `m`
/// plays beam `(j / R + m) mod BK` at rate `j mod R`. Every
/// `(ue, beam, rate)` triple appears exactly once.
pub fn init_cover_schedule(dims: &ProblemDims) -> Result<Vec<Assignment>> {
    let beams = dims.beam_count();
    let rates = dims.rate_levels();
    (0..dims.init_rounds())
        .map(|j| {
            let choices = (0..dims.ues())
                .map(|m| Choice {
                    beam: (j / rates + m) % beams,
                    rate: j % rates,
                })
                .collect();
            Assignment::new(choices, dims)
        })
        .collect()
}

/// `r_i * theta_i` with `theta_i ~ Beta(A_i, B_i)`, drawn in flat arm order.
pub(crate) fn thompson_scores<R: Rng>(
    posterior: &BetaPosterior,
    dims: &ProblemDims,
    rates: &RateSet,
    rng: &mut R,
) -> ScoreTable {
    let r_levels = dims.rate_levels();
    let scores = (0..posterior.len())
        .map(|arm| {
            let (a, b) = posterior.params(arm);
            let theta = if a == 1 && b == 1 {
                rng.random::<f64>()
            } else {
                Beta::new(a as f64, b as f64)
                    .expect("pseudo-counts are >= 1")
                    .sample(rng)
            };
            rates.get(arm % r_levels) * theta
        })
        .collect();
    ScoreTable::from_vec(scores)
}
