use alloc::vec::Vec;

use super::{init_cover_schedule, thompson_scores, Phase, Policy, Selection};
use crate::assignment::best_assignment;
use crate::error::{Error, Result};
use crate::model::{Assignment, Feedback, ProblemDims, RateSet};
use crate::stats::{BetaPosterior, SharedCounters};
use crate::stream::{substream, Domain};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SatCtsConfig {
    /// Satisficing threshold `tau_r` on average per-UE throughput.
    pub threshold: f64,
    /// Theory mode: reset Beta priors at the start of each committed round
    /// and update them only on committed-round slots. Experiment mode
    /// (`false`) keeps one global posterior updated on every slot.
    pub reset_priors: bool,
    pub seed: u64,
}

/// Satisficing combinatorial Thompson sampling.
///
/// After the covering schedule, each non-committed slot checks the LCB gate,
/// then the MEAN gate, and plays the first candidate whose average index
/// reaches the threshold. If neither fires, a committed CTS round of length
/// `min(2^i, T - t + 1)` starts at that very slot and runs without
/// re-checking the gate.
#[derive(Debug, Clone)]
pub struct SatCts {
    dims: ProblemDims,
    rates: RateSet,
    config: SatCtsConfig,
    schedule: Vec<Assignment>,
    counters: SharedCounters,
    posterior: BetaPosterior,
    /// Index of the next (or current) committed round, starting at 1.
    round: u32,
    /// Steps left in the current committed round.
    remaining: u64,
    /// Phase of the most recent selection, consumed by `observe`.
    pending: Option<(u64, Phase)>,
}

impl SatCts {
    pub fn new(dims: ProblemDims, rates: RateSet, config: SatCtsConfig) -> Result<Self> {
        if rates.len() != dims.rate_levels() {
            return Err(Error::InvalidRates(alloc::format!(
                "{} rates for R = {}",
                rates.len(),
                dims.rate_levels()
            )));
        }
        let schedule = init_cover_schedule(&dims)?;
        Ok(SatCts {
            counters: SharedCounters::new(dims.arm_count()),
            posterior: BetaPosterior::new(dims.arm_count()),
            schedule,
            dims,
            rates,
            config,
            round: 1,
            remaining: 0,
            pending: None,
        })
    }

    pub fn counters(&self) -> &SharedCounters {
        &self.counters
    }

    pub fn posterior(&self) -> &BetaPosterior {
        &self.posterior
    }

    /// Replaces the Beta posterior (state injection for comparisons).
    pub fn set_posterior(&mut self, posterior: BetaPosterior) {
        assert_eq!(posterior.len(), self.dims.arm_count());
        self.posterior = posterior;
    }

    pub fn config(&self) -> &SatCtsConfig {
        &self.config
    }

    pub fn rates(&self) -> &RateSet {
        &self.rates
    }

    /// Committed round currently running, if any.
    pub fn active_round(&self) -> Option<u32> {
        (self.remaining > 0).then_some(self.round)
    }

    pub fn init_rounds(&self) -> u64 {
        self.schedule.len() as u64
    }

    /// Gate or committed-round decision for a slot after initialization.
    pub fn gated_select(&mut self, t: u64) -> Result<Selection> {
        if t <= self.init_rounds() {
            return Err(Error::InvalidSlot {
                slot: t,
                reason: "slot belongs to the covering schedule",
            });
        }
        if t > self.dims.horizon() {
            return Err(Error::InvalidSlot {
                slot: t,
                reason: "beyond horizon",
            });
        }
        if self.remaining == 0 {
            let (lcb, mean) = self.counters.lcb_and_mean(&self.dims, &self.rates, t)?;
            let s_l = best_assignment(&lcb, &self.dims)?;
            if s_l.average(&self.dims, lcb.as_slice()) >= self.config.threshold {
                return Ok(self.pend(t, s_l, Phase::Lcb));
            }
            let s_m = best_assignment(&mean, &self.dims)?;
            if s_m.average(&self.dims, mean.as_slice()) >= self.config.threshold {
                return Ok(self.pend(t, s_m, Phase::Mean));
            }
            if self.config.reset_priors {
                self.posterior.reset();
            }
            let full = 1u64.checked_shl(self.round).unwrap_or(u64::MAX);
            self.remaining = full.min(self.dims.horizon() - t + 1);
        }
        let round = self.round;
        let mut rng = substream(self.config.seed, Domain::Policy, t, 0, 0);
        let scores = thompson_scores(&self.posterior, &self.dims, &self.rates, &mut rng);
        let played = best_assignment(&scores, &self.dims)?;
        self.remaining -= 1;
        if self.remaining == 0 {
            self.round += 1;
        }
        Ok(self.pend(t, played, Phase::Committed(round)))
    }

    fn pend(&mut self, t: u64, assignment: Assignment, phase: Phase) -> Selection {
        self.pending = Some((t, phase));
        Selection { assignment, phase }
    }
}

impl Policy for SatCts {
    fn name(&self) -> &'static str {
        "SAT-CTS"
    }

    fn dims(&self) -> &ProblemDims {
        &self.dims
    }

    fn select(&mut self, t: u64) -> Result<Selection> {
        if t == 0 {
            return Err(Error::InvalidSlot {
                slot: 0,
                reason: "slots start at 1",
            });
        }
        if t <= self.init_rounds() {
            let a = self.schedule[(t - 1) as usize].clone();
            return Ok(self.pend(t, a, Phase::Init));
        }
        self.gated_select(t)
    }

    fn observe(&mut self, assignment: &Assignment, feedback: &Feedback, t: u64) -> Result<()> {
        feedback.check(&self.dims)?;
        if assignment.len() != self.dims.ues() {
            return Err(Error::InvalidAssignment(alloc::format!(
                "{} entries for {} UEs",
                assignment.len(),
                self.dims.ues()
            )));
        }
        let phase = match self.pending.take() {
            Some((slot, phase)) if slot == t => phase,
            _ => {
                return Err(Error::InvalidSlot {
                    slot: t,
                    reason: "observe without a matching select",
                })
            }
        };
        let update_posterior = !self.config.reset_priors || matches!(phase, Phase::Committed(_));
        for (arm, &ack) in assignment.arms(&self.dims).zip(feedback.bits()) {
            self.counters.update(arm, ack)?;
            if update_posterior {
                self.posterior.update(arm, ack)?;
            }
        }
        Ok(())
    }
}
