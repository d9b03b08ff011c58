use alloc::vec;
use alloc::vec::Vec;

use super::{Phase, Policy, Selection};
use crate::assignment::best_assignment;
use crate::error::{Error, Result};
use crate::index::{radius_from_log, ucb_index};
use crate::math;
use crate::model::{Assignment, Feedback, ProblemDims, RateSet};
use crate::stats::ScoreTable;

/// Combinatorial UCB. Unpulled arms score `+inf`; the rest score
/// `r * (psi_hat + c(t, n))`, unclamped.
#[derive(Debug, Clone)]
pub struct Cucb {
    dims: ProblemDims,
    rates: RateSet,
    pulls: Vec<u64>,
    means: Vec<f64>,
}

impl Cucb {
    pub fn new(dims: ProblemDims, rates: RateSet) -> Result<Self> {
        if rates.len() != dims.rate_levels() {
            return Err(Error::InvalidRates(alloc::format!(
                "{} rates for R = {}",
                rates.len(),
                dims.rate_levels()
            )));
        }
        Ok(Cucb {
            pulls: vec![0; dims.arm_count()],
            means: vec![0.0; dims.arm_count()],
            dims,
            rates,
        })
    }

    pub fn pulls(&self, arm: usize) -> u64 {
        self.pulls[arm]
    }

    /// Incrementally maintained success estimate.
    pub fn mean(&self, arm: usize) -> f64 {
        self.means[arm]
    }

    pub fn scores(&self, t: u64) -> Result<ScoreTable> {
        if t == 0 {
            return Err(Error::InvalidSlot {
                slot: 0,
                reason: "slots start at 1",
            });
        }
        let ln_t = math::ln(t as f64);
        let r_levels = self.dims.rate_levels();
        Ok(ScoreTable::from_vec(
            (0..self.pulls.len())
                .map(|arm| match self.pulls[arm] {
                    0 => f64::INFINITY,
                    n => ucb_index(
                        self.rates.get(arm % r_levels),
                        self.means[arm],
                        radius_from_log(ln_t, n),
                    ),
                })
                .collect(),
        ))
    }
}

impl Policy for Cucb {
    fn name(&self) -> &'static str {
        "CUCB"
    }

    fn dims(&self) -> &ProblemDims {
        &self.dims
    }

    fn select(&mut self, t: u64) -> Result<Selection> {
        let scores = self.scores(t)?;
        Ok(Selection {
            assignment: best_assignment(&scores, &self.dims)?,
            phase: Phase::Ucb,
        })
    }

    fn observe(&mut self, assignment: &Assignment, feedback: &Feedback, _t: u64) -> Result<()> {
        feedback.check(&self.dims)?;
        for (arm, &ack) in assignment.arms(&self.dims).zip(feedback.bits()) {
            self.dims.check_arm(arm)?;
            self.pulls[arm] += 1;
            let x = if ack { 1.0 } else { 0.0 };
            self.means[arm] += (x - self.means[arm]) / self.pulls[arm] as f64;
        }
        Ok(())
    }
}
