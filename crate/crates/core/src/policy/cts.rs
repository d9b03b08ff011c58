use super::{thompson_scores, Phase, Policy, Selection};
use crate::assignment::best_assignment;
use crate::error::{Error, Result};
use crate::model::{Assignment, Feedback, ProblemDims, RateSet};
use crate::stats::BetaPosterior;
use crate::stream::{substream, Domain};

/// Combinatorial Thompson sampling with Beta(1, 1) priors and no separate
/// initialization.
#[derive(Debug, Clone)]
pub struct Cts {
    dims: ProblemDims,
    rates: RateSet,
    posterior: BetaPosterior,
    seed: u64,
}

impl Cts {
    pub fn new(dims: ProblemDims, rates: RateSet, seed: u64) -> Result<Self> {
        if rates.len() != dims.rate_levels() {
            return Err(Error::InvalidRates(alloc::format!(
                "{} rates for R = {}",
                rates.len(),
                dims.rate_levels()
            )));
        }
        Ok(Cts {
            posterior: BetaPosterior::new(dims.arm_count()),
            dims,
            rates,
            seed,
        })
    }

    pub fn posterior(&self) -> &BetaPosterior {
        &self.posterior
    }

    pub fn set_posterior(&mut self, posterior: BetaPosterior) {
        assert_eq!(posterior.len(), self.dims.arm_count());
        self.posterior = posterior;
    }
}

impl Policy for Cts {
    fn name(&self) -> &'static str {
        "CTS"
    }

    fn dims(&self) -> &ProblemDims {
        &self.dims
    }

    fn select(&mut self, t: u64) -> Result<Selection> {
        // Same stream key as SAT-CTS's committed rounds: equal posterior and
        // slot give the same draw.
        let mut rng = substream(self.seed, Domain::Policy, t, 0, 0);
        let scores = thompson_scores(&self.posterior, &self.dims, &self.rates, &mut rng);
        Ok(Selection {
            assignment: best_assignment(&scores, &self.dims)?,
            phase: Phase::Thompson,
        })
    }

    fn observe(&mut self, assignment: &Assignment, feedback: &Feedback, _t: u64) -> Result<()> {
        feedback.check(&self.dims)?;
        for (arm, &ack) in assignment.arms(&self.dims).zip(feedback.bits()) {
            self.posterior.update(arm, ack)?;
        }
        Ok(())
    }
}
