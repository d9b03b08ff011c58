//! Per-arm statistics: shared pull/success counters, Beta posteriors, and
//! score tables fed to the assignment oracle.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::index;
use crate::model::{ProblemDims, RateSet};

/// Pull counts `n_i` and success counts `s_i`, flat-indexed by arm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SharedCounters {
    pulls: Vec<u64>,
    successes: Vec<u64>,
}

impl SharedCounters {
    pub fn new(arm_count: usize) -> Self {
        SharedCounters {
            pulls: vec![0; arm_count],
            successes: vec![0; arm_count],
        }
    }

    pub fn len(&self) -> usize {
        self.pulls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pulls.is_empty()
    }

    pub fn update(&mut self, arm: usize, ack: bool) -> Result<()> {
        if arm >= self.pulls.len() {
            return Err(Error::ArmOutOfRange {
                index: arm,
                count: self.pulls.len(),
            });
        }
        self.pulls[arm] += 1;
        self.successes[arm] += u64::from(ack);
        Ok(())
    }

    #[inline]
    pub fn pulls(&self, arm: usize) -> u64 {
        self.pulls[arm]
    }

    #[inline]
    pub fn successes(&self, arm: usize) -> u64 {
        self.successes[arm]
    }

    pub fn pull_counts(&self) -> &[u64] {
        &self.pulls
    }

    /// `s_i / n_i`, or `None` for an unpulled arm.
    #[inline]
    pub fn empirical_mean(&self, arm: usize) -> Option<f64> {
        match self.pulls[arm] {
            0 => None,
            n => Some(self.successes[arm] as f64 / n as f64),
        }
    }

    /// True when `s_i <= n_i` for every arm.
    pub fn is_consistent(&self) -> bool {
        self.pulls.iter().zip(&self.successes).all(|(n, s)| s <= n)
    }

    /// LCB and MEAN score tables at slot `t`. Every arm must have been
    /// pulled at least once.
    pub fn lcb_and_mean(
        &self,
        dims: &ProblemDims,
        rates: &RateSet,
        t: u64,
    ) -> Result<(ScoreTable, ScoreTable)> {
        let ln_t = crate::math::ln(t as f64);
        let r_levels = dims.rate_levels();
        let mut lcb = Vec::with_capacity(self.len());
        let mut mean = Vec::with_capacity(self.len());
        for arm in 0..self.len() {
            let n = self.pulls[arm];
            if n == 0 {
                return Err(Error::UndefinedRadius);
            }
            let psi_hat = self.successes[arm] as f64 / n as f64;
            let rate = rates.get(arm % r_levels);
            let c = index::radius_from_log(ln_t, n);
            lcb.push(index::lcb_index(rate, psi_hat, c));
            mean.push(index::mean_index(rate, psi_hat));
        }
        Ok((ScoreTable::from_vec(lcb), ScoreTable::from_vec(mean)))
    }
}

/// Beta(A, B) pseudo-counts per arm; both start (and reset) at 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaPosterior {
    alpha: Vec<u64>,
    beta: Vec<u64>,
}

impl BetaPosterior {
    pub fn new(arm_count: usize) -> Self {
        BetaPosterior {
            alpha: vec![1; arm_count],
            beta: vec![1; arm_count],
        }
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    pub fn update(&mut self, arm: usize, ack: bool) -> Result<()> {
        if arm >= self.alpha.len() {
            return Err(Error::ArmOutOfRange {
                index: arm,
                count: self.alpha.len(),
            });
        }
        if ack {
            self.alpha[arm] += 1;
        } else {
            self.beta[arm] += 1;
        }
        Ok(())
    }

    pub fn reset(&mut self) {
        self.alpha.fill(1);
        self.beta.fill(1);
    }

    /// `(A_i, B_i)`.
    #[inline]
    pub fn params(&self, arm: usize) -> (u64, u64) {
        (self.alpha[arm], self.beta[arm])
    }

    /// Overwrites one arm's pseudo-counts. Both must be at least 1.
    pub fn set(&mut self, arm: usize, alpha: u64, beta: u64) -> Result<()> {
        if arm >= self.alpha.len() {
            return Err(Error::ArmOutOfRange {
                index: arm,
                count: self.alpha.len(),
            });
        }
        assert!(alpha >= 1 && beta >= 1, "Beta pseudo-counts must be >= 1");
        self.alpha[arm] = alpha;
        self.beta[arm] = beta;
        Ok(())
    }
}

/// Per-arm scores on the expected-throughput scale. `+inf` marks an arm
/// that must be explored (CUCB's unpulled arms).
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTable(Vec<f64>);

impl ScoreTable {
    pub fn from_vec(scores: Vec<f64>) -> Self {
        ScoreTable(scores)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Shape matches `dims` and every entry is finite or `+inf`.
    pub fn validate(&self, dims: &ProblemDims) -> Result<()> {
        if self.0.len() != dims.arm_count() {
            return Err(Error::ScoreShape {
                expected: dims.arm_count(),
                got: self.0.len(),
            });
        }
        match self
            .0
            .iter()
            .position(|s| s.is_nan() || *s == f64::NEG_INFINITY)
        {
            Some(i) => Err(Error::BadScore(i)),
            None => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counter_updates() {
        let mut c = SharedCounters::new(4);
        c.update(2, true).unwrap();
        assert_eq!((c.pulls(2), c.successes(2)), (1, 1));
        for _ in 0..7 {
            c.update(1, false).unwrap();
        }
        for _ in 0..3 {
            c.update(1, true).unwrap();
        }
        c.update(1, false).unwrap();
        assert_eq!((c.pulls(1), c.successes(1)), (11, 3));
        assert_eq!(c.pulls(0), 0);
        assert!(c.empirical_mean(0).is_none());
        assert!(c.is_consistent());
        assert!(c.update(4, true).is_err());
    }

    #[test]
    fn posterior_updates_and_reset() {
        let mut p = BetaPosterior::new(3);
        p.update(0, true).unwrap();
        assert_eq!(p.params(0), (2, 1));
        p.update(1, false).unwrap();
        assert_eq!(p.params(1), (1, 2));
        for _ in 0..5 {
            p.update(2, true).unwrap();
        }
        p.reset();
        assert_eq!(p.params(2), (1, 1));
        assert!(p.update(3, true).is_err());
    }

    #[test]
    fn posterior_counts_after_mixed_feedback() {
        let mut p = BetaPosterior::new(1);
        for ack in [true, false, true, true, false] {
            p.update(0, ack).unwrap();
        }
        assert_eq!(p.params(0), (4, 3));
    }

    #[test]
    fn score_validation() {
        let dims = ProblemDims::new(1, 1, 2, 1, 10).unwrap();
        assert!(ScoreTable::from_vec(alloc::vec![1.0, f64::INFINITY])
            .validate(&dims)
            .is_ok());
        assert_eq!(
            ScoreTable::from_vec(alloc::vec![1.0, f64::NAN]).validate(&dims),
            Err(Error::BadScore(1))
        );
        assert!(ScoreTable::from_vec(alloc::vec![1.0])
            .validate(&dims)
            .is_err());
    }
}
