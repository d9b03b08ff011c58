//! Problem dimensions, rates, base arms and assignments.
//!
//! A base arm is a `(ue, station, beam, rate)` tuple. Arms are stored in
//! flat tables in row-major `(ue, station, beam, rate)` order, and beams
//! are flattened as `station * K + beam`.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Sizes of one beam/rate adaptation problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProblemDims {
    ues: usize,
    stations: usize,
    beams_per_station: usize,
    rate_levels: usize,
    horizon: u64,
}

impl ProblemDims {
    pub fn new(
        ues: usize,
        stations: usize,
        beams_per_station: usize,
        rate_levels: usize,
        horizon: u64,
    ) -> Result<Self> {
        if ues == 0 {
            return Err(Error::InvalidDims("at least one UE is required".into()));
        }
        if stations == 0 || beams_per_station == 0 {
            return Err(Error::InvalidDims("B and K must be positive".into()));
        }
        if rate_levels == 0 {
            return Err(Error::InvalidDims(
                "at least one rate level is required".into(),
            ));
        }
        let beams = stations * beams_per_station;
        if beams < ues {
            return Err(Error::Infeasible { ues, beams });
        }
        let dims = ProblemDims {
            ues,
            stations,
            beams_per_station,
            rate_levels,
            horizon,
        };
        if horizon < dims.init_rounds() as u64 {
            return Err(Error::InvalidDims(format!(
                "horizon {horizon} shorter than {} initialization rounds",
                dims.init_rounds()
            )));
        }
        Ok(dims)
    }

    /// Same sizes with a different horizon.
    pub fn with_horizon(self, horizon: u64) -> Result<Self> {
        Self::new(
            self.ues,
            self.stations,
            self.beams_per_station,
            self.rate_levels,
            horizon,
        )
    }

    #[inline]
    pub fn ues(&self) -> usize {
        self.ues
    }

    #[inline]
    pub fn stations(&self) -> usize {
        self.stations
    }

    #[inline]
    pub fn beams_per_station(&self) -> usize {
        self.beams_per_station
    }

    #[inline]
    pub fn rate_levels(&self) -> usize {
        self.rate_levels
    }

    #[inline]
    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    /// `|K| = B * K`.
    #[inline]
    pub fn beam_count(&self) -> usize {
        self.stations * self.beams_per_station
    }

    /// `|A| = M * B * K * R`.
    #[inline]
    pub fn arm_count(&self) -> usize {
        self.ues * self.beam_count() * self.rate_levels
    }

    /// Length of the covering initialization schedule, `B * K * R`.
    #[inline]
    pub fn init_rounds(&self) -> usize {
        self.beam_count() * self.rate_levels
    }

    /// Flat index of `(ue, flat beam, rate)`.
    #[inline]
    pub fn arm_index(&self, ue: usize, beam: usize, rate: usize) -> usize {
        (ue * self.beam_count() + beam) * self.rate_levels + rate
    }

    pub fn encode(&self, arm: BaseArmId) -> Result<usize> {
        if arm.ue >= self.ues
            || arm.station >= self.stations
            || arm.beam >= self.beams_per_station
            || arm.rate >= self.rate_levels
        {
            return Err(Error::InvalidAssignment(format!(
                "arm {arm:?} out of range"
            )));
        }
        Ok(self.arm_index(
            arm.ue,
            arm.station * self.beams_per_station + arm.beam,
            arm.rate,
        ))
    }

    pub fn decode(&self, index: usize) -> Result<BaseArmId> {
        self.check_arm(index)?;
        let rate = index % self.rate_levels;
        let rest = index / self.rate_levels;
        let beam = rest % self.beams_per_station;
        let rest = rest / self.beams_per_station;
        let station = rest % self.stations;
        let ue = rest / self.stations;
        Ok(BaseArmId {
            ue,
            station,
            beam,
            rate,
        })
    }

    #[inline]
    pub fn check_arm(&self, index: usize) -> Result<()> {
        if index >= self.arm_count() {
            return Err(Error::ArmOutOfRange {
                index,
                count: self.arm_count(),
            });
        }
        Ok(())
    }
}

/// Strictly increasing list of positive rates in bits/symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct RateSet(Vec<f64>);

impl RateSet {
    pub fn new(rates: Vec<f64>) -> Result<Self> {
        if rates.is_empty() {
            return Err(Error::InvalidRates("empty".into()));
        }
        if rates.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
            return Err(Error::InvalidRates(
                "rates must be positive and finite".into(),
            ));
        }
        if rates.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidRates(
                "rates must be strictly increasing".into(),
            ));
        }
        Ok(RateSet(rates))
    }

    #[inline]
    pub fn get(&self, idx: usize) -> f64 {
        self.0[idx]
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.0[self.0.len() - 1]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// One `(ue, station, beam, rate)` tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BaseArmId {
    pub ue: usize,
    pub station: usize,
    pub beam: usize,
    pub rate: usize,
}

/// The beam (flat `station * K + beam`) and rate index given to one UE.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Choice {
    pub beam: usize,
    pub rate: usize,
}

/// A super arm: one [`Choice`] per UE, beams pairwise distinct.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment(Vec<Choice>);

impl Assignment {
    pub fn new(choices: Vec<Choice>, dims: &ProblemDims) -> Result<Self> {
        if choices.len() != dims.ues() {
            return Err(Error::InvalidAssignment(format!(
                "{} entries for {} UEs",
                choices.len(),
                dims.ues()
            )));
        }
        let mut used = alloc::vec![false; dims.beam_count()];
        for (ue, c) in choices.iter().enumerate() {
            if c.beam >= dims.beam_count() || c.rate >= dims.rate_levels() {
                return Err(Error::InvalidAssignment(format!(
                    "UE {ue}: {c:?} out of range"
                )));
            }
            if core::mem::replace(&mut used[c.beam], true) {
                return Err(Error::InvalidAssignment(format!(
                    "beam {} used twice",
                    c.beam
                )));
            }
        }
        Ok(Assignment(choices))
    }

    #[inline]
    pub fn choices(&self) -> &[Choice] {
        &self.0
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Flat arm indices played, one per UE.
    pub fn arms<'a>(&'a self, dims: &'a ProblemDims) -> impl Iterator<Item = usize> + 'a {
        self.0
            .iter()
            .enumerate()
            .map(move |(ue, c)| dims.arm_index(ue, c.beam, c.rate))
    }

    /// `(1/M) * sum of score over the arms of this assignment`.
    pub fn average(&self, dims: &ProblemDims, score: &[f64]) -> f64 {
        self.arms(dims).map(|i| score[i]).sum::<f64>() / dims.ues() as f64
    }

    pub fn total(&self, dims: &ProblemDims, score: &[f64]) -> f64 {
        self.arms(dims).map(|i| score[i]).sum()
    }
}

/// Per-UE ACK (`true`) / NACK (`false`) bits for the arms just played.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Feedback(pub Vec<bool>);

impl Feedback {
    pub fn check(&self, dims: &ProblemDims) -> Result<()> {
        if self.0.len() != dims.ues() {
            return Err(Error::FeedbackLength {
                expected: dims.ues(),
                got: self.0.len(),
            });
        }
        Ok(())
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }
}
