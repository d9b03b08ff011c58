//! True success probabilities, estimated by Monte Carlo over channel
//! draws.
//!
//! With a unit-norm beam `f` and isotropic perturbation `e ~ CN(0, s^2 I)`,
//! `(h_mean + e)^H f = h_mean^H f + z` with `z ~ CN(0, s^2 ||f||^2)`. Each draw
//! samples `z` directly and compares the resulting SNR against every rate
//! threshold, so `psi` is non-increasing in rate by construction.

use alloc::vec::Vec;

use super::{complex_normal, Environment};
use crate::assignment::best_assignment;
use crate::error::Result;
use crate::model::{Assignment, ProblemDims, RateSet};
use crate::stats::ScoreTable;
use crate::stream::{substream, Domain};

#[derive(Debug, Clone, PartialEq)]
pub struct TruthTable {
    dims: ProblemDims,
    rates: RateSet,
    psi: Vec<f64>,
    mu: Vec<f64>,
    optimal: Assignment,
    optimal_value: f64,
}

impl TruthTable {
    /// Builds the table from per-arm success probabilities (flat order).
    pub fn from_psi(dims: ProblemDims, rates: RateSet, psi: Vec<f64>) -> Result<Self> {
        let scores = ScoreTable::from_vec(psi.clone());
        scores.validate(&dims)?;
        let r_levels = dims.rate_levels();
        let mu: Vec<f64> = psi
            .iter()
            .enumerate()
            .map(|(i, p)| rates.get(i % r_levels) * p)
            .collect();
        let optimal = best_assignment(&ScoreTable::from_vec(mu.clone()), &dims)?;
        let optimal_value = optimal.average(&dims, &mu);
        Ok(TruthTable {
            dims,
            rates,
            psi,
            mu,
            optimal,
            optimal_value,
        })
    }

    pub fn dims(&self) -> &ProblemDims {
        &self.dims
    }

    pub fn rates(&self) -> &RateSet {
        &self.rates
    }

    pub fn psi(&self) -> &[f64] {
        &self.psi
    }

    /// `mu_i = r_i * psi_i`.
    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    /// `s*`.
    pub fn optimal(&self) -> &Assignment {
        &self.optimal
    }

    /// `g* = g(s*)`.
    pub fn optimal_value(&self) -> f64 {
        self.optimal_value
    }

    /// `g(s)`: average expected throughput of an assignment.
    pub fn value(&self, s: &Assignment) -> f64 {
        s.average(&self.dims, &self.mu)
    }
}

/// Success probability of every rate on link `(ue, beam)` from `n_mc`
/// independent channel draws (sub-stream `(seed, ue, beam)`).
pub fn link_success(env: &Environment, ue: usize, beam: usize, n_mc: usize, seed: u64) -> Vec<f64> {
    assert!(n_mc >= 1, "need at least one Monte Carlo draw");
    let station = beam / env.dims().beams_per_station();
    let channel = env.channel();
    let f_norm_sq: f64 = env
        .codebook()
        .vector(beam)
        .iter()
        .map(|z| z.norm_sqr())
        .sum();
    let std = channel.sigma(ue, station) * crate::math::sqrt(f_norm_sq);
    let mean = env.mean_projection(ue, beam);
    let gain = channel.power(station) / channel.noise(ue);
    let thresholds = env.thresholds();
    if std == 0.0 {
        let snr = gain * mean.norm_sqr();
        return thresholds
            .iter()
            .map(|&g| if snr >= g { 1.0 } else { 0.0 })
            .collect();
    }
    let mut hits = alloc::vec![0u64; thresholds.len()];
    let mut rng = substream(seed, Domain::Truth, ue as u64, beam as u64, 0);
    for _ in 0..n_mc {
        let snr = gain * (mean + complex_normal(&mut rng, std)).norm_sqr();
        for (h, &g) in hits.iter_mut().zip(thresholds) {
            *h += u64::from(snr >= g);
        }
    }
    hits.iter().map(|&h| h as f64 / n_mc as f64).collect()
}

/// Sequential truth table over all `(ue, beam)` links.
pub fn truth_table(env: &Environment, n_mc: usize, seed: u64) -> Result<TruthTable> {
    let dims = *env.dims();
    let mut psi = Vec::with_capacity(dims.arm_count());
    for ue in 0..dims.ues() {
        for beam in 0..dims.beam_count() {
            psi.extend(link_success(env, ue, beam, n_mc, seed));
        }
    }
    TruthTable::from_psi(dims, env.rates().clone(), psi)
}
