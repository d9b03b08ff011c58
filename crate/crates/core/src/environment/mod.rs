//! Multi-station MISO world: sparse multipath channels, analog codebooks,
//! and SNR-threshold ACK/NACK feedback.
//!
//! Each slot, the channel from station `b` to UE `m` is the mean channel
//! plus an independent perturbation with i.i.d. `CN(0, sigma^2)` entries.
//! A transmission at rate `r` is acknowledged iff
//! `p_b |h^H f|^2 / sigma_m^2 >= 2^r - 1`; receiver noise enters only
//! through `sigma_m^2`.

mod array;
mod truth;

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

pub use array::{dft_codebook, inner, norm, steering_vector, Codebook};
pub use truth::{link_success, truth_table, TruthTable};

use crate::error::{Error, Result};
use crate::math;
use crate::model::{Assignment, Feedback, ProblemDims, RateSet};
use crate::stream::{substream, Domain};

/// Shannon threshold `2^r - 1`.
#[inline]
pub fn snr_threshold(rate: f64) -> f64 {
    math::powf(2.0, rate) - 1.0
}

/// Draws from `CN(0, variance)`.
#[inline]
pub fn complex_normal<R: Rng>(rng: &mut R, std: f64) -> Complex64 {
    let s = std * core::f64::consts::FRAC_1_SQRT_2;
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re * s, im * s)
}

/// Path gains and angles of departure of one `(ue, station)` link.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkPaths {
    pub gains: Vec<Complex64>,
    pub angles: Vec<f64>,
}

/// How the per-slot perturbation scale is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Perturbation {
    /// The same absolute `sigma` on every link.
    Absolute(f64),
    /// `sigma = factor * ||h_mean|| / sqrt(N)` per link.
    Relative(f64),
}

/// Mean channels and link budget for every `(ue, station)` pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelState {
    ues: usize,
    stations: usize,
    antennas: usize,
    /// `(m, b, antenna)` row-major.
    mean: Vec<Complex64>,
    paths: Option<Vec<LinkPaths>>,
    /// Per-link perturbation std.
    sigma: Vec<f64>,
    power: Vec<f64>,
    noise: Vec<f64>,
}

impl ChannelState {
    /// Mean channels only, with unit power and noise and no perturbation.
    pub fn from_mean(
        ues: usize,
        stations: usize,
        antennas: usize,
        mean: Vec<Complex64>,
    ) -> Result<Self> {
        if ues == 0 || stations == 0 || antennas == 0 {
            return Err(Error::InvalidChannel("empty dimension".into()));
        }
        if mean.len() != ues * stations * antennas {
            return Err(Error::InvalidChannel(format!(
                "{} entries for M = {ues}, B = {stations}, N = {antennas}",
                mean.len()
            )));
        }
        if mean.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidChannel("non-finite channel entry".into()));
        }
        Ok(ChannelState {
            ues,
            stations,
            antennas,
            mean,
            paths: None,
            sigma: alloc::vec![0.0; ues * stations],
            power: alloc::vec![1.0; stations],
            noise: alloc::vec![1.0; ues],
        })
    }

    pub fn with_link_budget(mut self, power: Vec<f64>, noise: Vec<f64>) -> Result<Self> {
        if power.len() != self.stations || noise.len() != self.ues {
            return Err(Error::InvalidChannel(format!(
                "need {} powers and {} noise variances",
                self.stations, self.ues
            )));
        }
        if power
            .iter()
            .chain(&noise)
            .any(|v| !(v.is_finite() && *v > 0.0))
        {
            return Err(Error::InvalidChannel(
                "powers and noise variances must be positive".into(),
            ));
        }
        self.power = power;
        self.noise = noise;
        Ok(self)
    }

    pub fn with_perturbation(mut self, p: Perturbation) -> Result<Self> {
        let sigma: Vec<f64> = match p {
            Perturbation::Absolute(s) => alloc::vec![s; self.ues * self.stations],
            Perturbation::Relative(f) => (0..self.ues * self.stations)
                .map(|link| {
                    let h = &self.mean[link * self.antennas..(link + 1) * self.antennas];
                    f * norm(h) / math::sqrt(self.antennas as f64)
                })
                .collect(),
        };
        if sigma.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
            return Err(Error::InvalidChannel(
                "perturbation scale must be >= 0".into(),
            ));
        }
        self.sigma = sigma;
        Ok(self)
    }

    pub fn ues(&self) -> usize {
        self.ues
    }

    pub fn stations(&self) -> usize {
        self.stations
    }

    pub fn antennas(&self) -> usize {
        self.antennas
    }

    /// Mean channel vector of link `(ue, station)`.
    #[inline]
    pub fn mean(&self, ue: usize, station: usize) -> &[Complex64] {
        let link = ue * self.stations + station;
        &self.mean[link * self.antennas..(link + 1) * self.antennas]
    }

    pub fn mean_entries(&self) -> &[Complex64] {
        &self.mean
    }

    pub fn paths(&self) -> Option<&[LinkPaths]> {
        self.paths.as_deref()
    }

    #[inline]
    pub fn sigma(&self, ue: usize, station: usize) -> f64 {
        self.sigma[ue * self.stations + station]
    }

    #[inline]
    pub fn power(&self, station: usize) -> f64 {
        self.power[station]
    }

    #[inline]
    pub fn noise(&self, ue: usize) -> f64 {
        self.noise[ue]
    }

    pub fn powers(&self) -> &[f64] {
        &self.power
    }

    pub fn noises(&self) -> &[f64] {
        &self.noise
    }

    pub fn sigmas(&self) -> &[f64] {
        &self.sigma
    }
}

/// Parameters for [`synth_channel`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthParams {
    pub ues: usize,
    pub stations: usize,
    pub antennas: usize,
    /// Paths per link, `L >= 1`.
    pub paths: usize,
    pub d_over_lambda: f64,
}

/// Saleh-Valenzuela channels
/// `h = sqrt(N / L) * sum_l beta_l a(cos theta_l)` with
/// `beta ~ CN(0, 1)` and `theta ~ U(0, pi)`.
pub fn synth_channel(seed: u64, params: &SynthParams) -> Result<ChannelState> {
    if params.paths == 0 {
        return Err(Error::InvalidChannel("need at least one path".into()));
    }
    let n = params.antennas;
    let scale = math::sqrt(n as f64 / params.paths as f64);
    let mut mean = Vec::with_capacity(params.ues * params.stations * n);
    let mut paths = Vec::with_capacity(params.ues * params.stations);
    for m in 0..params.ues {
        for b in 0..params.stations {
            let mut rng = substream(seed, Domain::Synthesis, m as u64, b as u64, 0);
            let mut link = LinkPaths {
                gains: Vec::with_capacity(params.paths),
                angles: Vec::with_capacity(params.paths),
            };
            for _ in 0..params.paths {
                link.gains.push(complex_normal(&mut rng, 1.0));
                link.angles.push(rng.random::<f64>() * math::PI);
            }
            mean.extend(link_channel(&link, n, params.d_over_lambda, scale));
            paths.push(link);
        }
    }
    let mut state = ChannelState::from_mean(params.ues, params.stations, n, mean)?;
    state.paths = Some(paths);
    Ok(state)
}

fn link_channel(
    link: &LinkPaths,
    antennas: usize,
    d_over_lambda: f64,
    scale: f64,
) -> Vec<Complex64> {
    let mut h = alloc::vec![Complex64::new(0.0, 0.0); antennas];
    for (g, theta) in link.gains.iter().zip(&link.angles) {
        let a = steering_vector(math::cos(*theta), antennas, d_over_lambda);
        for (acc, z) in h.iter_mut().zip(a) {
            *acc += g * z * scale;
        }
    }
    h
}

/// A channel, a codebook and a rate set; produces feedback for played
/// assignments.
#[derive(Debug, Clone)]
pub struct Environment {
    dims: ProblemDims,
    channel: ChannelState,
    codebook: Codebook,
    rates: RateSet,
    thresholds: Vec<f64>,
}

impl Environment {
    pub fn new(
        dims: ProblemDims,
        channel: ChannelState,
        codebook: Codebook,
        rates: RateSet,
    ) -> Result<Self> {
        if channel.ues() != dims.ues() || channel.stations() != dims.stations() {
            return Err(Error::InvalidChannel(format!(
                "channel is {}x{} (M x B), problem is {}x{}",
                channel.ues(),
                channel.stations(),
                dims.ues(),
                dims.stations()
            )));
        }
        if codebook.stations() != dims.stations()
            || codebook.beams_per_station() != dims.beams_per_station()
            || codebook.antennas() != channel.antennas()
        {
            return Err(Error::InvalidChannel(
                "codebook does not match channel or problem dimensions".into(),
            ));
        }
        if rates.len() != dims.rate_levels() {
            return Err(Error::InvalidRates(format!(
                "{} rates for R = {}",
                rates.len(),
                dims.rate_levels()
            )));
        }
        let thresholds = rates.as_slice().iter().map(|&r| snr_threshold(r)).collect();
        Ok(Environment {
            dims,
            channel,
            codebook,
            rates,
            thresholds,
        })
    }

    pub fn dims(&self) -> &ProblemDims {
        &self.dims
    }

    pub fn channel(&self) -> &ChannelState {
        &self.channel
    }

    pub fn codebook(&self) -> &Codebook {
        &self.codebook
    }

    pub fn rates(&self) -> &RateSet {
        &self.rates
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    #[inline]
    fn station_of(&self, beam: usize) -> usize {
        beam / self.dims.beams_per_station()
    }

    /// `h_mean^H f` for UE `ue` on flat beam `beam`.
    pub fn mean_projection(&self, ue: usize, beam: usize) -> Complex64 {
        inner(
            self.channel.mean(ue, self.station_of(beam)),
            self.codebook.vector(beam),
        )
    }

    /// Expected RSS `p_b |h_mean^H f|^2` with the perturbation switched off.
    pub fn mean_rss(&self, ue: usize, beam: usize) -> f64 {
        self.channel.power(self.station_of(beam)) * self.mean_projection(ue, beam).norm_sqr()
    }

    /// SNR of one channel realization of UE `ue` on `beam`, drawn from the
    /// slot-`t` sub-stream of link `(ue, station)`.
    pub fn realized_snr(&self, seed: u64, t: u64, ue: usize, beam: usize) -> f64 {
        let b = self.station_of(beam);
        let sigma = self.channel.sigma(ue, b);
        let h_mean = self.channel.mean(ue, b);
        let f = self.codebook.vector(beam);
        let a = if sigma > 0.0 {
            let mut rng = substream(seed, Domain::Channel, t, ue as u64, b as u64);
            h_mean
                .iter()
                .zip(f)
                .map(|(h, f)| (h + complex_normal(&mut rng, sigma)).conj() * f)
                .sum()
        } else {
            inner(h_mean, f)
        };
        self.channel.power(b) * a.norm_sqr() / self.channel.noise(ue)
    }

    /// ACK/NACK bits for `assignment` at slot `t`.
    pub fn step(&self, assignment: &Assignment, seed: u64, t: u64) -> Result<Feedback> {
        if assignment.len() != self.dims.ues() {
            return Err(Error::InvalidAssignment(format!(
                "{} entries for {} UEs",
                assignment.len(),
                self.dims.ues()
            )));
        }
        Ok(Feedback(
            assignment
                .choices()
                .iter()
                .enumerate()
                .map(|(m, c)| self.realized_snr(seed, t, m, c.beam) >= self.thresholds[c.rate])
                .collect(),
        ))
    }
}
