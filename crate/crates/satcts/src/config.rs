//! Scenario files (TOML).
//!
//! ```toml
//! ues = 3
//! stations = 1
//! beams_per_station = 8
//! antennas = 16
//! horizon = 20000
//! rates = [6.0, 8.0, 12.0]
//! threshold = 8.0
//! policies = ["SAT-CTS", "CTS", "CUCB"]
//! seeds = [1, 2, 3, 4, 5]
//!
//! [channel]
//! source = "synthetic"   # or a path to a channel dump
//! paths = 4
//! seed = 7
//! power = 1000.0
//! noise_var = 1.0
//! sigma_rel = 0.1        # or sigma_ch = <absolute std>
//! ```
//!
//! Every omitted field takes its default; the fully resolved config is
//! written next to each campaign's outputs.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use satcts_core::environment::{
    dft_codebook, synth_channel, Environment, Perturbation, SynthParams,
};
use satcts_core::{ProblemDims, RateSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PolicyKind {
    #[serde(rename = "SAT-CTS")]
    SatCts,
    #[serde(rename = "CTS")]
    Cts,
    #[serde(rename = "CUCB")]
    Cucb,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 3] = [PolicyKind::SatCts, PolicyKind::Cts, PolicyKind::Cucb];

    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::SatCts => "SAT-CTS",
            PolicyKind::Cts => "CTS",
            PolicyKind::Cucb => "CUCB",
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PolicyKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "sat-cts" | "satcts" => Ok(PolicyKind::SatCts),
            "cts" => Ok(PolicyKind::Cts),
            "cucb" => Ok(PolicyKind::Cucb),
            other => Err(format!("unknown policy `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChannelConfig {
    /// `"synthetic"` or the path of a channel dump.
    pub source: String,
    pub paths: usize,
    pub seed: u64,
    pub power: f64,
    pub noise_var: f64,
    /// Absolute perturbation std; overrides `sigma_rel` when set.
    pub sigma_ch: Option<f64>,
    /// Per-link std as a multiple of `||h_mean|| / sqrt(N)`.
    pub sigma_rel: f64,
    pub d_over_lambda: f64,
}

impl Default for ChannelConfig {
    fn default() -> Self {
        ChannelConfig {
            source: "synthetic".into(),
            paths: 4,
            seed: 0,
            power: 1.0,
            noise_var: 1.0,
            sigma_ch: None,
            sigma_rel: 0.1,
            d_over_lambda: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TheoryConfig {
    pub delta: f64,
    /// Midpoint of the admissible interval when absent.
    pub epsilon: Option<f64>,
    pub alpha1: f64,
}

impl Default for TheoryConfig {
    fn default() -> Self {
        TheoryConfig {
            delta: 0.1,
            epsilon: None,
            alpha1: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub ues: usize,
    pub stations: usize,
    pub beams_per_station: usize,
    pub antennas: usize,
    pub horizon: u64,
    pub rates: Vec<f64>,
    pub threshold: f64,
    pub policies: Vec<PolicyKind>,
    pub seeds: Vec<u64>,
    pub reset_priors: bool,
    pub n_mc: usize,
    pub truth_seed: u64,
    /// Reported throughput is bits/symbol times this bandwidth in MHz.
    pub bandwidth_mhz: f64,
    pub out_dir: PathBuf,
    pub channel: ChannelConfig,
    pub theory: TheoryConfig,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            ues: 15,
            stations: 3,
            beams_per_station: 120,
            antennas: 64,
            horizon: 10_000,
            rates: vec![6.0, 8.0, 12.0],
            threshold: 8.0,
            policies: PolicyKind::ALL.to_vec(),
            seeds: vec![1, 2, 3, 4, 5],
            reset_priors: false,
            n_mc: 100_000,
            truth_seed: 0,
            bandwidth_mhz: 50.0,
            out_dir: PathBuf::from("out"),
            channel: ChannelConfig::default(),
            theory: TheoryConfig::default(),
        }
    }
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(Error::io(path))?;
        let cfg: ScenarioConfig = toml::from_str(&text).map_err(|e| Error::Config {
            path: path.to_owned(),
            message: e.to_string(),
        })?;
        cfg.validate().map_err(|message| Error::Config {
            path: path.to_owned(),
            message,
        })?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Checks everything that does not need the channel.
    pub fn validate(&self) -> std::result::Result<(), String> {
        self.dims().map_err(|e| e.to_string())?;
        self.rate_set().map_err(|e| e.to_string())?;
        if !(self.threshold.is_finite() && self.threshold >= 0.0) {
            return Err(format!(
                "threshold {} must be finite and >= 0",
                self.threshold
            ));
        }
        if self.policies.is_empty() {
            return Err("no policies selected".into());
        }
        if self.seeds.is_empty() {
            return Err("no seeds given".into());
        }
        let mut seen = std::collections::BTreeSet::new();
        if let Some(s) = self.seeds.iter().find(|s| !seen.insert(**s)) {
            return Err(format!("seed {s} listed twice"));
        }
        let mut seen = std::collections::BTreeSet::new();
        if let Some(p) = self.policies.iter().find(|p| !seen.insert(**p)) {
            return Err(format!("policy {p} listed twice"));
        }
        if self.n_mc == 0 {
            return Err("n_mc must be >= 1".into());
        }
        if self.antennas == 0 {
            return Err("antennas must be >= 1".into());
        }
        let c = &self.channel;
        if c.source == "synthetic" && c.paths == 0 {
            return Err("channel.paths must be >= 1".into());
        }
        if !(c.power > 0.0 && c.noise_var > 0.0) {
            return Err("channel.power and channel.noise_var must be > 0".into());
        }
        if c.sigma_ch.is_some_and(|s| !(s >= 0.0 && s.is_finite())) || !(c.sigma_rel >= 0.0) {
            return Err("channel perturbation must be >= 0".into());
        }
        let t = &self.theory;
        if !(t.delta > 0.0 && t.delta < 0.25) {
            return Err(format!("theory.delta {} outside (0, 1/4)", t.delta));
        }
        if !(self.bandwidth_mhz > 0.0) {
            return Err("bandwidth_mhz must be > 0".into());
        }
        Ok(())
    }

    pub fn dims(&self) -> satcts_core::Result<ProblemDims> {
        ProblemDims::new(
            self.ues,
            self.stations,
            self.beams_per_station,
            self.rates.len(),
            self.horizon,
        )
    }

    pub fn rate_set(&self) -> satcts_core::Result<RateSet> {
        RateSet::new(self.rates.clone())
    }

    /// Mean channel, link budget and codebook. Dump sources take their
    /// link budget from the dump's sidecar.
    pub fn environment(&self) -> Result<Environment> {
        let dims = self.dims()?;
        let c = &self.channel;
        let channel = if c.source == "synthetic" {
            let params = SynthParams {
                ues: self.ues,
                stations: self.stations,
                antennas: self.antennas,
                paths: c.paths,
                d_over_lambda: c.d_over_lambda,
            };
            let p = match c.sigma_ch {
                Some(s) => Perturbation::Absolute(s),
                None => Perturbation::Relative(c.sigma_rel),
            };
            synth_channel(c.seed, &params)?
                .with_link_budget(vec![c.power; self.stations], vec![c.noise_var; self.ues])?
                .with_perturbation(p)?
        } else {
            let state = crate::dump::load_channel_dump(Path::new(&c.source))?;
            if state.antennas() != self.antennas {
                return Err(Error::Config {
                    path: PathBuf::from(&c.source),
                    message: format!(
                        "dump has N = {}, config says {}",
                        state.antennas(),
                        self.antennas
                    ),
                });
            }
            state
        };
        let codebook = dft_codebook(self.antennas, self.beams_per_station, c.d_over_lambda)
            .replicated(self.stations);
        Ok(Environment::new(dims, channel, codebook, self.rate_set()?)?)
    }
}
