#![allow(dead_code)]

use std::path::Path;

use satcts::config::ChannelConfig;
use satcts::{PolicyKind, ScenarioConfig};

/// Three UEs on one eight-beam station at rates {6, 8, 12}; g* is about 7.69.
pub fn small(out: &Path, threshold: f64, horizon: u64) -> ScenarioConfig {
    ScenarioConfig {
        ues: 3,
        stations: 1,
        beams_per_station: 8,
        antennas: 16,
        horizon,
        rates: vec![6.0, 8.0, 12.0],
        threshold,
        policies: PolicyKind::ALL.to_vec(),
        seeds: vec![1, 2, 3, 4, 5],
        n_mc: 20_000,
        out_dir: out.to_owned(),
        channel: ChannelConfig {
            paths: 3,
            seed: 11,
            power: 40.0,
            sigma_rel: 0.6,
            ..ChannelConfig::default()
        },
        ..ScenarioConfig::default()
    }
}

/// Two UEs, three beams, rates {6, 8}; small enough for exact gaps. g* is about 6.23.
pub fn tiny(out: &Path, threshold: f64) -> ScenarioConfig {
    ScenarioConfig {
        ues: 2,
        stations: 1,
        beams_per_station: 3,
        antennas: 8,
        horizon: 3000,
        rates: vec![6.0, 8.0],
        threshold,
        policies: vec![PolicyKind::SatCts],
        seeds: (1..=20).collect(),
        reset_priors: true,
        n_mc: 100_000,
        out_dir: out.to_owned(),
        channel: ChannelConfig {
            paths: 2,
            seed: 3,
            power: 60.0,
            sigma_rel: 0.6,
            ..ChannelConfig::default()
        },
        ..ScenarioConfig::default()
    }
}

pub fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let h = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (h, rows)
}
