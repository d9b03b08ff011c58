//! Seeded multi-run campaigns and their CSV artifacts.
//!
//! Output layout under the artifact directory:
//!
//! - `runs/<policy>_seed<seed>.csv`: `slot, phase, cum_sat_regret,
//!   cum_std_regret, jain, sum_log`
//! - `aggregate.csv`: `policy, slot` then mean and sample std across seeds
//!   of the four per-run metrics
//! - `summary.csv`: final values per policy
//! - `truth.csv`: `ue, station, beam, rate, psi, mu, optimal`
//! - `config.resolved.toml`: the scenario with every default filled in
//!
//! Floats are written in shortest round-trip form, so identical inputs give
//! identical bytes.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use satcts_core::environment::{link_success, Environment, TruthTable};
use satcts_core::math::mean_std;
use satcts_core::metrics::{jain_index, sum_log_utility};
use satcts_core::sim::run_policy;
use satcts_core::{Cts, Cucb, Policy, RunTrace, SatCts, SatCtsConfig};

use crate::config::{PolicyKind, ScenarioConfig};
use crate::error::{Error, Result};

/// Truth table with links estimated in parallel. Identical to the
/// sequential estimate because every link has its own random stream.
pub fn parallel_truth_table(env: &Environment, n_mc: usize, seed: u64) -> Result<TruthTable> {
    let dims = *env.dims();
    let links: Vec<(usize, usize)> = (0..dims.ues())
        .flat_map(|ue| (0..dims.beam_count()).map(move |b| (ue, b)))
        .collect();
    let psi: Vec<f64> = links
        .par_iter()
        .map(|&(ue, beam)| link_success(env, ue, beam, n_mc, seed))
        .collect::<Vec<_>>()
        .concat();
    Ok(TruthTable::from_psi(dims, env.rates().clone(), psi)?)
}

pub fn build_policy(
    kind: PolicyKind,
    cfg: &ScenarioConfig,
    seed: u64,
) -> Result<Box<dyn Policy + Send>> {
    let dims = cfg.dims()?;
    let rates = cfg.rate_set()?;
    Ok(match kind {
        PolicyKind::SatCts => Box::new(SatCts::new(
            dims,
            rates,
            SatCtsConfig {
                threshold: cfg.threshold,
                reset_priors: cfg.reset_priors,
                seed,
            },
        )?),
        PolicyKind::Cts => Box::new(Cts::new(dims, rates, seed)?),
        PolicyKind::Cucb => Box::new(Cucb::new(dims, rates)?),
    })
}

/// Every `(policy, seed)` run, in config order. Runs execute in parallel;
/// each is sequential inside.
pub fn run_traces(
    cfg: &ScenarioConfig,
    env: &Environment,
    truth: &TruthTable,
) -> Result<Vec<RunTrace>> {
    let jobs: Vec<(PolicyKind, u64)> = cfg
        .policies
        .iter()
        .flat_map(|&p| cfg.seeds.iter().map(move |&s| (p, s)))
        .collect();
    jobs.par_iter()
        .map(|&(kind, seed)| {
            let mut policy = build_policy(kind, cfg, seed)?;
            Ok(run_policy(
                policy.as_mut(),
                env,
                truth,
                cfg.threshold,
                seed,
            )?)
        })
        .collect()
}

pub struct Campaign {
    pub dir: PathBuf,
    pub truth: TruthTable,
    pub traces: Vec<RunTrace>,
}

/// Builds the environment, estimates the truth table, runs every
/// `(policy, seed)` pair and writes all artifacts into `cfg.out_dir`.
pub fn run_campaign(cfg: &ScenarioConfig) -> Result<Campaign> {
    cfg.validate().map_err(|message| Error::Config {
        path: cfg.out_dir.join("config.resolved.toml"),
        message,
    })?;
    let env = cfg.environment()?;
    let truth = parallel_truth_table(&env, cfg.n_mc, cfg.truth_seed)?;
    let traces = run_traces(cfg, &env, &truth)?;
    write_artifacts(&cfg.out_dir, cfg, &truth, &traces)?;
    Ok(Campaign {
        dir: cfg.out_dir.clone(),
        truth,
        traces,
    })
}

/// Per-slot metric rows of one trace: cumulative regrets, Jain, sum-log.
pub struct RunSeries {
    pub phases: Vec<&'static str>,
    pub cum_sat: Vec<f64>,
    pub cum_std: Vec<f64>,
    pub jain: Vec<f64>,
    pub sum_log: Vec<f64>,
}

pub fn run_series(trace: &RunTrace) -> RunSeries {
    let mut jain = Vec::with_capacity(trace.len());
    let mut sum_log = Vec::with_capacity(trace.len());
    trace.for_each_throughput(|_, g| {
        jain.push(jain_index(g));
        sum_log.push(sum_log_utility(g));
    });
    RunSeries {
        phases: trace.records.iter().map(|r| r.phase.label()).collect(),
        cum_sat: trace.cumulative_satisficing_regret(),
        cum_std: trace.cumulative_standard_regret(),
        jain,
        sum_log,
    }
}

const PICKS: [fn(&RunSeries, usize) -> f64; 4] = [
    |s, k| s.cum_sat[k],
    |s, k| s.cum_std[k],
    |s, k| s.jain[k],
    |s, k| s.sum_log[k],
];

pub fn run_file_name(policy: &str, seed: u64) -> String {
    format!("{policy}_seed{seed}.csv")
}

pub const METRICS: [&str; 4] = ["cum_sat_regret", "cum_std_regret", "jain", "sum_log"];

fn writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    csv::Writer::from_path(path).map_err(Error::csv(path))
}

fn fmt(v: f64) -> String {
    format!("{v}")
}

pub fn write_artifacts(
    dir: &Path,
    cfg: &ScenarioConfig,
    truth: &TruthTable,
    traces: &[RunTrace],
) -> Result<()> {
    let runs = dir.join("runs");
    fs::create_dir_all(&runs).map_err(Error::io(&runs))?;
    let resolved = dir.join("config.resolved.toml");
    fs::write(&resolved, cfg.to_toml()).map_err(Error::io(&resolved))?;
    write_truth(&dir.join("truth.csv"), truth)?;

    let series: Vec<RunSeries> = traces.par_iter().map(run_series).collect();
    for (trace, s) in traces.iter().zip(&series) {
        let path = runs.join(run_file_name(&trace.policy, trace.seed));
        let mut w = writer(&path)?;
        let mut row = |rec: [String; 6]| w.write_record(&rec).map_err(Error::csv(&path));
        row([
            "slot", "phase", METRICS[0], METRICS[1], METRICS[2], METRICS[3],
        ]
        .map(String::from))?;
        for (k, rec) in trace.records.iter().enumerate() {
            row([
                rec.slot.to_string(),
                s.phases[k].to_string(),
                fmt(s.cum_sat[k]),
                fmt(s.cum_std[k]),
                fmt(s.jain[k]),
                fmt(s.sum_log[k]),
            ])?;
        }
        w.flush().map_err(Error::io(&path))?;
    }

    let aggregate = dir.join("aggregate.csv");
    let mut agg = writer(&aggregate)?;
    let mut header = vec!["policy".to_string(), "slot".to_string()];
    for m in METRICS {
        header.push(format!("{m}_mean"));
        header.push(format!("{m}_std"));
    }
    agg.write_record(&header).map_err(Error::csv(&aggregate))?;

    let summary = dir.join("summary.csv");
    let mut sum = writer(&summary)?;
    sum.write_record([
        "policy",
        "runs",
        "threshold",
        "g_star",
        "sat_regret_mean",
        "sat_regret_std",
        "std_regret_mean",
        "std_regret_std",
        "throughput_mbps_mean",
        "throughput_mbps_std",
        "jain_mean",
        "jain_std",
        "sum_log_mean",
        "sum_log_std",
    ])
    .map_err(Error::csv(&summary))?;

    for &kind in &cfg.policies {
        let idx: Vec<usize> = (0..traces.len())
            .filter(|&i| traces[i].policy == kind.name())
            .collect();
        if idx.is_empty() {
            continue;
        }
        let len = series[idx[0]].cum_sat.len();
        let mut buf = vec![0.0; idx.len()];
        for k in 0..len {
            let mut row = vec![kind.name().to_string(), (k + 1).to_string()];
            for pick in PICKS {
                for (b, &i) in buf.iter_mut().zip(&idx) {
                    *b = pick(&series[i], k);
                }
                let (m, sd) = mean_std(&buf);
                row.push(fmt(m));
                row.push(fmt(sd));
            }
            agg.write_record(&row).map_err(Error::csv(&aggregate))?;
        }

        let finals = |f: &dyn Fn(usize) -> f64| {
            let v: Vec<f64> = idx.iter().map(|&i| f(i)).collect();
            mean_std(&v)
        };
        let last = len - 1;
        let sat = finals(&|i| series[i].cum_sat[last]);
        let std = finals(&|i| series[i].cum_std[last]);
        let jain = finals(&|i| series[i].jain[last]);
        let slog = finals(&|i| series[i].sum_log[last]);
        let tput = finals(&|i| {
            let g = traces[i].throughput_totals();
            g.iter().sum::<f64>() / g.len() as f64 / len as f64 * cfg.bandwidth_mhz
        });
        let mut row = vec![
            kind.name().to_string(),
            idx.len().to_string(),
            fmt(cfg.threshold),
            fmt(truth.optimal_value()),
        ];
        for (m, s) in [sat, std, tput, jain, slog] {
            row.push(fmt(m));
            row.push(fmt(s));
        }
        sum.write_record(&row).map_err(Error::csv(&summary))?;
    }
    agg.flush().map_err(Error::io(&aggregate))?;
    sum.flush().map_err(Error::io(&summary))?;
    Ok(())
}

fn write_truth(path: &Path, truth: &TruthTable) -> Result<()> {
    let dims = truth.dims();
    let mut w = writer(path)?;
    w.write_record(["ue", "station", "beam", "rate", "psi", "mu", "optimal"])
        .map_err(Error::csv(path))?;
    let star = truth.optimal().choices();
    for arm in 0..dims.arm_count() {
        let id = dims.decode(arm)?;
        let flat = id.station * dims.beams_per_station() + id.beam;
        let opt = star[id.ue].beam == flat && star[id.ue].rate == id.rate;
        w.write_record([
            id.ue.to_string(),
            id.station.to_string(),
            id.beam.to_string(),
            fmt(truth.rates().get(id.rate)),
            fmt(truth.psi()[arm]),
            fmt(truth.mu()[arm]),
            u8::from(opt).to_string(),
        ])
        .map_err(Error::csv(path))?;
    }
    w.flush().map_err(Error::io(path))?;
    Ok(())
}
