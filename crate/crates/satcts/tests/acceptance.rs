//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.
//!
//! Run with `cargo test -p satcts --test acceptance`.

mod common;

use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use common::{small, tiny};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_distr::{Binomial, Distribution};
use satcts::campaign::parallel_truth_table;
use satcts::report::theory_report;
use satcts::{run_campaign, PolicyKind, ScenarioConfig};
use satcts_core::audit::{audit_sat_cts, replay};
use satcts_core::sim::run_policy;
use satcts_core::stream::{substream, Domain};
use satcts_core::theory::{
    ceil_log2, confidence_regret, critical_cts_horizon, critical_cts_horizon_ceiling,
    critical_observations, cts_constants, gap_profile, good_event, good_event_budget,
    standard_bound_constants, BoundMode,
};
use satcts_core::{
    best_assignment, brute_force_assignment, ProblemDims, RunTrace, SatCts, SatCtsConfig,
    ScoreTable,
};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Mean over `traces` of `series(trace)[k]`.
fn mean_at(traces: &[&RunTrace], k: usize, series: fn(&RunTrace) -> Vec<f64>) -> f64 {
    traces.iter().map(|t| series(t)[k]).sum::<f64>() / traces.len() as f64
}

fn of(traces: &[RunTrace], kind: PolicyKind) -> Vec<&RunTrace> {
    traces.iter().filter(|t| t.policy == kind.name()).collect()
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = substream(2024, Domain::Experiment, 1, 0, 0);
    let mut worst = 0.0f64;
    for case in 0..200 {
        let ues = rng.random_range(1..=4);
        let (stations, beams) = loop {
            let b = rng.random_range(1..=3);
            let k = rng.random_range(1..=6 / b);
            if b * k >= ues {
                break (b, k);
            }
        };
        let levels = rng.random_range(1..=3);
        let dims = ProblemDims::new(ues, stations, beams, levels, 100).map_err(err)?;
        let scores: Vec<f64> = (0..dims.arm_count())
            .map(|_| rng.random_range(-5.0..20.0))
            .collect();
        let table = ScoreTable::from_vec(scores);
        let fast = best_assignment(&table, &dims).map_err(err)?;
        let slow = brute_force_assignment(&table, &dims).map_err(err)?;
        let gap = (fast.total(&dims, table.as_slice()) - slow.total(&dims, table.as_slice())).abs();
        if gap > 1e-9 {
            return Err(format!(
                "case {case}: Hungarian {fast:?} vs brute force {slow:?}, gap {gap}"
            ));
        }
        worst = worst.max(gap);
    }
    let elapsed = start.elapsed();
    ensure(
        elapsed < Duration::from_secs(5),
        format!("200 instances, max gap {worst:e}, {elapsed:.2?}"),
    )
}

fn realizable_flattening(dir: &Path) -> Outcome {
    let start = Instant::now();
    let cfg = small(dir, 7.0, 20_000);
    let c = run_campaign(&cfg).map_err(err)?;
    let elapsed = start.elapsed();
    let g_star = c.truth.optimal_value();
    let cum = RunTrace::cumulative_satisficing_regret;
    let sat = of(&c.traces, PolicyKind::SatCts);
    let (r10, r20) = (mean_at(&sat, 9_999, cum), mean_at(&sat, 19_999, cum));
    let cts = mean_at(&of(&c.traces, PolicyKind::Cts), 19_999, cum);
    let cucb = mean_at(&of(&c.traces, PolicyKind::Cucb), 19_999, cum);
    let growth = (r20 - r10) / r10;
    ensure(
        g_star - cfg.threshold >= 0.5
            && growth <= 0.02
            && r20 < cts
            && r20 < cucb
            && elapsed < Duration::from_secs(120),
        format!(
            "g* - tau = {:.3}, SAT-CTS {r10:.2} -> {r20:.2} ({:+.2}%), CTS {cts:.1}, CUCB {cucb:.1}, {elapsed:.1?}",
            g_star - cfg.threshold,
            100.0 * growth
        ),
    )
}

fn nonrealizable_reduction(dir: &Path) -> Outcome {
    let cfg = small(dir, 13.0, 20_000);
    let c = run_campaign(&cfg).map_err(err)?;
    let g_star = c.truth.optimal_value();
    if cfg.threshold <= cfg.rates.iter().cloned().fold(0.0, f64::max) {
        return Err("threshold not above r_max".into());
    }
    let sat = of(&c.traces, PolicyKind::SatCts);
    let cum_sat = RunTrace::cumulative_satisficing_regret;
    let slope = (mean_at(&sat, 19_999, cum_sat) - mean_at(&sat, 9_999, cum_sat)) / 10_000.0;
    let target = cfg.threshold - g_star;
    let slope_err = (slope / target - 1.0).abs();
    let cum_std = RunTrace::cumulative_standard_regret;
    let s = mean_at(&sat, 19_999, cum_std);
    let t = mean_at(&of(&c.traces, PolicyKind::Cts), 19_999, cum_std);
    let u = mean_at(&of(&c.traces, PolicyKind::Cucb), 19_999, cum_std);
    let agree = (s - t).abs() / s.min(t);
    let detail = format!(
        "(a) slope {slope:.4} vs {target:.4} ({:.2}%), (b) std regret SAT-CTS {s:.1} / CTS {t:.1} ({:.1}%), (c) CUCB {u:.1} = {:.2}x",
        100.0 * slope_err,
        100.0 * agree,
        u / s.max(t)
    );
    ensure(
        slope_err <= 0.05 && agree <= 0.15 && u >= 1.5 * s.max(t),
        detail,
    )
}

fn tiny_theory(dir: &Path) -> ScenarioConfig {
    tiny(dir, 5.0)
}

fn bound_check(dir: &Path) -> Outcome {
    let cfg = tiny_theory(dir);
    let r = theory_report(&cfg).map_err(err)?;
    let c = &r.check;
    ensure(
        c.mode == BoundMode::Realizable && c.runs == 20 && cfg.reset_priors && c.pass,
        format!(
            "measured {:.3} <= bound {:.4e} over {} runs, T = {}",
            c.measured, c.bound, c.runs, c.horizon
        ),
    )
}

fn coverage(dir: &Path) -> Outcome {
    const TRIALS: u64 = 100_000;
    let mut rng = substream(5, Domain::Experiment, 2, 0, 0);
    let mut worst = f64::NEG_INFINITY;
    let mut cells = 0;
    for &psi in &[0.2, 0.5, 0.8] {
        for &n in &[5u64, 20, 100, 500] {
            for &eps in &[0.02, 0.05, 0.1, 0.2] {
                let bin = Binomial::new(n, psi).map_err(err)?;
                let cutoff = (psi + eps) * n as f64;
                let hits = (0..TRIALS)
                    .filter(|_| bin.sample(&mut rng) as f64 >= cutoff)
                    .count();
                let p = hits as f64 / TRIALS as f64;
                let se = (p * (1.0 - p) / TRIALS as f64).sqrt();
                let bound = (-2.0 * n as f64 * eps * eps).exp();
                if p > bound + 3.0 * se {
                    return Err(format!("psi {psi}, n {n}, eps {eps}: {p} > {bound} + 3 SE"));
                }
                worst = worst.max(p - bound);
                cells += 1;
            }
        }
    }

    let cfg = tiny_theory(dir);
    let env = cfg.environment().map_err(err)?;
    let dims = *env.dims();
    let truth = parallel_truth_table(&env, cfg.n_mc, cfg.truth_seed).map_err(err)?;
    let t0 = dims.init_rounds() as u64;
    let mut failures = Vec::new();
    for &seed in &cfg.seeds {
        let mut p = SatCts::new(
            dims,
            env.rates().clone(),
            SatCtsConfig {
                threshold: cfg.threshold,
                reset_priors: cfg.reset_priors,
                seed,
            },
        )
        .map_err(err)?;
        let tr = run_policy(&mut p, &env, &truth, cfg.threshold, seed).map_err(err)?;
        let mut bad = 0u32;
        replay(&tr, &dims, |rec, counters| {
            if rec.slot > t0 && !good_event(counters, truth.psi(), rec.slot) {
                bad += 1;
            }
        })
        .map_err(err)?;
        failures.push(bad as f64);
    }
    let n = failures.len() as f64;
    let mean = failures.iter().sum::<f64>() / n;
    let sd = (failures.iter().map(|f| (f - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    let budget = good_event_budget(dims.arm_count(), t0 + 1, dims.horizon());
    ensure(
        failures.len() >= 20 && mean <= budget + 3.0 * sd / n.sqrt(),
        format!(
            "{cells} Hoeffding cells, max excess {worst:.2e}; good-event failures {mean:.3} per run vs budget {budget:.3} over {} seeds",
            failures.len()
        ),
    )
}

fn trace_invariants(dir: &Path) -> Outcome {
    let mut audited = 0;
    for reset in [false, true] {
        let mut cfg = small(dir, 7.0, 4000);
        cfg.policies = vec![PolicyKind::SatCts];
        cfg.reset_priors = reset;
        cfg.n_mc = 5000;
        let env = cfg.environment().map_err(err)?;
        let dims = *env.dims();
        let c = run_campaign(&cfg).map_err(err)?;
        for tr in &c.traces {
            audit_sat_cts(tr, &dims, env.rates())
                .map_err(err)?
                .map_err(|v| format!("seed {} reset {reset}: {v}", tr.seed))?;
            audited += 1;
        }
    }
    let cfg = tiny_theory(dir);
    let env = cfg.environment().map_err(err)?;
    let truth = parallel_truth_table(&env, 2000, 0).map_err(err)?;
    for seed in 1..=5 {
        let mut p = SatCts::new(
            *env.dims(),
            env.rates().clone(),
            SatCtsConfig {
                threshold: 5.0,
                reset_priors: true,
                seed,
            },
        )
        .map_err(err)?;
        let tr = run_policy(&mut p, &env, &truth, 5.0, seed).map_err(err)?;
        audit_sat_cts(&tr, env.dims(), env.rates())
            .map_err(err)?
            .map_err(|v| format!("tiny seed {seed}: {v}"))?;
        audited += 1;
    }
    Ok(format!(
        "{audited} traces: round lengths, LCB replay, init cover, s <= n"
    ))
}

/// `exp(q)` bracketed by Taylor partial sums; valid for `0 <= q < terms`.
fn exp_bounds(q: &BigRational, terms: u32) -> (BigRational, BigRational) {
    let one = BigRational::from_integer(BigInt::from(1));
    let mut term = one.clone();
    let mut sum = one.clone();
    for k in 1..=terms {
        term = term * q / BigRational::from_integer(BigInt::from(k));
        sum += &term;
    }
    let next = term * q / BigRational::from_integer(BigInt::from(terms + 1));
    let ratio = q / BigRational::from_integer(BigInt::from(terms + 2));
    let tail = next / (one - ratio);
    (sum.clone(), sum + tail)
}

fn constant_calculators() -> Outcome {
    let n0 = critical_observations(12.0, 1.0, 15, 0.1).map_err(err)?;
    // 72 ln(15 * 73 / 0.1) lies in (669, 670] iff exp(669/72) < 10950 <= exp(670/72).
    let big = |n: i64| BigRational::from_integer(BigInt::from(n));
    let target = big(10_950);
    let (_, hi_669) = exp_bounds(&(big(669) / big(72)), 80);
    let (lo_670, _) = exp_bounds(&(big(670) / big(72)), 80);
    if !(n0 == 670 && hi_669 < target && target <= lo_670) {
        return Err(format!("N0 = {n0}, exact bracket check failed"));
    }

    let mut rng = substream(7, Domain::Experiment, 3, 0, 0);
    for case in 0..50 {
        let c1 = 10f64.powf(rng.random_range(-1.0..4.0));
        let c0 = 10f64.powf(rng.random_range(0.0..6.0));
        let n0 = rng.random_range(0..2000u64);
        let delta = rng.random_range(0.01..0.249);
        let t = critical_cts_horizon(c1, c0, n0, delta).map_err(err)?;
        let ceiling = critical_cts_horizon_ceiling(c1, c0, n0, delta).map_err(err)?;
        let holds = |t: f64| t - n0 as f64 >= (c1 * t.ln() + c0) / delta;
        if !(t <= ceiling && holds(t) && (t <= 2.0 || !holds(t - 1.0))) {
            return Err(format!(
                "case {case}: T* {t}, ceiling {ceiling}, c1 {c1}, c0 {c0}, n0 {n0}, delta {delta}"
            ));
        }
    }

    for &(arms, tau) in &[(12usize, 5.0f64), (72, 7.0), (16_200, 8.0)] {
        let got = confidence_regret(arms, tau);
        let want = std::f64::consts::PI.powi(2) / 3.0 * arms as f64 * tau;
        if (got - want).abs() > 1e-9 * want {
            return Err(format!("R_conf({arms}, {tau}) = {got}, expected {want}"));
        }
    }

    let dims = ProblemDims::new(2, 1, 3, 2, 3000).map_err(err)?;
    let rates = satcts_core::RateSet::new(vec![6.0, 8.0]).map_err(err)?;
    let psi = vec![0.9, 0.4, 0.3, 0.2, 0.1, 0.05, 0.8, 0.6, 0.2, 0.1, 0.3, 0.2];
    let truth =
        satcts_core::environment::TruthTable::from_psi(dims, rates.clone(), psi).map_err(err)?;
    let profile = gap_profile(&truth, 20.0).map_err(err)?;
    let cts = cts_constants(&profile, &dims, &rates, None, 1.0).map_err(err)?;
    let standard = standard_bound_constants(&profile, &dims, &rates, cts).map_err(err)?;
    let t0 = dims.init_rounds() as u64;
    for horizon in [
        1u64,
        t0,
        t0 + 1,
        t0 + 2,
        100,
        1000,
        1024 + t0 - 2,
        1024 + t0 - 1,
        20_000,
    ] {
        let x = (horizon as i64 - t0 as i64 + 2).max(1) as u64;
        let mut j = 0u32;
        while (1u64 << j) < x {
            j += 1;
        }
        if standard.rounds(horizon) != j || ceil_log2(x) != j {
            return Err(format!(
                "J({horizon}) = {}, expected {j}",
                standard.rounds(horizon)
            ));
        }
        let sum: f64 = (1..=j)
            .map(|i| profile.delta_max * (cts.c1 * i as f64 * std::f64::consts::LN_2 + cts.c0))
            .sum();
        let got = standard.cts_round_sum(horizon);
        if (got - sum).abs() > 1e-9 * sum.abs().max(1.0) {
            return Err(format!("round sum at T = {horizon}: {got} vs {sum}"));
        }
    }
    Ok(
        "N0 = 670 (exact bracket), 50 T* <= ceiling and minimal, J(T) and R_conf spot values"
            .into(),
    )
}

fn oracle_seconds(ues: usize, reps: usize) -> Result<f64, String> {
    let dims = ProblemDims::new(ues, 3, 120, 3, 2000).map_err(err)?;
    let mut rng = substream(8, Domain::Experiment, 4, ues as u64, 0);
    let tables: Vec<ScoreTable> = (0..reps)
        .map(|_| {
            ScoreTable::from_vec(
                (0..dims.arm_count())
                    .map(|_| rng.random_range(0.0..12.0))
                    .collect(),
            )
        })
        .collect();
    let mut best = f64::INFINITY;
    for _ in 0..3 {
        let start = Instant::now();
        for t in &tables {
            std::hint::black_box(best_assignment(t, &dims).map_err(err)?);
        }
        best = best.min(start.elapsed().as_secs_f64() / reps as f64);
    }
    Ok(best)
}

fn performance(dir: &Path) -> Outcome {
    let cfg = ScenarioConfig {
        policies: vec![PolicyKind::SatCts],
        seeds: vec![1],
        threshold: 13.0,
        n_mc: 1000,
        out_dir: dir.to_owned(),
        channel: satcts::config::ChannelConfig {
            seed: 1,
            power: 100.0,
            ..Default::default()
        },
        ..ScenarioConfig::default()
    };
    let dims = cfg.dims().map_err(err)?;
    if (
        dims.ues(),
        dims.stations(),
        dims.beams_per_station(),
        dims.rate_levels(),
        dims.horizon(),
    ) != (15, 3, 120, 3, 10_000)
    {
        return Err("default scenario is not full scale".into());
    }
    let start = Instant::now();
    let env = cfg.environment().map_err(err)?;
    let truth = parallel_truth_table(&env, cfg.n_mc, cfg.truth_seed).map_err(err)?;
    let setup = start.elapsed();
    let mut p = SatCts::new(
        dims,
        env.rates().clone(),
        SatCtsConfig {
            threshold: cfg.threshold,
            reset_priors: false,
            seed: 1,
        },
    )
    .map_err(err)?;
    let tr = run_policy(&mut p, &env, &truth, cfg.threshold, 1).map_err(err)?;
    let total = start.elapsed();
    let committed = tr
        .records
        .iter()
        .filter(|r| r.phase.round().is_some())
        .count();

    let ms = [5usize, 10, 15, 20];
    let secs: Vec<f64> = ms
        .iter()
        .map(|&m| oracle_seconds(m, 200))
        .collect::<Result<_, _>>()?;
    let xs: Vec<f64> = ms.iter().map(|&m| (m as f64).ln()).collect();
    let ys: Vec<f64> = secs.iter().map(|s| s.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / 4.0, ys.iter().sum::<f64>() / 4.0);
    let slope = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - mx) * (y - my))
        .sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    let per_slot: Vec<String> = ms
        .iter()
        .zip(&secs)
        .map(|(m, s)| format!("M={m}: {:.0}us", s * 1e6))
        .collect();
    ensure(
        tr.len() == 10_000 && committed > 0 && total < Duration::from_secs(600) && slope <= 2.3,
        format!(
            "full-scale run {total:.1?} (setup {setup:.1?}, {committed} committed slots), oracle {}, log-log slope {slope:.2}",
            per_slot.join(", ")
        ),
    )
}

fn files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_owned()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(dir).unwrap().display().to_string();
                out.push((rel, fs::read(&p).unwrap()));
            }
        }
    }
    out.sort();
    out
}

fn determinism(dir: &Path) -> Outcome {
    let cfg = small(&dir.join("unused"), 7.0, 3000);
    fs::create_dir_all(dir).map_err(err)?;
    let path = dir.join("scenario.toml");
    fs::write(&path, cfg.to_toml()).map_err(err)?;
    for run in ["a", "b"] {
        let out = Command::new(env!("CARGO_BIN_EXE_satcts"))
            .args([
                "run",
                path.to_str().unwrap(),
                "--out",
                dir.join(run).to_str().unwrap(),
            ])
            .output()
            .map_err(err)?;
        if !out.status.success() {
            return Err(String::from_utf8_lossy(&out.stderr).into_owned());
        }
    }
    let csv = |d: &str| -> Vec<(String, Vec<u8>)> {
        files(&dir.join(d))
            .into_iter()
            .filter(|(n, _)| n.ends_with(".csv"))
            .collect()
    };
    let (a, b) = (csv("a"), csv("b"));
    ensure(
        a == b && a.len() == 3 * 5 + 3,
        format!("{} CSVs byte-identical across two CLI invocations", a.len()),
    )
}

fn main() -> ExitCode {
    let tmp = tempfile::tempdir().expect("temp dir");
    let sub = |name: &str| tmp.path().join(name);
    let criteria: Vec<Criterion> = vec![
        ("oracle equivalence", Box::new(oracle_equivalence)),
        (
            "realizable flattening",
            Box::new(|| realizable_flattening(&sub("c2"))),
        ),
        (
            "non-realizable reduction",
            Box::new(|| nonrealizable_reduction(&sub("c3"))),
        ),
        ("regret bound check", Box::new(|| bound_check(&sub("c4")))),
        ("concentration coverage", Box::new(|| coverage(&sub("c5")))),
        (
            "trace invariants",
            Box::new(|| trace_invariants(&sub("c6"))),
        ),
        ("constant calculators", Box::new(constant_calculators)),
        ("performance", Box::new(|| performance(&sub("c8")))),
        ("determinism", Box::new(|| determinism(&sub("c9")))),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("criterion {} {name}: PASS ({d}) [{secs:.1}s]", i + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({d}) [{secs:.1}s]", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
