//! Theory report: gap profile, bound constants and a bound check against
//! SAT-CTS traces of the same scenario.
//!
//! Writes `theory.txt` and `theory.csv` (`name, value`) into the output
//! directory.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use satcts_core::theory::{
    bound_check, cts_constants, gap_profile, satisficing_bound_constants, standard_bound_constants,
    BoundMode, BoundReport, GapProfile, RegretBound,
};

use crate::campaign::{parallel_truth_table, run_traces};
use crate::config::{PolicyKind, ScenarioConfig};
use crate::error::{Error, Result};

pub struct TheoryReport {
    pub profile: GapProfile,
    pub bound: RegretBound,
    pub check: BoundReport,
    pub rows: Vec<(String, f64)>,
    pub text: PathBuf,
    pub csv: PathBuf,
}

pub fn theory_report(cfg: &ScenarioConfig) -> Result<TheoryReport> {
    let env = cfg.environment()?;
    let dims = *env.dims();
    let rates = env.rates().clone();
    let truth = parallel_truth_table(&env, cfg.n_mc, cfg.truth_seed)?;
    let profile = gap_profile(&truth, cfg.threshold)?;
    let exact = profile.exact()?.clone();
    let t = cfg.theory;

    let mut rows: Vec<(String, f64)> = vec![
        ("threshold".into(), cfg.threshold),
        ("g_star".into(), profile.g_star),
        ("delta_max".into(), profile.delta_max),
        (
            "delta_min_std".into(),
            exact.delta_min_std.unwrap_or(f64::NAN),
        ),
        ("assignments".into(), exact.assignments as f64),
        ("delta".into(), t.delta),
        ("alpha1".into(), t.alpha1),
    ];
    let (bound, mode) = if let Some(margin) = profile.realizable_margin() {
        let c = satisficing_bound_constants(&profile, &dims, &rates, t.delta, t.epsilon, t.alpha1)?;
        rows.extend([
            ("realizability_margin".into(), margin),
            ("epsilon".into(), c.cts.epsilon),
            ("C1".into(), c.cts.c1),
            ("C0".into(), c.cts.c0),
            ("N0".into(), c.n0 as f64),
            ("T_star_cts".into(), c.t_star),
            ("T_star_cts_ceiling".into(), c.t_star_ceiling),
            ("i_star".into(), c.i_star as f64),
            ("R_init".into(), c.r_init),
            ("R_conf".into(), c.r_conf),
            ("R_MEAN".into(), c.r_mean),
            ("R_CTS".into(), c.r_cts),
            ("bound".into(), c.total()),
        ]);
        (RegretBound::Satisficing(c), BoundMode::Realizable)
    } else if profile.nonrealizable_margin().is_some() {
        let cts = cts_constants(&profile, &dims, &rates, t.epsilon, t.alpha1)?;
        let c = standard_bound_constants(&profile, &dims, &rates, cts)?;
        rows.extend([
            ("nonrealizability_margin".into(), c.margin),
            ("epsilon".into(), cts.epsilon),
            ("C1".into(), cts.c1),
            ("C0".into(), cts.c0),
            ("R_trans_nr".into(), c.r_trans),
            ("J".into(), c.rounds(dims.horizon()) as f64),
            ("cts_round_sum".into(), c.cts_round_sum(dims.horizon())),
            ("bound".into(), c.bound(dims.horizon())),
        ]);
        (RegretBound::Standard(c), BoundMode::NonRealizable)
    } else {
        return Err(satcts_core::Error::ModeMismatch(
            "threshold equals g*; neither regime applies",
        )
        .into());
    };

    let mut sat = cfg.clone();
    sat.policies = vec![PolicyKind::SatCts];
    let traces = run_traces(&sat, &env, &truth)?;
    let check = bound_check(&traces, &bound, mode)?;
    rows.push(("measured".into(), check.measured));
    rows.push(("pass".into(), if check.pass { 1.0 } else { 0.0 }));

    fs::create_dir_all(&cfg.out_dir).map_err(Error::io(&cfg.out_dir))?;
    let csv_path = cfg.out_dir.join("theory.csv");
    let mut w = csv::Writer::from_path(&csv_path).map_err(Error::csv(&csv_path))?;
    w.write_record(["name", "value"])
        .map_err(Error::csv(&csv_path))?;
    for (k, v) in &rows {
        w.write_record([k.as_str(), &format!("{v}")])
            .map_err(Error::csv(&csv_path))?;
    }
    w.flush().map_err(Error::io(&csv_path))?;

    let mut text = String::new();
    let regime = match mode {
        BoundMode::Realizable => "realizable (satisficing regret)",
        BoundMode::NonRealizable => "non-realizable (standard regret)",
    };
    let _ = writeln!(text, "regime: {regime}");
    let _ = writeln!(text, "reset priors: {}", cfg.reset_priors);
    for (k, v) in &rows {
        let _ = writeln!(text, "{k:>24} = {v}");
    }
    let _ = writeln!(
        text,
        "verdict: {} (measured {} over {} runs of {} slots, bound {})",
        if check.pass { "PASS" } else { "FAIL" },
        check.measured,
        check.runs,
        check.horizon,
        check.bound
    );
    let text_path = cfg.out_dir.join("theory.txt");
    fs::write(&text_path, &text).map_err(Error::io(&text_path))?;

    Ok(TheoryReport {
        profile,
        bound,
        check,
        rows,
        text: text_path,
        csv: csv_path,
    })
}
