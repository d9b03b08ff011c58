//! Regret-bound constants and an empirical bound checker.
//!
//! Every constant is computed literally from its closed form. Logarithms
//! are natural. `alpha1` is the unknown absolute constant of the CTS
//! suboptimal-play bound and is always a caller input.

use alloc::format;
use alloc::vec::Vec;

use crate::assignment::{best_assignment, for_each_assignment};
use crate::environment::TruthTable;
use crate::error::{Error, Result};
use crate::math;
use crate::metrics::RunTrace;
use crate::model::{ProblemDims, RateSet};
use crate::stats::{ScoreTable, SharedCounters};

pub const EXACT_MAX_UES: usize = 5;
pub const EXACT_MAX_BEAMS: usize = 8;
pub const EXACT_MAX_RATES: usize = 3;

/// Per-arm gaps that need the full assignment enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactGaps {
    /// `Delta_i^bad`, `None` when no bad assignment contains arm `i`.
    pub arm_bad: Vec<Option<f64>>,
    /// `min { Delta_s : i in s, s != s* }`, `None` when `i` only appears in `s*`.
    pub arm_min_gap: Vec<Option<f64>>,
    /// `Delta_min^std`, `None` when `s*` is the only assignment.
    pub delta_min_std: Option<f64>,
    /// Assignments other than `s*` that reach `g*`.
    pub optimal_ties: usize,
    pub assignments: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapProfile {
    pub threshold: f64,
    pub g_star: f64,
    /// `min_s g(s)`.
    pub g_min: f64,
    pub delta_max: f64,
    exact: Option<ExactGaps>,
}

impl GapProfile {
    /// `Delta_* = g* - tau`, when positive.
    pub fn realizable_margin(&self) -> Option<f64> {
        let m = self.g_star - self.threshold;
        (m > 0.0).then_some(m)
    }

    /// `Delta_*^nr = tau - g*`, when positive.
    pub fn nonrealizable_margin(&self) -> Option<f64> {
        let m = self.threshold - self.g_star;
        (m > 0.0).then_some(m)
    }

    pub fn exact(&self) -> Result<&ExactGaps> {
        self.exact
            .as_ref()
            .ok_or(Error::ExactOnly("per-arm gaps need exact enumeration"))
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }
}

pub fn within_exact_guard(dims: &ProblemDims) -> bool {
    dims.ues() <= EXACT_MAX_UES
        && dims.beam_count() <= EXACT_MAX_BEAMS
        && dims.rate_levels() <= EXACT_MAX_RATES
}

/// Gap quantities of a truth table at threshold `tau`. Small instances get
/// the exhaustive per-arm gaps; larger ones only the oracle quantities.
pub fn gap_profile(truth: &TruthTable, tau: f64) -> Result<GapProfile> {
    if !tau.is_finite() || tau < 0.0 {
        return Err(Error::OutOfInterval {
            name: "tau",
            value: tau,
            interval: "[0, inf)".into(),
        });
    }
    let dims = *truth.dims();
    let mu = truth.mu();
    let g_star = truth.optimal_value();
    let neg: Vec<f64> = mu.iter().map(|v| -v).collect();
    let worst = best_assignment(&ScoreTable::from_vec(neg), &dims)?;
    let g_min = truth.value(&worst);
    let exact = within_exact_guard(&dims).then(|| enumerate_gaps(truth, tau));
    Ok(GapProfile {
        threshold: tau,
        g_star,
        g_min,
        delta_max: g_star - g_min,
        exact,
    })
}

fn enumerate_gaps(truth: &TruthTable, tau: f64) -> ExactGaps {
    let dims = *truth.dims();
    let mu = truth.mu();
    let g_star = truth.optimal_value();
    let star = truth.optimal().choices();
    let arms = dims.arm_count();
    let mut arm_bad: Vec<Option<f64>> = alloc::vec![None; arms];
    let mut arm_min_gap: Vec<Option<f64>> = alloc::vec![None; arms];
    let mut delta_min_std: Option<f64> = None;
    let mut optimal_ties = 0;
    let mut assignments = 0u64;
    let mut idx = Vec::with_capacity(dims.ues());
    for_each_assignment(&dims, |choices| {
        assignments += 1;
        idx.clear();
        idx.extend(
            choices
                .iter()
                .enumerate()
                .map(|(m, c)| dims.arm_index(m, c.beam, c.rate)),
        );
        let g = idx.iter().map(|&i| mu[i]).sum::<f64>() / dims.ues() as f64;
        if g < tau {
            let gap = tau - g;
            for &i in &idx {
                keep_min(&mut arm_bad[i], gap);
            }
        }
        if choices != star {
            let gap = g_star - g;
            if gap <= 0.0 {
                optimal_ties += 1;
            }
            keep_min(&mut delta_min_std, gap);
            for &i in &idx {
                keep_min(&mut arm_min_gap[i], gap);
            }
        }
    });
    ExactGaps {
        arm_bad,
        arm_min_gap,
        delta_min_std,
        optimal_ties,
        assignments,
    }
}

fn keep_min(slot: &mut Option<f64>, v: f64) {
    if slot.is_none_or(|old| v < old) {
        *slot = Some(v);
    }
}

/// `tau * x` with `0 * inf = 0`.
fn scaled(tau: f64, x: f64) -> f64 {
    if tau == 0.0 {
        0.0
    } else {
        tau * x
    }
}

fn finite(name: &'static str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(name))
    }
}

/// Constants of the CTS suboptimal-play bound `E[B_sub(T)] <= C1 ln T + C0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CtsConstants {
    pub epsilon: f64,
    pub alpha1: f64,
    /// `r_max / M`.
    pub b_cts: f64,
    pub k_star: usize,
    pub k_max: usize,
    pub c1: f64,
    pub c0: f64,
}

/// Open interval of admissible `epsilon`: `(0, M Delta_min / (2 r_max (M^2 + 2)))`.
pub fn epsilon_interval(profile: &GapProfile, dims: &ProblemDims, rates: &RateSet) -> Result<f64> {
    let dmin = profile
        .exact()?
        .delta_min_std
        .ok_or(Error::ExactOnly("a single assignment has no standard gap"))?;
    let m = dims.ues() as f64;
    Ok(m * dmin / (2.0 * rates.max() * (m * m + 2.0)))
}

/// `C1` and `C0`; `epsilon = None` picks the midpoint of its interval.
pub fn cts_constants(
    profile: &GapProfile,
    dims: &ProblemDims,
    rates: &RateSet,
    epsilon: Option<f64>,
    alpha1: f64,
) -> Result<CtsConstants> {
    let exact = profile.exact()?;
    let upper = epsilon_interval(profile, dims, rates)?;
    let eps = epsilon.unwrap_or(upper / 2.0);
    if !(eps > 0.0 && eps < upper) {
        return Err(Error::OutOfInterval {
            name: "epsilon",
            value: eps,
            interval: format!("(0, {upper})"),
        });
    }
    if !(alpha1.is_finite() && alpha1 >= 0.0) {
        return Err(Error::OutOfInterval {
            name: "alpha1",
            value: alpha1,
            interval: "[0, inf)".into(),
        });
    }
    let m = dims.ues();
    let mf = m as f64;
    let b = rates.max() / mf;
    let (k_star, k_max) = (m, m);
    let ks = k_star as f64;
    let shift = 2.0 * b * (ks * ks + 2.0) * eps;
    let c1: f64 = exact
        .arm_min_gap
        .iter()
        .flatten()
        .map(|&gap| {
            let d = gap - shift;
            8.0 * b * b * mf * mf / (d * d)
        })
        .sum();
    let arms = dims.arm_count() as f64;
    let e2 = eps * eps;
    let kmax = k_max as f64;
    let tail = if alpha1 == 0.0 {
        0.0
    } else {
        alpha1 * (8.0 / e2) * math::powf(4.0 / e2 + 1.0, ks) * math::ln(ks / e2)
    };
    let c0 = arms * kmax * kmax / e2 + 3.0 * arms + tail;
    Ok(CtsConstants {
        epsilon: eps,
        alpha1,
        b_cts: b,
        k_star,
        k_max,
        c1: finite("C1", c1)?,
        c0: finite("C0", c0)?,
    })
}

/// `N0 = ceil(a ln(M (1 + a) / delta))` with `a = r_max^2 / (2 Delta_*^2)`.
pub fn critical_observations(r_max: f64, margin: f64, ues: usize, delta: f64) -> Result<u64> {
    check_delta(delta)?;
    if !(margin > 0.0) {
        return Err(Error::OutOfInterval {
            name: "margin",
            value: margin,
            interval: "(0, inf)".into(),
        });
    }
    let a = r_max * r_max / (2.0 * margin * margin);
    let v = math::ceil(a * math::ln(ues as f64 * (1.0 + a) / delta));
    float_to_u64("N0", v)
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta < 0.25 {
        Ok(())
    } else {
        Err(Error::OutOfInterval {
            name: "delta",
            value: delta,
            interval: "(0, 1/4)".into(),
        })
    }
}

fn float_to_u64(name: &'static str, v: f64) -> Result<u64> {
    if (0.0..1.8e19).contains(&v) {
        Ok(v as u64)
    } else {
        Err(Error::NonFinite(name))
    }
}

fn horizon_slack(t: f64, n0: u64, c1: f64, c0: f64, delta: f64) -> f64 {
    t - n0 as f64 - (c1 * math::ln(t) + c0) / delta
}

/// Smallest integer `T >= 1` with `T - N0 >= (C1 ln T + C0) / delta`.
///
/// The slack is increasing for `T >= C1 / delta` and negative below it,
/// so a bisection over that region finds the first crossing. The result
/// is returned as a float because it routinely exceeds `u64`; above
/// `2^53` it is exact only to float spacing.
pub fn critical_cts_horizon(c1: f64, c0: f64, n0: u64, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    if !(c1 >= 0.0 && c0 >= 0.0 && c1.is_finite() && c0.is_finite()) {
        return Err(Error::NonFinite("C1/C0"));
    }
    let slack = |t: f64| horizon_slack(t, n0, c1, c0, delta);
    let mut lo = math::floor(c1 / delta).max(1.0);
    if slack(lo) >= 0.0 {
        // only reachable when the whole region satisfies the inequality
        while lo > 1.0 && slack(lo - 1.0) >= 0.0 {
            lo -= 1.0;
        }
        return Ok(lo);
    }
    let mut hi = lo.max(2.0);
    while slack(hi) < 0.0 {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::NonFinite("T*_CTS"));
        }
    }
    while hi - lo > 1.0 {
        let mid = math::floor(lo + (hi - lo) / 2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if slack(mid) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// `ceil((2 C1 / delta) [ln(C1 / delta) + (delta N0 + C0) / C1]^+)`.
pub fn critical_cts_horizon_ceiling(c1: f64, c0: f64, n0: u64, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    if c1 <= 0.0 {
        return Err(Error::OutOfInterval {
            name: "C1",
            value: c1,
            interval: "(0, inf)".into(),
        });
    }
    let inner = math::ln(c1 / delta) + (delta * n0 as f64 + c0) / c1;
    finite(
        "T*_CTS ceiling",
        math::ceil(2.0 * c1 / delta * inner.max(0.0)),
    )
}

/// Smallest `i` with `2^i >= x`, for `x >= 1`.
pub fn ceil_log2(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}

/// [`ceil_log2`] for a float holding an integer `>= 1`.
pub fn ceil_log2_f64(x: f64) -> u32 {
    if x < 9.0e15 {
        ceil_log2(x as u64)
    } else {
        math::ceil(math::log2(x)) as u32
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundConstants {
    pub threshold: f64,
    pub delta: f64,
    pub cts: CtsConstants,
    pub init_rounds: u64,
    pub n0: u64,
    pub t_star: f64,
    pub t_star_ceiling: f64,
    pub i_star: u32,
    pub r_init: f64,
    pub r_conf: f64,
    pub r_mean: f64,
    pub r_cts: f64,
}

impl BoundConstants {
    pub fn total(&self) -> f64 {
        self.r_init + self.r_conf + self.r_mean + self.r_cts
    }
}

/// `R_conf = (pi^2 / 3) |A| tau`.
pub fn confidence_regret(arms: usize, tau: f64) -> f64 {
    scaled(tau, math::PI * math::PI / 3.0 * arms as f64)
}

/// `R_MEAN = tau sum_i r_i^2 / (2 (Delta_i^bad)^2)`, arms without a bad
/// assignment contributing zero.
pub fn mean_phase_regret(exact: &ExactGaps, dims: &ProblemDims, rates: &RateSet, tau: f64) -> f64 {
    let r_levels = dims.rate_levels();
    let sum: f64 = exact
        .arm_bad
        .iter()
        .enumerate()
        .filter_map(|(i, gap)| {
            gap.map(|g| {
                let r = rates.get(i % r_levels);
                r * r / (2.0 * g * g)
            })
        })
        .sum();
    scaled(tau, sum)
}

/// The realizable-case satisficing regret bound and all its ingredients.
pub fn satisficing_bound_constants(
    profile: &GapProfile,
    dims: &ProblemDims,
    rates: &RateSet,
    delta: f64,
    epsilon: Option<f64>,
    alpha1: f64,
) -> Result<BoundConstants> {
    check_delta(delta)?;
    let margin = profile
        .realizable_margin()
        .ok_or(Error::ModeMismatch("the threshold is not realizable"))?;
    let exact = profile.exact()?;
    let cts = cts_constants(profile, dims, rates, epsilon, alpha1)?;
    let tau = profile.threshold;
    let n0 = critical_observations(rates.max(), margin, dims.ues(), delta)?;
    let t_star = critical_cts_horizon(cts.c1, cts.c0, n0, delta)?;
    let t_star_ceiling = critical_cts_horizon_ceiling(cts.c1, cts.c0, n0, delta)?;
    let i_star = ceil_log2_f64(t_star);
    let (c1, c0) = (cts.c1, cts.c0);
    let i = i_star as f64;
    let q = 1.0 - 2.0 * delta;
    let cts_sum = c1 * math::LN_2 / 2.0 * i * i
        + c0 * i
        + (c1 * i * math::LN_2 + c0) / q
        + 2.0 * c1 * delta * math::LN_2 / (q * q);
    let init_rounds = dims.init_rounds() as u64;
    Ok(BoundConstants {
        threshold: tau,
        delta,
        cts,
        init_rounds,
        n0,
        t_star,
        t_star_ceiling,
        i_star,
        r_init: init_rounds as f64 * tau,
        r_conf: confidence_regret(dims.arm_count(), tau),
        r_mean: finite("R_MEAN", mean_phase_regret(exact, dims, rates, tau))?,
        r_cts: finite("R_CTS", scaled(tau, cts_sum))?,
    })
}

/// Non-realizable standard-regret bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StandardBoundConstants {
    pub delta_max: f64,
    pub margin: f64,
    pub init_rounds: u64,
    pub cts: CtsConstants,
    /// `R_trans^nr`.
    pub r_trans: f64,
}

impl StandardBoundConstants {
    /// `J(T) = ceil(log2(max(1, T - T0 + 2)))`.
    pub fn rounds(&self, horizon: u64) -> u32 {
        let x = (horizon as i128 - self.init_rounds as i128 + 2).max(1);
        ceil_log2(x as u64)
    }

    /// `sum_{j=1}^{J(T)} Delta_max (C1 j ln 2 + C0)`.
    pub fn cts_round_sum(&self, horizon: u64) -> f64 {
        (1..=self.rounds(horizon))
            .map(|j| self.delta_max * (self.cts.c1 * j as f64 * math::LN_2 + self.cts.c0))
            .sum()
    }

    pub fn bound(&self, horizon: u64) -> f64 {
        self.r_trans + self.cts_round_sum(horizon)
    }
}

/// `R_trans^nr = Delta_max (T0 + (pi^2/3) |A| + sum_i r_i^2 / (2 (Delta_*^nr)^2))`.
pub fn standard_bound_constants(
    profile: &GapProfile,
    dims: &ProblemDims,
    rates: &RateSet,
    cts: CtsConstants,
) -> Result<StandardBoundConstants> {
    let margin = profile
        .nonrealizable_margin()
        .ok_or(Error::ModeMismatch("the threshold is realizable"))?;
    let r_levels = dims.rate_levels();
    let arm_sum: f64 = (0..dims.arm_count())
        .map(|i| {
            let r = rates.get(i % r_levels);
            r * r / (2.0 * margin * margin)
        })
        .sum();
    let init_rounds = dims.init_rounds() as u64;
    let inner = init_rounds as f64 + math::PI * math::PI / 3.0 * dims.arm_count() as f64 + arm_sum;
    Ok(StandardBoundConstants {
        delta_max: profile.delta_max,
        margin,
        init_rounds,
        cts,
        r_trans: finite("R_trans", profile.delta_max * inner)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundMode {
    Realizable,
    NonRealizable,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegretBound {
    Satisficing(BoundConstants),
    Standard(StandardBoundConstants),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub mode: BoundMode,
    pub runs: usize,
    pub horizon: u64,
    /// Mean over runs of the final cumulative regret.
    pub measured: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Compares mean final regret across `traces` with the bound: satisficing
/// regret in realizable mode, standard regret otherwise.
pub fn bound_check(
    traces: &[RunTrace],
    bound: &RegretBound,
    mode: BoundMode,
) -> Result<BoundReport> {
    let first = traces.first().ok_or(Error::InvalidDims(
        "bound check needs at least one trace".into(),
    ))?;
    let horizon = first.len() as u64;
    if traces.iter().any(|t| t.len() as u64 != horizon) {
        return Err(Error::InvalidDims("traces differ in length".into()));
    }
    let n = traces.len() as f64;
    let (measured, value) = match (mode, bound) {
        (BoundMode::Realizable, RegretBound::Satisficing(c)) => (
            traces
                .iter()
                .map(RunTrace::total_satisficing_regret)
                .sum::<f64>()
                / n,
            c.total(),
        ),
        (BoundMode::NonRealizable, RegretBound::Standard(c)) => (
            traces
                .iter()
                .map(RunTrace::total_standard_regret)
                .sum::<f64>()
                / n,
            c.bound(horizon),
        ),
        _ => {
            return Err(Error::ModeMismatch(
                "bound does not match the requested mode",
            ))
        }
    };
    Ok(BoundReport {
        mode,
        runs: traces.len(),
        horizon,
        measured,
        bound: value,
        pass: measured <= value,
    })
}

/// Whether every arm's empirical mean lies within its concentration radius
/// of `psi`. Unpulled arms make the event fail.
pub fn good_event(counters: &SharedCounters, psi: &[f64], t: u64) -> bool {
    if t < 2 {
        return false;
    }
    let ln_t = math::ln(t as f64);
    psi.iter().enumerate().all(|(i, &p)| {
        let n = counters.pulls(i);
        counters.empirical_mean(i).is_some_and(|hat| {
            let c = crate::index::radius_from_log(ln_t, n);
            (hat - p).abs() <= c
        })
    })
}

/// `sum_{t=from}^{to} 2 |A| t^{-2}`.
pub fn good_event_budget(arms: usize, from: u64, to: u64) -> f64 {
    (from.max(1)..=to)
        .map(|t| 2.0 * arms as f64 / (t as f64 * t as f64))
        .sum()
}
