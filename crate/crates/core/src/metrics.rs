//! Regret, throughput and fairness measurements.
//!
//! Regrets use the true success probabilities, never the realized
//! feedback. Throughput is in bits/symbol.

use alloc::string::String;
use alloc::vec::Vec;

use crate::environment::TruthTable;
use crate::math;
use crate::model::{Assignment, Feedback};
use crate::policy::Phase;

/// `[tau - g(s)]_+`.
pub fn per_round_satisficing_regret(s: &Assignment, truth: &TruthTable, threshold: f64) -> f64 {
    (threshold - truth.value(s)).max(0.0)
}

/// `g* - g(s)`, floored at zero against round-off.
pub fn per_round_standard_regret(s: &Assignment, truth: &TruthTable) -> f64 {
    (truth.optimal_value() - truth.value(s)).max(0.0)
}

/// `(sum G)^2 / (M sum G^2)`; an all-zero vector counts as perfectly fair.
pub fn jain_index(totals: &[f64]) -> f64 {
    let sum: f64 = totals.iter().sum();
    let sq: f64 = totals.iter().map(|g| g * g).sum();
    if sq == 0.0 {
        return 1.0;
    }
    sum * sum / (totals.len() as f64 * sq)
}

/// `sum ln G_m`; `-inf` when some UE has received nothing.
pub fn sum_log_utility(totals: &[f64]) -> f64 {
    if totals.iter().any(|&g| g <= 0.0) {
        return f64::NEG_INFINITY;
    }
    totals.iter().map(|&g| math::ln(g)).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlotRecord {
    pub slot: u64,
    pub assignment: Assignment,
    pub feedback: Feedback,
    pub phase: Phase,
    pub satisficing_regret: f64,
    pub standard_regret: f64,
}

impl SlotRecord {
    /// Realized per-UE reward `rate * ack`.
    pub fn rewards<'a>(&'a self, rates: &'a [f64]) -> impl Iterator<Item = f64> + 'a {
        self.assignment
            .choices()
            .iter()
            .zip(self.feedback.bits())
            .map(move |(c, &ack)| if ack { rates[c.rate] } else { 0.0 })
    }
}

/// One run of one policy.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub policy: String,
    pub seed: u64,
    pub threshold: f64,
    pub rates: Vec<f64>,
    pub records: Vec<SlotRecord>,
}

impl RunTrace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn cumulative_satisficing_regret(&self) -> Vec<f64> {
        prefix_sums(self.records.iter().map(|r| r.satisficing_regret))
    }

    pub fn cumulative_standard_regret(&self) -> Vec<f64> {
        prefix_sums(self.records.iter().map(|r| r.standard_regret))
    }

    /// Final `R^S(T)`.
    pub fn total_satisficing_regret(&self) -> f64 {
        self.records.iter().map(|r| r.satisficing_regret).sum()
    }

    pub fn total_standard_regret(&self) -> f64 {
        self.records.iter().map(|r| r.standard_regret).sum()
    }

    /// Per-UE cumulative throughput `G_m` after every slot; calls `visit`
    /// with the slot record and the running totals.
    pub fn for_each_throughput<F: FnMut(&SlotRecord, &[f64])>(&self, mut visit: F) {
        let ues = self.records.first().map_or(0, |r| r.assignment.len());
        let mut totals = alloc::vec![0.0; ues];
        for rec in &self.records {
            for (g, r) in totals.iter_mut().zip(rec.rewards(&self.rates)) {
                *g += r;
            }
            visit(rec, &totals);
        }
    }

    /// `G_m(T)`.
    pub fn throughput_totals(&self) -> Vec<f64> {
        let mut out = Vec::new();
        self.for_each_throughput(|_, g| {
            out.clear();
            out.extend_from_slice(g);
        });
        out
    }
}

pub fn prefix_sums<I: IntoIterator<Item = f64>>(values: I) -> Vec<f64> {
    let mut acc = 0.0;
    values
        .into_iter()
        .map(|v| {
            acc += v;
            acc
        })
        .collect()
}
