//! The combinatorial oracle: maximize the summed per-UE score over
//! assignments with pairwise-distinct beams.
//!
//! Rates never couple across UEs, so each `(ue, beam)` cell first keeps its
//! best rate ([`reduce_rates`]); the remaining `M x BK` matrix is solved with
//! a rectangular shortest-augmenting-path Hungarian method in
//! `O(M^2 * BK)`.
//!
//! Tie rules, so that runs are reproducible:
//! * during reduction, equal scores resolve to the higher rate index;
//! * during matching, columns are scanned in ascending flat beam index and
//!   the first minimum wins.
//!
//! `+inf` scores are replaced by `2 * M * S + 1`, where `S` is the largest
//! finite magnitude in the table (at least 1). Any assignment with more
//! `+inf` entries then has a strictly larger total.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::{Assignment, Choice, ProblemDims};
use crate::stats::ScoreTable;

/// Guard on brute-force enumeration: at most this many UEs...
pub const BRUTE_FORCE_MAX_UES: usize = 6;
/// ...and at most this many beams.
pub const BRUTE_FORCE_MAX_BEAMS: usize = 8;

/// Best rate per `(ue, beam)` cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedCostMatrix {
    ues: usize,
    beams: usize,
    values: Vec<f64>,
    rate_choice: Vec<usize>,
}

impl ReducedCostMatrix {
    #[inline]
    pub fn value(&self, ue: usize, beam: usize) -> f64 {
        self.values[ue * self.beams + beam]
    }

    #[inline]
    pub fn rate_choice(&self, ue: usize, beam: usize) -> usize {
        self.rate_choice[ue * self.beams + beam]
    }

    pub fn ues(&self) -> usize {
        self.ues
    }

    pub fn beams(&self) -> usize {
        self.beams
    }
}

pub fn reduce_rates(scores: &ScoreTable, dims: &ProblemDims) -> Result<ReducedCostMatrix> {
    scores.validate(dims)?;
    let s = scores.as_slice();
    let (ues, beams, rates) = (dims.ues(), dims.beam_count(), dims.rate_levels());
    let mut values = Vec::with_capacity(ues * beams);
    let mut rate_choice = Vec::with_capacity(ues * beams);
    for cell in s.chunks_exact(rates) {
        let mut best = 0;
        for r in 1..rates {
            if cell[r] >= cell[best] {
                best = r;
            }
        }
        values.push(cell[best]);
        rate_choice.push(best);
    }
    Ok(ReducedCostMatrix {
        ues,
        beams,
        values,
        rate_choice,
    })
}

/// Value that stands in for `+inf` in a table of `ues` rows.
fn infinity_stand_in(values: &[f64], ues: usize) -> f64 {
    let scale = values
        .iter()
        .filter(|v| v.is_finite())
        .fold(1.0f64, |acc, v| acc.max(v.abs()));
    2.0 * ues as f64 * scale + 1.0
}

fn finite_values(values: &[f64], ues: usize) -> Vec<f64> {
    let big = infinity_stand_in(values, ues);
    values
        .iter()
        .map(|&v| if v == f64::INFINITY { big } else { v })
        .collect()
}

/// Exact maximizer of the summed score over all feasible assignments.
pub fn best_assignment(scores: &ScoreTable, dims: &ProblemDims) -> Result<Assignment> {
    let reduced = reduce_rates(scores, dims)?;
    let values = finite_values(&reduced.values, dims.ues());
    let cols = max_weight_matching(&values, reduced.ues, reduced.beams)?;
    let choices = cols
        .iter()
        .enumerate()
        .map(|(ue, &beam)| Choice {
            beam,
            rate: reduced.rate_choice(ue, beam),
        })
        .collect();
    Assignment::new(choices, dims)
}

/// Rectangular Hungarian method on a row-major `rows x cols` weight matrix
/// (`rows <= cols`). Returns the column matched to each row.
pub fn max_weight_matching(weights: &[f64], rows: usize, cols: usize) -> Result<Vec<usize>> {
    if rows > cols {
        return Err(Error::Infeasible {
            ues: rows,
            beams: cols,
        });
    }
    debug_assert_eq!(weights.len(), rows * cols);
    // Minimize negated weights. Rows and columns are 1-based below; index 0
    // is the virtual source of each augmenting search.
    let cost = |i: usize, j: usize| -weights[(i - 1) * cols + (j - 1)];
    let mut u = vec![0.0f64; rows + 1];
    let mut v = vec![0.0f64; cols + 1];
    let mut owner = vec![0usize; cols + 1];
    let mut way = vec![0usize; cols + 1];
    let mut minv = vec![0.0f64; cols + 1];
    let mut used = vec![false; cols + 1];

    for i in 1..=rows {
        owner[0] = i;
        let mut j0 = 0usize;
        minv.fill(f64::INFINITY);
        used.fill(false);
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=cols {
                if used[j] {
                    continue;
                }
                let cur = cost(i0, j) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            if j1 == 0 {
                return Err(Error::InvalidAssignment(format!(
                    "no augmenting path for row {i} (non-finite weights?)"
                )));
            }
            for j in 0..=cols {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut matched = vec![usize::MAX; rows];
    for j in 1..=cols {
        if owner[j] != 0 {
            matched[owner[j] - 1] = j - 1;
        }
    }
    Ok(matched)
}

/// Calls `visit` once for every feasible assignment (every injective beam
/// map times every rate vector), in lexicographic `(beam, rate)` order per
/// UE.
pub fn for_each_assignment<F: FnMut(&[Choice])>(dims: &ProblemDims, mut visit: F) {
    fn recurse<F: FnMut(&[Choice])>(
        dims: &ProblemDims,
        used: &mut [bool],
        prefix: &mut Vec<Choice>,
        visit: &mut F,
    ) {
        if prefix.len() == dims.ues() {
            visit(prefix);
            return;
        }
        for beam in 0..dims.beam_count() {
            if used[beam] {
                continue;
            }
            used[beam] = true;
            for rate in 0..dims.rate_levels() {
                prefix.push(Choice { beam, rate });
                recurse(dims, used, prefix, visit);
                prefix.pop();
            }
            used[beam] = false;
        }
    }
    let mut used = vec![false; dims.beam_count()];
    let mut prefix = Vec::with_capacity(dims.ues());
    recurse(dims, &mut used, &mut prefix, &mut visit);
}

/// Number of feasible assignments, saturating at `u64::MAX`.
pub fn assignment_count(dims: &ProblemDims) -> u64 {
    let mut count = 1u64;
    for m in 0..dims.ues() {
        count = count
            .saturating_mul((dims.beam_count() - m) as u64)
            .saturating_mul(dims.rate_levels() as u64);
    }
    count
}

/// Exhaustive reference oracle. Limited to `M <= 6` and `B*K <= 8`.
pub fn brute_force_assignment(scores: &ScoreTable, dims: &ProblemDims) -> Result<Assignment> {
    if dims.ues() > BRUTE_FORCE_MAX_UES || dims.beam_count() > BRUTE_FORCE_MAX_BEAMS {
        return Err(Error::EnumerationGuard(format!(
            "brute force needs M <= {BRUTE_FORCE_MAX_UES} and B*K <= {BRUTE_FORCE_MAX_BEAMS}, got M = {}, B*K = {}",
            dims.ues(),
            dims.beam_count()
        )));
    }
    scores.validate(dims)?;
    let values = finite_values(scores.as_slice(), dims.ues());
    let mut best: Option<(f64, Vec<Choice>)> = None;
    for_each_assignment(dims, |choices| {
        let total: f64 = choices
            .iter()
            .enumerate()
            .map(|(ue, c)| values[dims.arm_index(ue, c.beam, c.rate)])
            .sum();
        if best.as_ref().is_none_or(|(v, _)| total > *v) {
            best = Some((total, choices.to_vec()));
        }
    });
    let (_, choices) = best.expect("at least one feasible assignment");
    Assignment::new(choices, dims)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn dims(m: usize, b: usize, k: usize, r: usize) -> ProblemDims {
        ProblemDims::new(m, b, k, r, 10_000).unwrap()
    }

    #[test]
    fn reduction_prefers_higher_rate_on_ties() {
        let d = dims(1, 1, 1, 3);
        let red = reduce_rates(&ScoreTable::from_vec(vec![3.0, 5.0, 5.0]), &d).unwrap();
        assert_eq!(red.value(0, 0), 5.0);
        assert_eq!(red.rate_choice(0, 0), 2);

        let d = dims(2, 1, 2, 1);
        let raw = vec![0.3, 0.1, 0.7, 0.2];
        let red = reduce_rates(&ScoreTable::from_vec(raw.clone()), &d).unwrap();
        assert_eq!(red.values, raw);

        let d = dims(2, 1, 3, 3);
        let red = reduce_rates(&ScoreTable::from_vec(vec![4.0; d.arm_count()]), &d).unwrap();
        assert!(red.values.iter().all(|&v| v == 4.0));
        assert!(red.rate_choice.iter().all(|&r| r == 2));
    }

    #[test]
    fn two_by_two_example() {
        let d = dims(2, 1, 2, 1);
        let scores = ScoreTable::from_vec(vec![3.0, 1.0, 2.0, 4.0]);
        let a = best_assignment(&scores, &d).unwrap();
        assert_eq!(
            a.choices(),
            &[Choice { beam: 0, rate: 0 }, Choice { beam: 1, rate: 0 }]
        );
        assert_eq!(a.total(&d, scores.as_slice()), 7.0);
        let b = brute_force_assignment(&scores, &d).unwrap();
        assert_eq!(b.total(&d, scores.as_slice()), 7.0);
    }

    #[test]
    fn single_ue_takes_global_argmax() {
        let d = dims(1, 2, 3, 2);
        let mut s = vec![0.0; d.arm_count()];
        s[d.arm_index(0, 4, 1)] = 9.0;
        s[d.arm_index(0, 2, 0)] = 8.0;
        let a = best_assignment(&ScoreTable::from_vec(s), &d).unwrap();
        assert_eq!(a.choices(), &[Choice { beam: 4, rate: 1 }]);
    }

    #[test]
    fn equal_scores_are_deterministic() {
        let d = dims(3, 1, 5, 2);
        let scores = ScoreTable::from_vec(vec![1.5; d.arm_count()]);
        let a = best_assignment(&scores, &d).unwrap();
        assert_eq!(a.total(&d, scores.as_slice()), 4.5);
        assert_eq!(a, best_assignment(&scores, &d).unwrap());
    }

    #[test]
    fn infinite_scores_dominate() {
        let d = dims(2, 1, 3, 1);
        // UE0's beam 2 is unexplored; large finite scores elsewhere.
        let s = vec![50.0, 40.0, f64::INFINITY, 45.0, 50.0, 1.0];
        let a = best_assignment(&ScoreTable::from_vec(s), &d).unwrap();
        assert_eq!(a.choices()[0].beam, 2);
        assert_eq!(a.choices()[1].beam, 1);
    }

    #[test]
    fn infeasible_and_guard() {
        assert!(max_weight_matching(&[1.0, 2.0], 2, 1).is_err());
        let d = dims(2, 1, 9, 1);
        let s = ScoreTable::from_vec(vec![0.0; d.arm_count()]);
        assert!(matches!(
            brute_force_assignment(&s, &d),
            Err(Error::EnumerationGuard(_))
        ));
    }

    #[test]
    fn enumeration_count_matches() {
        let d = dims(2, 1, 4, 3);
        let mut n = 0u64;
        for_each_assignment(&d, |_| n += 1);
        assert_eq!(n, 4 * 3 * 3 * 3);
        assert_eq!(assignment_count(&d), n);
    }
}
