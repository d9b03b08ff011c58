//! Post-hoc structural checks on SAT-CTS traces.
//!
//! Every check replays the trace's own feedback through fresh shared
//! counters, so it is independent of the policy's internal state.

use alloc::format;
use alloc::string::String;

use crate::error::Result;
use crate::metrics::{RunTrace, SlotRecord};
use crate::model::{ProblemDims, RateSet};
use crate::policy::Phase;
use crate::stats::SharedCounters;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub check: &'static str,
    pub slot: u64,
    pub detail: String,
}

impl core::fmt::Display for Violation {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(
            f,
            "{} violated at slot {}: {}",
            self.check, self.slot, self.detail
        )
    }
}

/// Calls `visit` for every slot with the counters as they stood before the
/// slot's feedback arrived.
pub fn replay<F>(trace: &RunTrace, dims: &ProblemDims, mut visit: F) -> Result<()>
where
    F: FnMut(&SlotRecord, &SharedCounters),
{
    let mut counters = SharedCounters::new(dims.arm_count());
    for rec in &trace.records {
        visit(rec, &counters);
        for (arm, &ack) in rec.assignment.arms(dims).zip(rec.feedback.bits()) {
            counters.update(arm, ack)?;
        }
    }
    Ok(())
}

/// Committed rounds are numbered `1, 2, ...` in order, each is contiguous,
/// and round `i` starting at `t` lasts `min(2^i, T - t + 1)` slots.
pub fn check_round_lengths(trace: &RunTrace, horizon: u64) -> core::result::Result<(), Violation> {
    let fail = |slot, detail| {
        Err(Violation {
            check: "round lengths",
            slot,
            detail,
        })
    };
    let recs = &trace.records;
    let mut expected_round = 1u32;
    let mut k = 0;
    while k < recs.len() {
        let Some(round) = recs[k].phase.round() else {
            k += 1;
            continue;
        };
        let start = recs[k].slot;
        if round != expected_round {
            return fail(
                start,
                format!("round {round} where {expected_round} was due"),
            );
        }
        let mut len = 0u64;
        while k < recs.len() && recs[k].phase == Phase::Committed(round) {
            len += 1;
            k += 1;
        }
        let full = 1u64.checked_shl(round).unwrap_or(u64::MAX);
        let want = full.min(horizon - start + 1);
        if len != want {
            return fail(
                start,
                format!("round {round} lasted {len}, expected {want}"),
            );
        }
        expected_round += 1;
    }
    Ok(())
}

/// The first `B*K*R` slots are initialization and touch every arm once.
pub fn check_init_cover(
    trace: &RunTrace,
    dims: &ProblemDims,
) -> core::result::Result<(), Violation> {
    let t0 = dims.init_rounds();
    let mut seen = alloc::vec![0u32; dims.arm_count()];
    for (k, rec) in trace.records.iter().enumerate() {
        let is_init = rec.phase == Phase::Init;
        if is_init != (k < t0) {
            return Err(Violation {
                check: "init cover",
                slot: rec.slot,
                detail: format!(
                    "phase {} at position {k} of a {t0}-slot schedule",
                    rec.phase.label()
                ),
            });
        }
        if is_init {
            for arm in rec.assignment.arms(dims) {
                seen[arm] += 1;
            }
        }
    }
    if trace.records.len() >= t0 {
        if let Some(arm) = seen.iter().position(|&c| c != 1) {
            return Err(Violation {
                check: "init cover",
                slot: t0 as u64,
                detail: format!("arm {arm} played {} times", seen[arm]),
            });
        }
    }
    Ok(())
}

/// Every LCB-gated slot clears the threshold when its LCB table is rebuilt
/// from the replayed counters.
pub fn check_lcb_gate(
    trace: &RunTrace,
    dims: &ProblemDims,
    rates: &RateSet,
) -> Result<core::result::Result<(), Violation>> {
    let mut outcome = Ok(());
    let mut err = None;
    replay(trace, dims, |rec, counters| {
        if rec.phase != Phase::Lcb || outcome.is_err() || err.is_some() {
            return;
        }
        match counters.lcb_and_mean(dims, rates, rec.slot) {
            Ok((lcb, _)) => {
                let avg = rec.assignment.average(dims, lcb.as_slice());
                if avg < trace.threshold {
                    outcome = Err(Violation {
                        check: "LCB gate",
                        slot: rec.slot,
                        detail: format!("average LCB {avg} below {}", trace.threshold),
                    });
                }
            }
            Err(e) => err = Some(e),
        }
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(outcome),
    }
}

/// `s_i <= n_i` for every arm after every slot.
pub fn check_counts(
    trace: &RunTrace,
    dims: &ProblemDims,
) -> Result<core::result::Result<(), Violation>> {
    let mut outcome = Ok(());
    replay(trace, dims, |rec, counters| {
        if outcome.is_ok() && !counters.is_consistent() {
            outcome = Err(Violation {
                check: "success count",
                slot: rec.slot,
                detail: "successes exceed pulls".into(),
            });
        }
    })?;
    Ok(outcome)
}

/// All four checks, first violation wins.
pub fn audit_sat_cts(
    trace: &RunTrace,
    dims: &ProblemDims,
    rates: &RateSet,
) -> Result<core::result::Result<(), Violation>> {
    if let Err(v) = check_init_cover(trace, dims) {
        return Ok(Err(v));
    }
    if let Err(v) = check_round_lengths(trace, dims.horizon()) {
        return Ok(Err(v));
    }
    if let Err(v) = check_lcb_gate(trace, dims, rates)? {
        return Ok(Err(v));
    }
    check_counts(trace, dims)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Assignment, Choice, Feedback};
    use alloc::vec;
    use alloc::vec::Vec;

    fn trace_with(phases: &[Phase]) -> RunTrace {
        let dims = ProblemDims::new(1, 1, 1, 1, phases.len() as u64).unwrap();
        let a = Assignment::new(vec![Choice { beam: 0, rate: 0 }], &dims).unwrap();
        RunTrace {
            policy: "t".into(),
            seed: 0,
            threshold: 0.0,
            rates: vec![1.0],
            records: phases
                .iter()
                .enumerate()
                .map(|(k, &phase)| SlotRecord {
                    slot: k as u64 + 1,
                    assignment: a.clone(),
                    feedback: Feedback(vec![k % 2 == 0]),
                    phase,
                    satisficing_regret: 0.0,
                    standard_regret: 0.0,
                })
                .collect(),
        }
    }

    #[test]
    fn doubling_rounds_accepted() {
        let mut p = vec![Phase::Init, Phase::Mean];
        p.extend([Phase::Committed(1); 2]);
        p.push(Phase::Lcb);
        p.extend([Phase::Committed(2); 4]);
        p.extend([Phase::Committed(3); 3]);
        let t = trace_with(&p);
        assert_eq!(check_round_lengths(&t, p.len() as u64), Ok(()));
    }

    #[test]
    fn short_round_rejected() {
        let mut p: Vec<Phase> = vec![Phase::Init];
        p.extend([Phase::Committed(1); 1]);
        p.push(Phase::Mean);
        let t = trace_with(&p);
        assert!(check_round_lengths(&t, p.len() as u64).is_err());
        let skipped = trace_with(&[Phase::Init, Phase::Committed(2), Phase::Committed(2)]);
        assert!(check_round_lengths(&skipped, 3).is_err());
    }

    #[test]
    fn init_cover_on_single_arm() {
        let dims = ProblemDims::new(1, 1, 1, 1, 3).unwrap();
        let t = trace_with(&[Phase::Init, Phase::Mean, Phase::Lcb]);
        assert_eq!(check_init_cover(&t, &dims), Ok(()));
        let bad = trace_with(&[Phase::Init, Phase::Init, Phase::Lcb]);
        assert!(check_init_cover(&bad, &dims).is_err());
    }
}
