//! Satisficing combinatorial semi-bandits for multi-user mmWave beam and
//! rate adaptation.
//!
//! This crate is `no_std` (it needs `alloc`). It holds everything that is
//! pure computation: the arm/assignment model, the assignment oracle,
//! the SAT-CTS, CTS and CUCB policies, the synthetic multipath channel
//! environment, regret and fairness metrics, and the regret-bound
//! calculators. File formats, configuration and the campaign runner live
//! in the `satcts` companion crate.
//!
//! Slots are 1-based throughout: a run of horizon `T` visits
//! `t = 1, ..., T`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod assignment;
pub mod audit;
pub mod environment;
mod error;
pub mod index;
pub mod math;
pub mod metrics;
pub mod model;
pub mod policy;
pub mod sim;
pub mod stats;
pub mod stream;
pub mod theory;

pub use assignment::{best_assignment, brute_force_assignment, reduce_rates, ReducedCostMatrix};
pub use error::{Error, Result};
pub use metrics::{RunTrace, SlotRecord};
pub use model::{Assignment, BaseArmId, Choice, Feedback, ProblemDims, RateSet};
pub use policy::{Cts, Cucb, Phase, Policy, SatCts, SatCtsConfig, Selection};
pub use stats::{BetaPosterior, ScoreTable, SharedCounters};
