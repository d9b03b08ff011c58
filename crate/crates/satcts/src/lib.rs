//! Scenario configuration, channel dumps, seeded campaigns, plot data and
//! theory reports on top of `satcts-core`.

pub mod campaign;
pub mod config;
pub mod dump;
mod error;
pub mod plotdata;
pub mod report;

pub use campaign::{run_campaign, Campaign};
pub use config::{PolicyKind, ScenarioConfig};
pub use error::{Error, Result};
