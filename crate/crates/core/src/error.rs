use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid dimensions: {0}")]
    InvalidDims(String),

    #[error("invalid rate set: {0}")]
    InvalidRates(String),

    #[error("assignment infeasible: {beams} beams cannot serve {ues} UEs")]
    Infeasible { ues: usize, beams: usize },

    #[error("base arm index {index} out of range (arm count {count})")]
    ArmOutOfRange { index: usize, count: usize },

    #[error("invalid assignment: {0}")]
    InvalidAssignment(String),

    #[error("undefined concentration radius: pull count is zero")]
    UndefinedRadius,

    #[error("invalid slot {slot}: {reason}")]
    InvalidSlot { slot: u64, reason: &'static str },

    #[error("feedback length {got} does not match {expected} UEs")]
    FeedbackLength { expected: usize, got: usize },

    #[error("score table has {got} entries, expected {expected}")]
    ScoreShape { expected: usize, got: usize },

    #[error("score for arm {0} is not a number or negative infinity")]
    BadScore(usize),

    #[error("enumeration guard exceeded: {0}")]
    EnumerationGuard(String),

    #[error("exact-only quantity unavailable: {0}")]
    ExactOnly(&'static str),

    #[error("parameter {name} = {value} outside {interval}")]
    OutOfInterval {
        name: &'static str,
        value: f64,
        interval: String,
    },

    #[error("bound mode mismatch: {0}")]
    ModeMismatch(&'static str),

    #[error("non-finite constant: {0}")]
    NonFinite(&'static str),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),
}
