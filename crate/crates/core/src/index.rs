//! Confidence radius and the LCB / MEAN / UCB throughput indices.
//!
//! Logarithms are natural.

use crate::error::{Error, Result};
use crate::math;

/// `c(t, n) = sqrt(3 ln t / (2 n))`.
pub fn concentration_radius(t: u64, n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::UndefinedRadius);
    }
    if t == 0 {
        return Err(Error::InvalidSlot {
            slot: 0,
            reason: "slots start at 1",
        });
    }
    Ok(radius_from_log(math::ln(t as f64), n))
}

/// `sqrt(3 ln_t / (2 n))` for a precomputed `ln_t`; `n` must be positive.
#[inline]
pub fn radius_from_log(ln_t: f64, n: u64) -> f64 {
    math::sqrt(3.0 * ln_t / (2.0 * n as f64))
}

/// `rate * max(0, psi_hat - radius)`.
#[inline]
pub fn lcb_index(rate: f64, psi_hat: f64, radius: f64) -> f64 {
    rate * (psi_hat - radius).max(0.0)
}

#[inline]
pub fn mean_index(rate: f64, psi_hat: f64) -> f64 {
    rate * psi_hat
}

/// `rate * (psi_hat + radius)`. Not clamped to `rate`; the caller maps
/// unpulled arms to `+inf` itself.
#[inline]
pub fn ucb_index(rate: f64, psi_hat: f64, radius: f64) -> f64 {
    rate * (psi_hat + radius)
}
