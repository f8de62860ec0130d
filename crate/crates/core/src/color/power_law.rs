//! Truncated power-law sampling by inverse transform.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Density `f(r) = C r^(-gamma)` on `[r_min, r_max]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PowerLawParams {
    pub r_min: f64,
    pub r_max: f64,
    pub gamma: f64,
}

impl Default for PowerLawParams {
    fn default() -> Self {
        Self {
            r_min: 10.0,
            r_max: 512.0,
            gamma: 3.0,
        }
    }
}

impl PowerLawParams {
    pub fn new(r_min: f64, r_max: f64, gamma: f64) -> Result<Self> {
        let p = Self {
            r_min,
            r_max,
            gamma,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r_min > 0.0 && self.r_max > self.r_min) {
            return Err(Error::InvalidParameter(format!(
                "power law needs 0 < r_min < r_max, got [{}, {}]",
                self.r_min, self.r_max
            )));
        }
        if !(self.gamma > 1.0) || !self.gamma.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "power law exponent must exceed 1, got {}",
                self.gamma
            )));
        }
        Ok(())
    }

    /// Analytic CDF.
    pub fn cdf(&self, r: f64) -> f64 {
        if r <= self.r_min {
            return 0.0;
        }
        if r >= self.r_max {
            return 1.0;
        }
        let e = 1.0 - self.gamma;
        (self.r_min.powf(e) - r.powf(e)) / (self.r_min.powf(e) - self.r_max.powf(e))
    }
}

/// Inverse CDF at `u ∈ [0, 1]`.
pub fn sample_power_law(p: &PowerLawParams, u: f64) -> Result<f64> {
    p.validate()?;
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::InvalidParameter(format!("u = {u} outside [0, 1]")));
    }
    let e = 1.0 - p.gamma;
    let lo = p.r_min.powf(e);
    let hi = p.r_max.powf(e);
    let r = (lo - u * (lo - hi)).powf(1.0 / e);
    Ok(r.clamp(p.r_min, p.r_max))
}

pub fn sample_power_law_rng<R: Rng + ?Sized>(p: &PowerLawParams, rng: &mut R) -> Result<f64> {
    sample_power_law(p, rng.random::<f64>())
}

/// Inverse CDF of the density `∝ x^exponent` on `[0, max]` (`exponent > -1`).
pub fn sample_rising_power(max: f64, exponent: f64, u: f64) -> f64 {
    debug_assert!(exponent > -1.0);
    max * u.powf(1.0 / (exponent + 1.0))
}
