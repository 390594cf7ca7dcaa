//! Numerical integration: adaptive Gauss–Kronrod on finite ranges and
//! improper integrals with endpoint singularities or oscillatory tails.

mod adaptive;
mod gauss;
mod improper;

pub use adaptive::{adaptive, MAX_PANELS};
pub use gauss::{gk21, Panel};
pub(crate) use gauss::gauss_legendre_10;
pub use improper::{
    half_period_sums, integrate, integrate_improper, integrate_oscillatory_tail,
    integrate_semiinfinite_from_a, iterated_average, MARCH_BUDGET,
};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Tolerance, truncation and acceleration policy for improper integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Where the asymptotic (tail) treatment begins.
    pub origin_cutoff: f64,
    pub max_half_periods: usize,
    pub acceleration_depth: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            origin_cutoff: 1.0,
            max_half_periods: 2048,
            acceleration_depth: 12,
        }
    }
}

impl QuadratureConfig {
    pub const MAX_ACCELERATION_DEPTH: usize = 12;
    pub const MIN_HALF_PERIODS: usize = 8;

    pub fn validate(&self) -> Result<()> {
        let tol_ok = |t: f64| t > 0.0 && t < 1.0;
        if !tol_ok(self.abs_tol) || !tol_ok(self.rel_tol) {
            return Err(Error::InvalidConfig(format!(
                "tolerances must lie in (0, 1): abs {}, rel {}",
                self.abs_tol, self.rel_tol
            )));
        }
        if !(self.origin_cutoff > 0.0 && self.origin_cutoff.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "origin cutoff must be positive, got {}",
                self.origin_cutoff
            )));
        }
        if self.max_half_periods < Self::MIN_HALF_PERIODS {
            return Err(Error::InvalidConfig(format!(
                "max_half_periods must be at least {}, got {}",
                Self::MIN_HALF_PERIODS,
                self.max_half_periods
            )));
        }
        if self.acceleration_depth == 0 || self.acceleration_depth > Self::MAX_ACCELERATION_DEPTH {
            return Err(Error::InvalidConfig(format!(
                "acceleration_depth must be in 1..={}, got {}",
                Self::MAX_ACCELERATION_DEPTH,
                self.acceleration_depth
            )));
        }
        Ok(())
    }

    pub fn with_tolerances(self, abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..self
        }
    }

    pub fn with_origin_cutoff(self, origin_cutoff: f64) -> Self {
        Self {
            origin_cutoff,
            ..self
        }
    }

    /// Same policy with both tolerances divided by `factor`.
    pub fn tightened(self, factor: f64) -> Self {
        self.with_tolerances(
            (self.abs_tol / factor).max(1e-300),
            (self.rel_tol / factor).max(f64::EPSILON),
        )
    }
}
