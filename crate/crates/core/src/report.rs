use serde::{Deserialize, Serialize};

use crate::Complex;

/// Value, error estimate and convergence diagnostics of a numerical evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub value: Complex,
    pub abs_error_estimate: f64,
    pub converged: bool,
    pub diagnostics: Vec<(String, f64)>,
}

impl EvaluationReport {
    pub fn new(value: Complex, abs_error_estimate: f64, converged: bool) -> Self {
        debug_assert!(abs_error_estimate >= 0.0 || abs_error_estimate.is_nan());
        Self {
            value,
            abs_error_estimate: abs_error_estimate.max(0.0),
            converged,
            diagnostics: Vec::new(),
        }
    }

    /// An exactly known value (zero integrand, empty range).
    pub fn exact(value: Complex) -> Self {
        Self::new(value, 0.0, true)
    }

    pub fn with_diagnostic(mut self, name: impl Into<String>, value: f64) -> Self {
        self.diagnostics.push((name.into(), value));
        self
    }

    pub fn diagnostic(&self, name: &str) -> Option<f64> {
        self.diagnostics
            .iter()
            .find(|(n, _)| n == name)
            .map(|&(_, v)| v)
    }

    /// Relative error estimate, falling back to the absolute one for tiny values.
    pub fn rel_error_estimate(&self) -> f64 {
        let mag = self.value.norm();
        if mag > 0.0 {
            self.abs_error_estimate / mag
        } else {
            self.abs_error_estimate
        }
    }

    /// Scales value and error estimate by a constant factor.
    pub fn scaled(mut self, factor: Complex) -> Self {
        self.value *= factor;
        self.abs_error_estimate *= factor.norm();
        self
    }
}
