//! Globally adaptive GK21 on finite intervals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::gauss::{gk21, Panel};
use crate::{Complex, Error, EvaluationReport, Result};

/// Maximum number of panels kept by one adaptive integration.
pub const MAX_PANELS: usize = 4000;

struct ByError(Panel);

impl PartialEq for ByError {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for ByError {}

impl PartialOrd for ByError {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ByError {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .error
            .total_cmp(&other.0.error)
            .then(other.0.a.total_cmp(&self.0.a))
    }
}

/// Integrates `f` over `[a, b]` until the error estimate drops below
/// `max(abs_tol, rel_tol·|I|)`, or to the rounding floor when that is larger
/// (the reported estimate then includes the floor). Bisection always splits the panel with the
/// largest error, so the evaluation order is deterministic.
pub fn adaptive(
    mut f: impl FnMut(f64) -> Result<Complex>,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<EvaluationReport> {
    if a == b {
        return Ok(EvaluationReport::exact(Complex::new(0.0, 0.0)));
    }
    let first = gk21(&mut f, a, b)?;
    let mut value = first.value;
    let mut error = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(ByError(first));
    let mut evaluations = 21;
    let mut roundoff = first.roundoff();
    while error > abs_tol.max(rel_tol * value.norm()).max(roundoff) {
        if heap.len() >= MAX_PANELS {
            return Err(Error::NotConverged {
                what: "adaptive quadrature",
                budget: MAX_PANELS,
                estimate: error,
            });
        }
        let ByError(worst) = heap.pop().expect("heap holds at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Panel cannot be split further in floating point.
            return Err(Error::NotConverged {
                what: "adaptive quadrature (interval underflow)",
                budget: heap.len(),
                estimate: error,
            });
        }
        let left = gk21(&mut f, worst.a, mid)?;
        let right = gk21(&mut f, mid, worst.b)?;
        evaluations += 42;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        roundoff += left.roundoff() + right.roundoff() - worst.roundoff();
        heap.push(ByError(left));
        heap.push(ByError(right));
        if heap.len() % 64 == 0 {
            // Resum to shed accumulated rounding in the running totals.
            value = heap.iter().map(|p| p.0.value).sum();
            error = heap.iter().map(|p| p.0.error).sum();
            roundoff = heap.iter().map(|p| p.0.roundoff()).sum();
        }
    }
    let panels = heap.len();
    let l1: f64 = heap.iter().map(|p| p.0.l1).sum();
    Ok(EvaluationReport::new(value, error.max(roundoff), true)
        .with_diagnostic("panels", panels as f64)
        .with_diagnostic("l1", l1)
        .with_diagnostic("evaluations", evaluations as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(f: impl Fn(f64) -> f64) -> impl FnMut(f64) -> Result<Complex> {
        move |t| Ok(Complex::new(f(t), 0.0))
    }

    #[test]
    fn smooth_integrals() {
        let r = adaptive(real(f64::exp), 0.0, 1.0, 1e-14, 1e-14).unwrap();
        assert!((r.value.re - (1f64.exp() - 1.0)).abs() < 1e-14);
        let r = adaptive(real(|t| (50.0 * t).cos()), 0.0, 3.0, 1e-13, 1e-13).unwrap();
        assert!((r.value.re - (150f64).sin() / 50.0).abs() < 1e-13);
    }

    #[test]
    fn endpoint_singularity_converges_by_bisection() {
        let r = adaptive(real(|t| t.powf(-0.5)), 0.0, 1.0, 1e-10, 1e-10).unwrap();
        assert!((r.value.re - 2.0).abs() < 1e-9);
        assert!(r.abs_error_estimate >= (r.value.re - 2.0).abs());
    }

    #[test]
    fn reversed_limits_change_sign() {
        let f = |t: f64| t * t;
        let fwd = adaptive(real(f), 0.0, 2.0, 1e-14, 1e-14).unwrap().value;
        let back = adaptive(real(f), 2.0, 0.0, 1e-14, 1e-14).unwrap().value;
        assert!((fwd + back).norm() < 1e-14);
    }

    #[test]
    fn budget_exhaustion() {
        let r = adaptive(real(|t| (1.0 / t).sin() / t), 1e-12, 1.0, 1e-15, 1e-15);
        assert!(matches!(r, Err(Error::NotConverged { .. })));
    }
}
