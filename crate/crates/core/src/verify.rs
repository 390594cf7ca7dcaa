//! Quick invariant suite behind `weber verify`. Each check reports the measured
//! defect against a fixed tolerance; sample points are drawn from a seeded RNG.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::closedform::{f_nu_closed, f_nu_quadrature};
use crate::kernels::{derivative_identity_check, weber_kernel, BesselKind, IdentitySign, KernelParams};
use crate::mellin::{mellin_inverse, parseval_check, ContourSpec, MellinRepresentation};
use crate::quadrature::QuadratureConfig;
use crate::solver::{
    forward_direct, inverse_solve, inverse_solve_reduced, working_contour, ContourTransform, TestFunctionFamily,
};
use crate::specfun::gamma;
use crate::{Complex, Result};

/// Outcome of one invariant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    /// Largest defect observed; `NaN` when the check could not be evaluated.
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: Option<String>,
}

impl CheckOutcome {
    fn from_result(name: &str, tolerance: f64, measured: Result<f64>) -> Self {
        match measured {
            Ok(m) => Self {
                name: name.into(),
                measured: m,
                tolerance,
                passed: m <= tolerance,
                detail: None,
            },
            Err(e) => Self {
                name: name.into(),
                measured: f64::NAN,
                tolerance,
                passed: false,
                detail: Some(e.to_string()),
            },
        }
    }
}

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn max_of(values: impl IntoIterator<Item = Result<f64>>) -> Result<f64> {
    values.into_iter().try_fold(0.0_f64, |m, v| Ok(m.max(v?)))
}

fn wronskian(p: KernelParams) -> Result<f64> {
    max_of([0.1, 1.0, 10.0, 100.0].map(|l| Ok((PI * p.a * l * weber_kernel(p, p.a, l)? + 2.0).abs())))
}

fn derivative_identities(rng: &mut ChaCha8Rng) -> Result<f64> {
    let points: Vec<(f64, f64)> = (0..6).map(|_| (rng.gen_range(-0.95..0.45), rng.gen_range(0.5..20.0))).collect();
    let mut worst = 0.0_f64;
    for (nu, x) in points {
        for which in [BesselKind::J, BesselKind::Y] {
            for sign in [IdentitySign::Plus, IdentitySign::Minus] {
                worst = worst.max(derivative_identity_check(nu, x, which, sign)?);
            }
        }
    }
    Ok(worst)
}

fn closed_form_vs_oracle(p: KernelParams, rng: &mut ChaCha8Rng, cfg: &QuadratureConfig) -> Result<f64> {
    let points: Vec<(f64, Complex)> = (0..3)
        .map(|_| (p.a * rng.gen_range(1.5..5.0), c(rng.gen_range(-0.8..-0.2), rng.gen_range(-5.0..5.0))))
        .collect();
    max_of(points.into_iter().map(|(x, s)| {
        let closed = f_nu_closed(p, x, s)?.total;
        let oracle = f_nu_quadrature(p, x, s, cfg)?.value;
        Ok((closed - oracle).norm() / closed.norm().max(1e-2))
    }))
}

fn conjugate_symmetry(p: KernelParams, rng: &mut ChaCha8Rng) -> Result<f64> {
    let points: Vec<(f64, Complex)> = (0..20)
        .map(|_| (p.a * rng.gen_range(1.05..10.0), c(rng.gen_range(-0.95..-0.05), rng.gen_range(-20.0..20.0))))
        .collect();
    max_of(points.into_iter().map(|(x, s)| {
        let f = f_nu_closed(p, x, s)?.total;
        let g = f_nu_closed(p, x, s.conj())?.total;
        Ok((f.conj() - g).norm() / f.norm())
    }))
}

fn gamma_inverse() -> Result<f64> {
    let rep = MellinRepresentation::new(gamma, ContourSpec::new(0.5, 40.0, 16)?, 0.0, 0.0)?;
    max_of([0.5, 1.0, 2.0].map(|x| Ok((mellin_inverse(&rep, x)?.value - (-x).exp()).norm())))
}

fn parseval(cfg: &QuadratureConfig) -> Result<f64> {
    let f = |x: f64| Ok(c((-x).exp(), 0.0));
    let g = |x: f64| Ok(c(1.0 / (1.0 + x).powi(2), 0.0));
    Ok(parseval_check(f, g, 0.5, cfg)?.value.re)
}

fn forward_methods(p: KernelParams, cfg: &QuadratureConfig) -> Result<f64> {
    let fam = TestFunctionFamily::new(2, 1.0)?;
    let x = 2.0 * p.a;
    let contour = ContourTransform::new(&fam.representation(working_contour(p.nu))?, p)?.eval(x)?.value;
    let direct = forward_direct(|l| Ok(c(fam.phi(l), 0.0)), p, x, cfg)?.value;
    Ok((contour - direct).norm() / contour.norm())
}

/// Round trip and cross-form at `λ = 1`, sharing one contour transform.
fn inverse_pair(p: KernelParams, cfg: &QuadratureConfig) -> Result<(f64, f64)> {
    let fam = TestFunctionFamily::new(2, 1.0)?;
    let tr = ContourTransform::new(&fam.representation(working_contour(p.nu))?, p)?;
    let last = inverse_solve(|t| tr.eval(t).map(|r| r.value), p, 1.0, cfg)?.value;
    let first = inverse_solve_reduced(|t| tr.eval_reduced(t).map(|r| t * r.value), p, 1.0, cfg)?.value;
    let exact = fam.phi(1.0);
    Ok(((last - exact).norm() / exact, (first - last).norm() / last.norm()))
}

/// Runs every check; `p` must lie in the solver range.
pub fn run_invariants(p: KernelParams, seed: u64, cfg: &QuadratureConfig) -> Vec<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![
        CheckOutcome::from_result("wronskian", 1e-10, wronskian(p)),
        CheckOutcome::from_result("derivative_identities", 1e-7, derivative_identities(&mut rng)),
        CheckOutcome::from_result("closed_form_vs_oracle", 1e-6, closed_form_vs_oracle(p, &mut rng, cfg)),
        CheckOutcome::from_result("conjugate_symmetry", 1e-12, conjugate_symmetry(p, &mut rng)),
        CheckOutcome::from_result("mellin_inverse_gamma", 1e-8, gamma_inverse()),
        CheckOutcome::from_result("parseval", 1e-7, parseval(cfg)),
        CheckOutcome::from_result("forward_methods", 1e-5, forward_methods(p, cfg)),
    ];
    match inverse_pair(p, cfg) {
        Ok((round, cross)) => {
            out.push(CheckOutcome::from_result("round_trip", 1e-4, Ok(round)));
            out.push(CheckOutcome::from_result("cross_form", 1e-6, Ok(cross)));
        }
        Err(e) => {
            out.push(CheckOutcome::from_result("round_trip", 1e-4, Err(e.clone())));
            out.push(CheckOutcome::from_result("cross_form", 1e-6, Err(e)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outcome_flags() {
        let ok = CheckOutcome::from_result("a", 1.0, Ok(0.5));
        assert!(ok.passed && ok.detail.is_none());
        let bad = CheckOutcome::from_result("b", 1.0, Err(crate::Error::NonFinite(0.0)));
        assert!(!bad.passed && bad.measured.is_nan() && bad.detail.is_some());
        assert!(!CheckOutcome::from_result("c", 1.0, Ok(f64::NAN)).passed);
    }
}
