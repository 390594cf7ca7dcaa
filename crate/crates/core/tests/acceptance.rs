//! Acceptance run: one line per criterion, non-zero exit if any fails.
//! Built with `harness = false`, so `cargo test` runs `main` directly.

mod common;

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use common::bump;
use weber_core::closedform::{
    blowup_exponent, calibrate_f_nu_bound, calibrate_hyp_estimate, default_probes, f_nu_bound, f_nu_closed,
    f_nu_quadrature, hyp_estimate_sides, HypEstimate,
};
use weber_core::kernels::{derivative_identity_check, weber_kernel, BesselKind, IdentitySign, KernelParams};
use weber_core::mellin::{class_norm, mellin_inverse, parseval_check, ContourSpec, MellinRepresentation};
use weber_core::quadrature::{half_period_sums, integrate_oscillatory_tail, QuadratureConfig};
use weber_core::solver::{
    expansion_titchmarsh, expansion_weber_orr, inverse_solve_reduced, log_grid, round_trip, working_contour,
    ContourTransform, TestFunctionFamily, WeberOrrVariant,
};
use weber_core::specfun::{gamma, real_pow};
use weber_core::{Complex, Result};

const ORDERS: [f64; 3] = [-0.95, -0.75, -0.55];

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn kp(nu: f64, a: f64) -> KernelParams {
    KernelParams::new(nu, a).unwrap()
}

fn family() -> TestFunctionFamily {
    TestFunctionFamily::new(2, 1.0).unwrap()
}

/// Outcome of one criterion.
struct Verdict {
    passed: bool,
    summary: String,
}

impl Verdict {
    fn within(measured: f64, tolerance: f64, what: &str) -> Self {
        Self {
            passed: measured <= tolerance,
            summary: format!("{what} {measured:.3e} (tolerance {tolerance:.0e})"),
        }
    }

    fn and(self, other: Verdict) -> Self {
        Self {
            passed: self.passed && other.passed,
            summary: format!("{}; {}", self.summary, other.summary),
        }
    }
}

fn closed_form_conformance() -> Result<Verdict> {
    let cfg = QuadratureConfig::default();
    let (mut worst_rel, mut worst_abs, mut small) = (0.0_f64, 0.0_f64, 0);
    let mut failures = Vec::new();
    for nu in ORDERS {
        for a in [0.5, 1.0, 2.0] {
            let p = kp(nu, a);
            for ratio in [1.5, 2.0, 5.0] {
                for mu in [-0.8, -0.5, -0.2] {
                    for t in [0.0, 1.0, -1.0, 5.0, -5.0] {
                        let (x, s) = (ratio * a, c(mu, t));
                        let closed = f_nu_closed(p, x, s)?.total;
                        let oracle = f_nu_quadrature(p, x, s, &cfg)?.value;
                        let diff = (closed - oracle).norm();
                        let ok = if closed.norm() < 1e-2 {
                            small += 1;
                            worst_abs = worst_abs.max(diff);
                            diff <= 1e-8
                        } else {
                            worst_rel = worst_rel.max(diff / closed.norm());
                            diff <= 1e-6 * closed.norm()
                        };
                        if !ok {
                            failures.push(format!("nu={nu} a={a} x={x} s={s}"));
                        }
                    }
                }
            }
        }
    }
    Ok(Verdict {
        passed: failures.is_empty(),
        summary: format!(
            "405 points, worst relative {worst_rel:.3e} (tolerance 1e-6), worst absolute {worst_abs:.3e} \
             over {small} small values (tolerance 1e-8){}",
            if failures.is_empty() { String::new() } else { format!(", failing: {}", failures.join(", ")) }
        ),
    })
}

/// Criteria 2 and 3 share the forward transforms and the final-form values.
fn round_trip_and_cross_form() -> Result<(Verdict, Verdict)> {
    let cfg = QuadratureConfig::default();
    let lambdas = log_grid(0.1, 10.0, 20);
    let (mut worst_round, mut worst_cross) = (0.0_f64, 0.0_f64);
    for nu in ORDERS {
        for a in [0.5, 1.0] {
            let p = kp(nu, a);
            let contour = working_contour(nu);
            let rows = round_trip(family(), p, contour, &lambdas, &cfg)?;
            worst_round = rows.iter().map(|r| r.rel_error).fold(worst_round, f64::max);
            let tr = ContourTransform::new(&family().representation(contour)?, p)?;
            for row in rows {
                let first = inverse_solve_reduced(|t| tr.eval_reduced(t).map(|r| t * r.value), p, row.lambda, &cfg)?;
                worst_cross = worst_cross.max((first.value - row.recovered).norm() / row.recovered.norm());
            }
        }
    }
    Ok((
        Verdict::within(worst_round, 1e-4, "120 solves, relative L-infinity error"),
        Verdict::within(worst_cross, 1e-6, "120 solves, derivative form vs final form"),
    ))
}

fn derivative_identities() -> Result<Verdict> {
    let mut worst = 0.0_f64;
    for nu in ORDERS {
        for x in [0.5, 1.0, 2.0, 5.0, 10.0] {
            for which in [BesselKind::J, BesselKind::Y] {
                for sign in [IdentitySign::Plus, IdentitySign::Minus] {
                    worst = worst.max(derivative_identity_check(nu, x, which, sign)?);
                }
            }
        }
    }
    Ok(Verdict::within(worst, 1e-7, "3x5 grid, worst defect"))
}

fn wronskian() -> Result<Verdict> {
    let mut worst = 0.0_f64;
    for nu in ORDERS {
        for a in [0.5, 1.0, 2.0] {
            for lambda in [0.1, 1.0, 10.0, 100.0] {
                worst = worst.max((PI * a * lambda * weber_kernel(kp(nu, a), a, lambda)? + 2.0).abs());
            }
        }
    }
    Ok(Verdict::within(worst, 1e-10, "|pi a lambda K(a, lambda) + 2|"))
}

/// Least-squares slope of `ys` against `xs`.
fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn truncation_law() -> Result<Verdict> {
    let p = kp(-0.75, 1.0);
    let x = 2.0;
    let omega = x - p.a;
    let cfg = QuadratureConfig::default().tightened(100.0);
    // Truncate where the carrier cos(λ(x − a)) vanishes, so the leading remainder term does not cancel.
    let start = (0.5 * PI + 3.0 * PI) / omega;
    let checkpoints: Vec<usize> = (4..=10).map(|k| 1 << k).collect();
    let mut worst = 0.0_f64;
    let mut fits = Vec::new();
    for mu in [-0.8, -0.5, -0.2] {
        let s = c(mu, 0.0);
        let integrand = |lambda: f64| Ok(real_pow(lambda, -s) * weber_kernel(p, x, lambda)?);
        let tail = integrate_oscillatory_tail(integrand, omega, start, &cfg)?.value;
        let sums = half_period_sums(integrand, omega, start, *checkpoints.last().unwrap(), &cfg)?;
        let (logs_n, logs_r): (Vec<f64>, Vec<f64>) = checkpoints
            .iter()
            .map(|&n| ((start + n as f64 * PI / omega).ln(), (tail - sums[n - 1]).norm().ln()))
            .unzip();
        let fitted = slope(&logs_n, &logs_r);
        worst = worst.max((fitted - (-mu - 1.0)).abs());
        fits.push(format!("mu={mu}: {fitted:.4} vs {:.2}", -mu - 1.0));
    }
    let mut v = Verdict::within(worst, 0.1, "worst exponent offset");
    v.summary = format!("{} [{}]", v.summary, fits.join(", "));
    Ok(v)
}

fn bound_structure() -> Result<Verdict> {
    let mut holdout_failures = 0;
    let mut holdout_points = 0;
    for nu in ORDERS {
        let p = kp(nu, 1.0);
        // Envelope of |F_ν|: calibrate on one grid, hold out on a disjoint one.
        let probes: Vec<(f64, Complex)> = [1.5, 2.0, 3.0, 5.0, 8.0]
            .into_iter()
            .flat_map(|r| [-0.9, -0.7, -0.5, -0.3, -0.1].into_iter().flat_map(move |mu| {
                [0.0, 1.0, 2.5, 5.0, 10.0].into_iter().map(move |t| (r, c(mu, t)))
            }))
            .collect();
        let cal = calibrate_f_nu_bound(p, &probes)?;
        for r in [1.7, 2.5, 4.0, 6.5, 12.0] {
            for mu in [-0.8, -0.6, -0.4, -0.2, -0.05] {
                for t in [0.5, -1.5, 4.0, 7.5, 20.0] {
                    let s = c(mu, t);
                    holdout_points += 1;
                    if !cal.holds(f_nu_closed(p, r, s)?.total.norm(), f_nu_bound(p, r, s)?) {
                        holdout_failures += 1;
                    }
                }
            }
        }
        // Gauss-function estimates, each on its validity domain.
        for which in HypEstimate::ALL {
            let probes = default_probes(p, Some(which));
            if probes.is_empty() {
                continue;
            }
            let cal = calibrate_hyp_estimate(p, which, &probes)?;
            for r in [1.05, 1.2, 1.7, 2.5, 4.0, 6.5, 12.0, 100.0] {
                for mu in [-0.8, -0.6, -0.45, -0.2, -0.05] {
                    if !which.valid(nu, mu) {
                        continue;
                    }
                    for t in [0.5, -1.5, 2.0, 4.0] {
                        let (lhs, env) = hyp_estimate_sides(p, r, c(mu, t), which)?;
                        holdout_points += 1;
                        if !cal.holds(lhs, env) {
                            holdout_failures += 1;
                        }
                    }
                }
            }
        }
    }
    let holdout = Verdict {
        passed: holdout_failures == 0,
        summary: format!("hold-out {holdout_failures}/{holdout_points} violations"),
    };
    // Blow-up of the first Gauss function as x ↓ a, against the exponent Re s/2 − 1.
    let p = kp(-0.75, 1.0);
    let xs: Vec<f64> = (0..6).map(|k| 1.0 + 1e-6 * 4f64.powi(k)).collect();
    let mut worst = 0.0_f64;
    let mut fits = Vec::new();
    for mu in [-0.7, -0.5, -0.3] {
        let (fitted, claimed) = blowup_exponent(p, c(mu, 0.0), HypEstimate::First, &xs)?;
        worst = worst.max((fitted - claimed).abs());
        fits.push(format!("mu={mu}: fitted {fitted:.4} vs {claimed:.2}"));
    }
    let mut exponent = Verdict::within(worst, 0.05, "x->a exponent offset");
    exponent.summary = format!("{} [{}]", exponent.summary, fits.join(", "));
    Ok(holdout.and(exponent))
}

fn mellin_machinery() -> Result<Verdict> {
    let gamma_rep = MellinRepresentation::new(gamma, ContourSpec::new(0.5, 40.0, 16)?, 0.0, 0.0)?;
    let mut inverse = 0.0_f64;
    for x in [0.5, 1.0, 2.0] {
        inverse = inverse.max((mellin_inverse(&gamma_rep, x)?.value - (-x).exp()).norm());
    }
    let cfg = QuadratureConfig::default();
    let exp = |x: f64| Ok(c((-x).exp(), 0.0));
    let x_exp = |x: f64| Ok(c(x * (-x).exp(), 0.0));
    let beta_kernel = |x: f64| Ok(c(x * x * (1.0 + x).powi(-3), 0.0));
    let parseval = [
        parseval_check(exp, exp, 0.5, &cfg)?.value.re,
        parseval_check(exp, x_exp, 0.5, &cfg)?.value.re,
        parseval_check(beta_kernel, exp, 0.5, &cfg)?.value.re,
    ]
    .into_iter()
    .fold(0.0, f64::max);
    // Convergence for (c1, c2) implies convergence for (d1, d2) when 2 sign(c1 − d1) + sign(c2 − d2) ≥ 0.
    let spec = ContourSpec::new(-0.5, 20.0, 16)?;
    let fam = family();
    let symbols = [
        MellinRepresentation::new(move |s| fam.symbol(s), spec, 0.0, 0.0)?,
        MellinRepresentation::new(|s: Complex| Ok(1.0 / (1.0 + s * s)), spec, 0.0, 0.0)?,
        MellinRepresentation::new(|s: Complex| Ok((s * s).exp()), spec, 0.0, 0.0)?,
    ];
    let classes = [(1.0, 0.0), (0.5, 1.0), (0.5, 0.0), (0.0, 1.0), (0.0, 0.0)];
    let sign = |v: f64| (v > 0.0) as i32 - (v < 0.0) as i32;
    let mut violations = 0;
    for rep in &symbols {
        let converged: Vec<bool> = classes
            .iter()
            .map(|&(c1, c2)| Ok(class_norm(&rep.with_class(c1, c2)?)?.converged))
            .collect::<Result<_>>()?;
        for (i, &(c1, c2)) in classes.iter().enumerate() {
            for (j, &(d1, d2)) in classes.iter().enumerate() {
                if converged[i] && 2 * sign(c1 - d1) + sign(c2 - d2) >= 0 && !converged[j] {
                    violations += 1;
                }
            }
        }
    }
    Ok(Verdict::within(inverse, 1e-8, "Gamma inverse")
        .and(Verdict::within(parseval, 1e-7, "Parseval"))
        .and(Verdict {
            passed: violations == 0,
            summary: format!("class inclusion violations {violations}"),
        }))
}

fn expansions() -> Result<Verdict> {
    let relaxed = QuadratureConfig::default().with_tolerances(1e-6, 1e-5);
    let fam = family();
    let g = |x: f64| Ok(c(fam.phi(x), 0.0));
    let titchmarsh = expansion_titchmarsh(g, KernelParams { nu: 0.25, a: 1.0 }, 2.0, &relaxed)?.value.re;
    let f = |x: f64| Ok(c(bump(x, 1.5, 5.5), 0.0));
    let p = kp(-0.75, 1.0);
    let exterior = expansion_weber_orr(f, p, 2.5, WeberOrrVariant::ExteriorFirst, &relaxed)?.value.re;
    let half_line = expansion_weber_orr(f, p, 2.5, WeberOrrVariant::HalfLineFirst, &relaxed)?.value.re;
    Ok(Verdict::within(titchmarsh, 1e-3, "half-line expansion")
        .and(Verdict::within(exterior, 1e-3, "Weber-Orr exterior-first"))
        .and(Verdict::within(half_line, 1e-3, "Weber-Orr half-line-first")))
}

fn report(number: usize, name: &str, started: Instant, verdict: Result<Verdict>) -> bool {
    let secs = started.elapsed().as_secs_f64();
    let (passed, summary) = match verdict {
        Ok(v) => (v.passed, v.summary),
        Err(e) => (false, format!("error: {e}")),
    };
    let tag = if passed { "PASS" } else { "FAIL" };
    println!("criterion {number} {tag} {name}: {summary} [{secs:.1}s]");
    passed
}

fn main() -> ExitCode {
    let mut results = Vec::new();
    let t = Instant::now();
    results.push(report(1, "closed form vs oracle", t, closed_form_conformance()));
    let t = Instant::now();
    let (round, cross) = match round_trip_and_cross_form() {
        Ok((r, x)) => (Ok(r), Ok(x)),
        Err(e) => (Err(e.clone()), Err(e)),
    };
    results.push(report(2, "round trip", t, round));
    results.push(report(3, "cross-form", t, cross));
    let t = Instant::now();
    results.push(report(4, "derivative identities", t, derivative_identities()));
    let t = Instant::now();
    results.push(report(5, "Wronskian", t, wronskian()));
    let t = Instant::now();
    results.push(report(6, "truncation law", t, truncation_law()));
    let t = Instant::now();
    results.push(report(7, "bound structure", t, bound_structure()));
    let t = Instant::now();
    results.push(report(8, "Mellin machinery", t, mellin_machinery()));
    let t = Instant::now();
    results.push(report(9, "expansions", t, expansions()));
    let failed = results.iter().filter(|&&ok| !ok).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
