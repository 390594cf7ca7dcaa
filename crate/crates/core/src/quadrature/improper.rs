//! Improper integrals over `[lower, ∞)`.
//!
//! The range is split into up to three parts:
//!
//! - `(0, h0]` when `lower = 0`: marched towards the origin in `v = −ln t`,
//!   where algebraic endpoint behaviour becomes geometric decay;
//! - `[h0 or lower, start]`: adaptive GK21;
//! - `[start, ∞)`: half-periods `π/ω` with iterated averaging of the partial
//!   sums when `ω > 0`, otherwise an outward march in `v = ln t`.

use super::adaptive::adaptive;
use super::QuadratureConfig;
use crate::{Complex, Error, EvaluationReport, Result};

/// Maximum number of unit steps of a logarithmic march.
pub const MARCH_BUDGET: usize = 600;

/// Decay ratio beyond which a march is declared divergent.
const DIVERGENCE_RATIO: f64 = 0.999;

/// Piece tolerances are this fraction of the overall tolerance.
const PIECE_FRACTION: f64 = 0.01;

/// Safety factor applied to the acceleration increment.
const ACCELERATION_SAFETY: f64 = 2.0;

fn zero() -> Complex {
    Complex::new(0.0, 0.0)
}

fn check_frequency(omega: f64) -> Result<()> {
    if omega > 0.0 && omega.is_finite() {
        Ok(())
    } else {
        Err(Error::DegeneratePhase(omega))
    }
}

/// Integral over one half-period piece.
fn half_period(
    f: &mut impl FnMut(f64) -> Result<Complex>,
    lo: f64,
    hi: f64,
    cfg: &QuadratureConfig,
) -> Result<EvaluationReport> {
    adaptive(
        &mut *f,
        lo,
        hi,
        cfg.abs_tol * PIECE_FRACTION,
        cfg.rel_tol * PIECE_FRACTION,
    )
}

/// Raw partial sums `S_1, …, S_n` of `∫_start^{start + k π/ω} f`.
pub fn half_period_sums(
    mut f: impl FnMut(f64) -> Result<Complex>,
    omega: f64,
    start: f64,
    n: usize,
    cfg: &QuadratureConfig,
) -> Result<Vec<Complex>> {
    check_frequency(omega)?;
    let h = std::f64::consts::PI / omega;
    let mut sum = zero();
    (0..n)
        .map(|k| {
            let lo = start + k as f64 * h;
            sum += half_period(&mut f, lo, lo + h, cfg)?.value;
            Ok(sum)
        })
        .collect()
}

/// `depth`-fold iterated averaging of the last `depth + 1` partial sums,
/// i.e. the binomial mean `Σ_j C(depth, j) S_{n−depth+j} / 2^depth`.
pub fn iterated_average(sums: &[Complex], depth: usize) -> Complex {
    assert!(!sums.is_empty(), "iterated averaging needs at least one partial sum");
    let depth = depth.min(sums.len() - 1);
    let window = &sums[sums.len() - depth - 1..];
    let mut coef = 1.0;
    let mut acc = zero();
    for (j, &s) in window.iter().enumerate() {
        acc += s * coef;
        coef = coef * (depth - j) as f64 / (j + 1) as f64;
    }
    acc / 2f64.powi(depth as i32)
}

/// `∫_start^∞ f` for integrands behaving like `A(λ)·cos(ωλ + θ)` with a slowly
/// varying, algebraically decaying amplitude.
pub fn integrate_oscillatory_tail(
    mut f: impl FnMut(f64) -> Result<Complex>,
    omega: f64,
    start: f64,
    cfg: &QuadratureConfig,
) -> Result<EvaluationReport> {
    check_frequency(omega)?;
    cfg.validate()?;
    let h = std::f64::consts::PI / omega;
    let depth = cfg.acceleration_depth;
    let min_pieces = (depth + 2).max(8);
    let mut sums = Vec::with_capacity(64);
    let mut accelerated: Vec<Complex> = Vec::with_capacity(64);
    let mut piece_error = 0.0;
    let mut largest = 0.0_f64;
    let mut sum = zero();
    let mut last_estimate = f64::INFINITY;
    for k in 0..cfg.max_half_periods {
        let lo = start + k as f64 * h;
        let piece = half_period(&mut f, lo, lo + h, cfg)?;
        sum += piece.value;
        piece_error += piece.abs_error_estimate;
        largest = largest.max(sum.norm());
        sums.push(sum);
        let value = iterated_average(&sums, depth);
        accelerated.push(value);
        let n = accelerated.len();
        if n < 3 {
            continue;
        }
        let increment = (value - accelerated[n - 2])
            .norm()
            .max((value - accelerated[n - 3]).norm());
        let estimate =
            ACCELERATION_SAFETY * increment + piece_error + 16.0 * f64::EPSILON * largest;
        last_estimate = estimate;
        if n >= min_pieces && estimate <= cfg.abs_tol.max(cfg.rel_tol * value.norm()) {
            return Ok(EvaluationReport::new(value, estimate, true)
                .with_diagnostic("half_periods", n as f64)
                .with_diagnostic("acceleration_increment", increment)
                .with_diagnostic("start", start));
        }
    }
    Err(Error::NotConverged {
        what: "accelerated oscillatory tail",
        budget: cfg.max_half_periods,
        estimate: last_estimate,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Direction {
    TowardsZero,
    TowardsInfinity,
}

/// Marches from `anchor` in unit steps of `ln t` until the geometric envelope
/// of `∫|f|` per step bounds the remainder below tolerance.
fn log_march(
    f: &mut impl FnMut(f64) -> Result<Complex>,
    anchor: f64,
    direction: Direction,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<EvaluationReport> {
    let sign = match direction {
        Direction::TowardsZero => -1.0,
        Direction::TowardsInfinity => 1.0,
    };
    let mut g = |v: f64| {
        let t = anchor * (sign * v).exp();
        if t == 0.0 || !t.is_finite() {
            return Ok(zero());
        }
        Ok(f(t)? * t)
    };
    let mut sum = zero();
    let mut error = 0.0;
    let mut l1 = Vec::with_capacity(64);
    for k in 0..MARCH_BUDGET {
        let piece = adaptive(
            &mut g,
            k as f64,
            (k + 1) as f64,
            abs_tol * PIECE_FRACTION,
            rel_tol * PIECE_FRACTION,
        )?;
        sum += piece.value;
        error += piece.abs_error_estimate;
        l1.push(piece.diagnostic("l1").unwrap_or(piece.value.norm()));
        let n = l1.len();
        if n < 3 {
            continue;
        }
        let (m2, m1, m0) = (l1[n - 3], l1[n - 2], l1[n - 1]);
        let target = 0.5 * abs_tol.max(rel_tol * sum.norm());
        if m0 == 0.0 && m1 == 0.0 {
            return Ok(march_report(sum, error, n));
        }
        let ratio = if m1 > 0.0 && m2 > 0.0 {
            (m0 / m1).max(m1 / m2)
        } else {
            f64::INFINITY
        };
        if n >= 8 && ratio >= DIVERGENCE_RATIO && m0 >= m2 {
            return Err(Error::Divergent(format!(
                "integrand envelope does not decay along ln t (ratio {ratio:.6} after {n} steps)"
            )));
        }
        if ratio < 1.0 {
            let remainder = m0 * ratio / (1.0 - ratio);
            if remainder <= target {
                return Ok(march_report(sum, error + remainder, n));
            }
        }
    }
    Err(Error::NotConverged {
        what: "logarithmic march",
        budget: MARCH_BUDGET,
        estimate: l1.last().copied().unwrap_or(f64::NAN),
    })
}

fn march_report(sum: Complex, error: f64, steps: usize) -> EvaluationReport {
    EvaluationReport::new(sum, error, true).with_diagnostic("march_steps", steps as f64)
}

/// `∫_a^b f` by adaptive GK21 under the configured tolerances.
pub fn integrate(
    f: impl FnMut(f64) -> Result<Complex>,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<EvaluationReport> {
    cfg.validate()?;
    adaptive(f, a, b, cfg.abs_tol, cfg.rel_tol)
}

/// `∫_lower^∞ f`. `phase_frequency > 0` selects the oscillatory tail beyond
/// `max(lower, origin_cutoff)`; zero selects the non-oscillatory march.
pub fn integrate_improper(
    mut f: impl FnMut(f64) -> Result<Complex>,
    lower: f64,
    phase_frequency: f64,
    cfg: &QuadratureConfig,
) -> Result<EvaluationReport> {
    cfg.validate()?;
    if !(lower >= 0.0 && lower.is_finite()) {
        return Err(Error::InvalidConfig(format!("lower limit {lower} must be finite and non-negative")));
    }
    if !(phase_frequency >= 0.0 && phase_frequency.is_finite()) {
        return Err(Error::DegeneratePhase(phase_frequency));
    }
    let start = lower.max(cfg.origin_cutoff);
    let abs_part = cfg.abs_tol / 3.0;
    let mut parts = Vec::with_capacity(3);

    let mut head_start = lower;
    if lower == 0.0 {
        let h0 = start.min(1.0);
        parts.push(log_march(&mut f, h0, Direction::TowardsZero, abs_part, cfg.rel_tol)?);
        head_start = h0;
    }
    if start > head_start {
        parts.push(adaptive(&mut f, head_start, start, abs_part, cfg.rel_tol)?);
    }
    let part_cfg = QuadratureConfig {
        abs_tol: abs_part,
        ..*cfg
    };
    let tail = if phase_frequency > 0.0 {
        integrate_oscillatory_tail(&mut f, phase_frequency, start, &part_cfg)?
    } else {
        log_march(&mut f, start, Direction::TowardsInfinity, abs_part, cfg.rel_tol)?
    };
    let half_periods = tail.diagnostic("half_periods");
    parts.push(tail);

    let value = parts.iter().map(|p| p.value).sum();
    let error = parts.iter().map(|p| p.abs_error_estimate).sum();
    let mut report = EvaluationReport::new(value, error, true).with_diagnostic("tail_start", start);
    if let Some(n) = half_periods {
        report = report.with_diagnostic("half_periods", n);
    }
    Ok(report)
}

/// `∫_a^∞ f(t) dt` for integrands oscillating in `t` at `phase_frequency`.
pub fn integrate_semiinfinite_from_a(
    f: impl FnMut(f64) -> Result<Complex>,
    a: f64,
    phase_frequency: f64,
    cfg: &QuadratureConfig,
) -> Result<EvaluationReport> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::NonPositiveArgument(a));
    }
    integrate_improper(f, a, phase_frequency, cfg)
}
