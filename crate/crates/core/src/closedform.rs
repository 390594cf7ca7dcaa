//! Closed form of the kernel's Mellin-type transform
//!
//! ```text
//! F_ν(x, s) = ∫₀^∞ λ^{−s} K_ν(x, λ) dλ,    −1 < Re s < 0,  x > a,
//! ```
//!
//! as a sum of three Gauss-function terms in `z = a²/x²`:
//!
//! ```text
//! T1 =  2^{−s} a^{ν+1} x^{−(2+ν−s)} cos(πν) Γ(−ν−1) Γ(1+ν−s/2) / Γ(s/2) · H1(z)
//! T2 = −2^{−s} x^{ν+s} a^{−(1+ν)} Γ(ν+1) Γ(−s/2) / Γ(1+ν+s/2) / π        · H2(z)
//! T3 = −2^{−s} a^{ν+1} x^{−(2+ν−s)} cos(πs/2) Γ(1+ν−s/2) Γ(1−s/2) / Γ(2+ν) · H1(z)
//! H1 = ₂F₁(1−s/2, 1+ν−s/2; 2+ν; z),   H2 = ₂F₁(−ν−s/2, −s/2; −ν; z)
//! ```
//!
//! (T1 and T3 also carry a factor `1/π`). Reciprocal gammas are evaluated as
//! entire functions, so a term whose `1/Γ` factor sits at a pole is zero.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::kernels::{weber_kernel, KernelParams};
use crate::quadrature::{integrate_improper, QuadratureConfig};
use crate::specfun::{cos_pi, cos_pi_complex, gamma, real_pow, rgamma, Hyp2F1Plan};
use crate::{Complex, Error, EvaluationReport, Result};

/// Open strip of admissible `Re s`.
pub const STRIP: (f64, f64) = (-1.0, 0.0);

/// `|total|` below this fraction of the largest term flags cancellation.
pub const CANCELLATION_RATIO: f64 = 1e-10;

/// Minimum of `Re b`, `Re(c − b)` for an estimate to count as valid.
pub const VALIDITY_MARGIN: f64 = 0.05;

/// Calibrated constants are the probe maximum times this factor.
pub const CALIBRATION_SAFETY: f64 = 2.0;

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

pub(crate) fn check_strip(s: Complex, lo: f64, hi: f64) -> Result<()> {
    if s.re > lo && s.re < hi && s.im.is_finite() {
        Ok(())
    } else {
        Err(Error::StripViolation { re: s.re, lo, hi })
    }
}

/// The three terms of the closed form and their sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FnuTermBreakdown {
    pub term1: Complex,
    pub term2: Complex,
    pub term3: Complex,
    pub total: Complex,
}

impl FnuTermBreakdown {
    fn new(term1: Complex, term2: Complex, term3: Complex) -> Self {
        Self {
            term1,
            term2,
            term3,
            total: term1 + term2 + term3,
        }
    }

    pub fn largest_term(&self) -> f64 {
        self.term1.norm().max(self.term2.norm()).max(self.term3.norm())
    }

    /// True when the sum lost (roughly) ten or more digits to cancellation.
    pub fn cancellation(&self) -> bool {
        self.total.norm() < CANCELLATION_RATIO * self.largest_term()
    }
}

/// Everything in `F_ν(·, s)` that does not depend on `x`.
#[derive(Debug, Clone)]
pub struct FnuCoefficients {
    params: KernelParams,
    s: Complex,
    coef1: Complex,
    coef2: Complex,
    coef3: Complex,
    /// Exponent of `x` in T1 and T3.
    exp13: Complex,
    /// Exponent of `x` in T2.
    exp2: Complex,
    h1: Hyp2F1Plan,
    h2: Hyp2F1Plan,
    h1_upper: (Complex, Complex, Complex),
    h2_upper: (Complex, Complex, Complex),
    derivative_plans: std::sync::OnceLock<Result<(Hyp2F1Plan, Hyp2F1Plan)>>,
}

impl FnuCoefficients {
    pub fn new(params: KernelParams, s: Complex) -> Result<Self> {
        params.require_solver_range()?;
        check_strip(s, STRIP.0, STRIP.1)?;
        let nu = params.nu;
        let a = params.a;
        let half = s * 0.5;
        let two_pow = real_pow(2.0, -s);
        let a_pow = a.powf(nu + 1.0);

        let coef1 = two_pow * a_pow / PI
            * cos_pi(nu)
            * rgamma(half)
            * gamma(c(-nu - 1.0, 0.0))?
            * gamma(1.0 + nu - half)?;
        let coef2 = -two_pow / (PI * a_pow)
            * gamma(c(nu + 1.0, 0.0))?
            * gamma(-half)?
            * rgamma(1.0 + nu + half);
        let coef3 = -two_pow * a_pow / PI
            * cos_pi_complex(half)
            * gamma(1.0 + nu - half)?
            * gamma(1.0 - half)?
            * rgamma(c(2.0 + nu, 0.0));

        let h1_upper = (1.0 - half, 1.0 + nu - half, c(2.0 + nu, 0.0));
        let h2_upper = (-nu - half, -half, c(-nu, 0.0));
        Ok(Self {
            params,
            s,
            coef1,
            coef2,
            coef3,
            exp13: -(2.0 + nu - s),
            exp2: nu + s,
            h1: Hyp2F1Plan::new(h1_upper.0, h1_upper.1, h1_upper.2)?,
            h2: Hyp2F1Plan::new(h2_upper.0, h2_upper.1, h2_upper.2)?,
            h1_upper,
            h2_upper,
            derivative_plans: std::sync::OnceLock::new(),
        })
    }

    pub fn params(&self) -> KernelParams {
        self.params
    }

    pub fn s(&self) -> Complex {
        self.s
    }

    /// Parameters `(a, b, c)` of the Gauss function shared by T1 and T3.
    pub fn h1_parameters(&self) -> (Complex, Complex, Complex) {
        self.h1_upper
    }

    /// Parameters `(a, b, c)` of the Gauss function in T2.
    pub fn h2_parameters(&self) -> (Complex, Complex, Complex) {
        self.h2_upper
    }

    fn z(&self, x: f64) -> Result<f64> {
        self.params.require_outside(x)?;
        let r = self.params.a / x;
        Ok(r * r)
    }

    /// Term breakdown at `x > a`; two Gauss-function evaluations.
    pub fn eval(&self, x: f64) -> Result<FnuTermBreakdown> {
        let z = self.z(x)?;
        let h1 = self.h1.eval(z)?;
        let h2 = self.h2.eval(z)?;
        let p13 = real_pow(x, self.exp13);
        let p2 = real_pow(x, self.exp2);
        Ok(FnuTermBreakdown::new(
            self.coef1 * p13 * h1,
            self.coef2 * p2 * h2,
            self.coef3 * p13 * h1,
        ))
    }

    /// `∂F_ν/∂x`, from `d/dx[x^e H(a²/x²)] = x^{e−1}[e·H − 2z·H'(z)]`.
    pub fn eval_dx(&self, x: f64) -> Result<Complex> {
        let z = self.z(x)?;
        let (d1, d2) = self
            .derivative_plans
            .get_or_init(|| {
                let shifted = |(a, b, c): (Complex, Complex, Complex)| {
                    Hyp2F1Plan::new(a + 1.0, b + 1.0, c + 1.0)
                };
                Ok((shifted(self.h1_upper)?, shifted(self.h2_upper)?))
            })
            .as_ref()
            .map_err(Clone::clone)?;
        let deriv = |plan: &Hyp2F1Plan, d: &Hyp2F1Plan, upper: (Complex, Complex, Complex), e: Complex| {
            let h = plan.eval(z)?;
            let hp = upper.0 * upper.1 / upper.2 * d.eval(z)?;
            Ok::<_, Error>(real_pow(x, e - 1.0) * (e * h - 2.0 * z * hp))
        };
        let g13 = deriv(&self.h1, d1, self.h1_upper, self.exp13)?;
        let g2 = deriv(&self.h2, d2, self.h2_upper, self.exp2)?;
        Ok((self.coef1 + self.coef3) * g13 + self.coef2 * g2)
    }
}

/// `F_ν(x, s)` with its term breakdown.
pub fn f_nu_closed(p: KernelParams, x: f64, s: Complex) -> Result<FnuTermBreakdown> {
    FnuCoefficients::new(p, s)?.eval(x)
}

/// `∂F_ν(x, s)/∂x`.
pub fn f_nu_closed_dx(p: KernelParams, x: f64, s: Complex) -> Result<Complex> {
    FnuCoefficients::new(p, s)?.eval_dx(x)
}

/// Start of the oscillatory tail for `λ^{−s} K_ν(x, λ)`: past the Bessel
/// transition region and past the point where the chirp `λ^{−i Im s}` is slow
/// compared with the carrier `cos(λ(x − a))`.
pub fn oracle_tail_start(p: KernelParams, x: f64, s: Complex, cfg: &QuadratureConfig) -> f64 {
    let transition = 10.0 / x.min(p.a);
    let chirp = 4.0 * s.im.abs() / (x - p.a);
    cfg.origin_cutoff.max(transition).max(chirp)
}

/// `F_ν(x, s)` by direct quadrature of its defining integral.
pub fn f_nu_quadrature(
    p: KernelParams,
    x: f64,
    s: Complex,
    cfg: &QuadratureConfig,
) -> Result<EvaluationReport> {
    p.require_outside(x)?;
    check_strip(s, STRIP.0, STRIP.1)?;
    let start = oracle_tail_start(p, x, s, cfg);
    let integrand = |lambda: f64| Ok(real_pow(lambda, -s) * weber_kernel(p, x, lambda)?);
    integrate_improper(integrand, 0.0, x - p.a, &cfg.with_origin_cutoff(start))
}

/// Envelope `x^{μ−ν} e^{π|s|/2} |s|^{−μ}` (`μ = Re s`) of `|F_ν(x, s)|`.
pub fn f_nu_bound(p: KernelParams, x: f64, s: Complex) -> Result<f64> {
    p.require_solver_range()?;
    p.require_outside(x)?;
    check_strip(s, STRIP.0, STRIP.1)?;
    let mu = s.re;
    Ok(x.powf(mu - p.nu) * (PI * s.norm() / 2.0).exp() * s.norm().powf(-mu))
}

/// Probe point `(x, s)` for calibration grids.
pub type Probe = (f64, Complex);

/// A constant `C` fitted on a probe grid so that `lhs ≤ C · envelope` there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub constant: f64,
    /// Largest observed `lhs / envelope` on the probe grid.
    pub probe_max: f64,
}

impl Calibration {
    fn fit(ratios: impl IntoIterator<Item = f64>) -> Result<Self> {
        let probe_max = ratios.into_iter().fold(0.0_f64, f64::max);
        if !probe_max.is_finite() {
            return Err(Error::NonFinite(probe_max));
        }
        Ok(Self {
            constant: CALIBRATION_SAFETY * probe_max,
            probe_max,
        })
    }

    /// Whether `lhs ≤ constant · envelope`.
    pub fn holds(&self, lhs: f64, envelope: f64) -> bool {
        lhs <= self.constant * envelope
    }
}

/// Calibrates the constant of [`f_nu_bound`] for fixed `(ν, a)`.
pub fn calibrate_f_nu_bound(p: KernelParams, probes: &[Probe]) -> Result<Calibration> {
    let ratios = probes
        .iter()
        .map(|&(x, s)| Ok(f_nu_closed(p, x, s)?.total.norm() / f_nu_bound(p, x, s)?))
        .collect::<Result<Vec<_>>>()?;
    Calibration::fit(ratios)
}

/// Which of the three Gauss-function estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HypEstimate {
    /// `|H1| ≤ C x^{2−μ} (x²−a²)^{μ/2−1} |Γ(2+ν)/(Γ(1+ν−s/2)Γ(1+s/2))|`.
    First,
    /// `|H2| ≤ C x^{−2ν−μ} (x²−a²)^{ν+μ/2} |Γ(−ν)/(Γ(−s/2)Γ(−ν+s/2))|`.
    Second,
    /// `|H1| ≤ C x^{2(1+ν)−μ} (x²−a²)^{μ/2−1−ν} |Γ(2+ν)/(Γ(1−s/2)Γ(1+ν+s/2))|`.
    Third,
}

impl HypEstimate {
    pub const ALL: [HypEstimate; 3] = [HypEstimate::First, HypEstimate::Second, HypEstimate::Third];

    pub fn from_index(which: u8) -> Result<Self> {
        match which {
            1 => Ok(Self::First),
            2 => Ok(Self::Second),
            3 => Ok(Self::Third),
            _ => Err(Error::InvalidConfig(format!("estimate index {which} not in 1..=3"))),
        }
    }

    /// Exponent of `(x² − a²)` in the estimate.
    pub fn claimed_exponent(self, nu: f64, mu: f64) -> f64 {
        match self {
            Self::First => mu / 2.0 - 1.0,
            Self::Second => nu + mu / 2.0,
            Self::Third => mu / 2.0 - 1.0 - nu,
        }
    }

    /// The estimate follows from the Euler integral only when the integral
    /// converges, i.e. `Re b > 0` and `Re(c − b) > 0` for the parameter
    /// choice behind it. Near the edge the beta factor hidden in `C` blows
    /// up, so a margin of [`VALIDITY_MARGIN`] is required.
    pub fn valid(self, nu: f64, mu: f64) -> bool {
        let (b, c_minus_b) = match self {
            Self::First => (1.0 + nu - mu / 2.0, 1.0 + mu / 2.0),
            Self::Second => (-mu / 2.0, -nu + mu / 2.0),
            Self::Third => (1.0 - mu / 2.0, 1.0 + nu + mu / 2.0),
        };
        b.min(c_minus_b) >= VALIDITY_MARGIN
    }
}

/// `(|₂F₁|, envelope without C)` for one estimate.
pub fn hyp_estimate_sides(
    p: KernelParams,
    x: f64,
    s: Complex,
    which: HypEstimate,
) -> Result<(f64, f64)> {
    let coefs = FnuCoefficients::new(p, s)?;
    let z = coefs.z(x)?;
    let (nu, a, mu) = (p.nu, p.a, s.re);
    let half = s * 0.5;
    let gap = x * x - a * a;
    let (plan, x_exp, gamma_ratio) = match which {
        HypEstimate::First => (
            &coefs.h1,
            2.0 - mu,
            gamma(c(2.0 + nu, 0.0))? * rgamma(1.0 + nu - half) * rgamma(1.0 + half),
        ),
        HypEstimate::Second => (
            &coefs.h2,
            -2.0 * nu - mu,
            gamma(c(-nu, 0.0))? * rgamma(-half) * rgamma(-nu + half),
        ),
        HypEstimate::Third => (
            &coefs.h1,
            2.0 * (1.0 + nu) - mu,
            gamma(c(2.0 + nu, 0.0))? * rgamma(1.0 - half) * rgamma(1.0 + nu + half),
        ),
    };
    let lhs = plan.eval(z)?.norm();
    let envelope = x.powf(x_exp) * gap.powf(which.claimed_exponent(nu, mu)) * gamma_ratio.norm();
    Ok((lhs, envelope))
}

/// Calibrates the constant of one estimate on a probe grid.
pub fn calibrate_hyp_estimate(
    p: KernelParams,
    which: HypEstimate,
    probes: &[Probe],
) -> Result<Calibration> {
    if probes.is_empty() {
        return Err(Error::InvalidConfig(format!(
            "no probe points for estimate {which:?} at nu = {}",
            p.nu
        )));
    }
    let mut ratios = Vec::with_capacity(probes.len());
    for &(x, s) in probes {
        if !which.valid(p.nu, s.re) {
            return Err(Error::InvalidConfig(format!(
                "probe s = {s} outside the validity domain of estimate {which:?}"
            )));
        }
        let (lhs, env) = hyp_estimate_sides(p, x, s, which)?;
        ratios.push(lhs / env);
    }
    Calibration::fit(ratios)
}

/// Default probe grid for `(ν, a)`: `x/a ∈ {1.5, 2, 3, 5, 8}`,
/// `Re s ∈ {−0.9, −0.6, −0.3, −0.15, −0.05}` (restricted to the estimate's
/// validity domain), `Im s ∈ {0, ±1, ±3}`.
pub fn default_probes(p: KernelParams, which: Option<HypEstimate>) -> Vec<Probe> {
    let mut out = Vec::new();
    for ratio in [1.5, 2.0, 3.0, 5.0, 8.0] {
        for mu in [-0.9, -0.6, -0.3, -0.15, -0.05] {
            if which.is_some_and(|w| !w.valid(p.nu, mu)) {
                continue;
            }
            for t in [0.0, 1.0, -1.0, 3.0, -3.0] {
                out.push((ratio * p.a, c(mu, t)));
            }
        }
    }
    out
}

/// Checks one estimate at `(x, s)` with its constant calibrated on the
/// default probe grid. Points outside the estimate's validity domain report
/// `false`.
pub fn hyp_estimate_check(p: KernelParams, x: f64, s: Complex, which: HypEstimate) -> Result<bool> {
    let probes = default_probes(p, Some(which));
    if !which.valid(p.nu, s.re) || probes.is_empty() {
        return Ok(false);
    }
    let cal = calibrate_hyp_estimate(p, which, &probes)?;
    let (lhs, env) = hyp_estimate_sides(p, x, s, which)?;
    Ok(cal.holds(lhs, env))
}

/// Least-squares slope of `ln|₂F₁|` against `ln(x² − a²)` for `x ↓ a`,
/// together with the exponent the estimate claims.
pub fn blowup_exponent(
    p: KernelParams,
    s: Complex,
    which: HypEstimate,
    xs: &[f64],
) -> Result<(f64, f64)> {
    if xs.len() < 2 {
        return Err(Error::InvalidConfig("slope fit needs at least two points".into()));
    }
    let pts = xs
        .iter()
        .map(|&x| {
            let (lhs, _) = hyp_estimate_sides(p, x, s, which)?;
            Ok(((x * x - p.a * p.a).ln(), lhs.ln()))
        })
        .collect::<Result<Vec<_>>>()?;
    let n = pts.len() as f64;
    let (mx, my) = pts.iter().fold((0.0, 0.0), |(sx, sy), &(u, v)| (sx + u / n, sy + v / n));
    let (sxy, sxx) = pts.iter().fold((0.0, 0.0), |(a, b), &(u, v)| {
        (a + (u - mx) * (v - my), b + (u - mx) * (u - mx))
    });
    Ok((sxy / sxx, which.claimed_exponent(p.nu, s.re)))
}
