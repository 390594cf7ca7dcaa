//! Forward transform, explicit inverse and expansion checks for
//!
//! ```text
//! f(x) = ∫₀^∞ φ(λ) K_ν(x, λ) dλ,   x > a,   −1 < ν < −1/2.
//! ```
//!
//! The forward map is available directly (oscillatory quadrature in `λ`) and
//! through the contour form `f(x) = (1/2πi)∫ Φ(s) F_ν(x, s) ds`. The inverse is
//!
//! ```text
//! φ(λ) = λ / (J²_{ν+1}(aλ) + Y²_{ν+1}(aλ)) ∫_a^∞ t f(t) K_ν(t, λ) dt
//!      = −1 / (J²_{ν+1}(aλ) + Y²_{ν+1}(aλ)) ∫_a^∞ C_{ν+1}(λt, λa) t^{ν+1} (t^{−ν} f)'(t) dt.
//! ```

use std::f64::consts::PI;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closedform::{check_strip, FnuCoefficients, STRIP};
use crate::kernels::{kernel_c, richardson_derivative, weber_kernel, KernelAtLambda, KernelParams};
use crate::mellin::{
    geometric_tail, ContourSpec, MellinRepresentation, CONTOUR_FLOOR, CONTOUR_REL_TOL, MAX_REFINEMENTS,
    TAIL_FLOOR, TAIL_REL_TOL,
};
use crate::quadrature::{integrate_improper, integrate_semiinfinite_from_a, QuadratureConfig};
use crate::specfun::{bessel_jy, gamma};
use crate::{Complex, Error, EvaluationReport, Result};

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

/// Orders accepted by [`expansion_titchmarsh`].
pub const EXPANSION_ORDER_RANGE: (f64, f64) = (0.0, 0.5);

/// The Mellin–Barnes beta pair
/// `Φ(s) = Γ(s+p)Γ(q−s)  ↔  φ(λ) = Γ(p+q) λ^p (1+λ)^{−p−q}`, analytic on `−p < Re s < q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestFunctionFamily {
    pub p: u32,
    pub q: f64,
}

impl TestFunctionFamily {
    pub fn new(p: u32, q: f64) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidConfig("family parameter p must be a positive integer".into()));
        }
        if !(q > 0.0 && q.is_finite()) {
            return Err(Error::InvalidConfig(format!("family parameter q = {q} must be positive")));
        }
        Ok(Self { p, q })
    }

    pub fn strip(&self) -> (f64, f64) {
        (-f64::from(self.p), self.q)
    }

    pub fn phi(&self, lambda: f64) -> f64 {
        let p = f64::from(self.p);
        let norm = gamma(c(p + self.q, 0.0)).map_or(f64::NAN, |g| g.re);
        norm * lambda.powf(p) * (1.0 + lambda).powf(-p - self.q)
    }

    pub fn symbol(&self, s: Complex) -> Result<Complex> {
        Ok(gamma(s + f64::from(self.p))? * gamma(self.q - s)?)
    }

    /// `Φ` on `contour`, in the class `(c1, c2) = (1/2, 1)`.
    pub fn representation(&self, contour: ContourSpec) -> Result<MellinRepresentation> {
        let (lo, hi) = self.strip();
        check_strip(c(contour.mu, 0.0), lo, hi)?;
        let family = *self;
        MellinRepresentation::new(move |s| family.symbol(s), contour, 0.5, 1.0)
    }

    /// Symbol `Ψ(s) = Φ(s+1)` of `λφ(λ)` on `contour`, in the class `(0, 1)`.
    pub fn lambda_phi_representation(&self, contour: ContourSpec) -> Result<MellinRepresentation> {
        let (lo, hi) = self.strip();
        check_strip(c(contour.mu, 0.0), lo - 1.0, hi - 1.0)?;
        let family = *self;
        MellinRepresentation::new(move |s| family.symbol(s + 1.0), contour, 0.0, 1.0)
    }
}

/// Truncation of the working contour; `|Φ F_ν|` for the test family is below
/// `1e-13` of its peak by `|Im s| = 20`.
pub const WORKING_T_MAX: f64 = 20.0;

/// Contour `Re s = (ν − 1)/2`, the middle of `(−1, ν)`.
pub fn working_contour(nu: f64) -> ContourSpec {
    ContourSpec {
        mu: 0.5 * (nu - 1.0),
        t_max: WORKING_T_MAX,
        ..ContourSpec::default()
    }
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi / lo).ln() / (n - 1) as f64;
            (0..n).map(|k| lo * (step * k as f64).exp()).collect()
        }
    }
}

/// Start of the oscillatory tail of a `λ`-integral against `K_ν(x, ·)`.
fn forward_tail_start(p: KernelParams, x: f64, cfg: &QuadratureConfig) -> f64 {
    cfg.origin_cutoff.max(10.0 / x.min(p.a))
}

/// Start of the oscillatory tail of a `t`-integral at spectral parameter `λ`.
fn inverse_tail_start(p: KernelParams, lambda: f64, cfg: &QuadratureConfig) -> f64 {
    cfg.origin_cutoff.max(p.a + 10.0 / lambda)
}

/// `f(x) = ∫₀^∞ φ(λ) K_ν(x, λ) dλ` by oscillatory quadrature.
pub fn forward_direct(
    phi: impl Fn(f64) -> Result<Complex>,
    p: KernelParams,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<EvaluationReport> {
    p.require_outside(x)?;
    let integrand = |lambda: f64| Ok(phi(lambda)? * weber_kernel(p, x, lambda)?);
    integrate_improper(integrand, 0.0, x - p.a, &cfg.with_origin_cutoff(forward_tail_start(p, x, cfg)))
}

struct Node {
    /// Rule weight times `Φ(s)`.
    weight: Complex,
    coef: FnuCoefficients,
}

/// The contour form of the forward transform for one symbol, with the
/// closed-form coefficients at every node computed once and shared by all
/// evaluation points.
pub struct ContourTransform {
    params: KernelParams,
    rep: MellinRepresentation,
    levels: Vec<OnceLock<Result<Vec<Node>>>>,
    first_level: usize,
    rel_tol: f64,
    /// `(Φ(s), coefficients)` at `±T`, `±1.5T`, `±2T`.
    tail: OnceLock<Result<Vec<(Complex, FnuCoefficients)>>>,
}

impl ContourTransform {
    pub fn new(rep: &MellinRepresentation, p: KernelParams) -> Result<Self> {
        p.require_solver_range()?;
        check_strip(c(rep.contour.mu, 0.0), STRIP.0, STRIP.1)?;
        rep.check_membership()?;
        Ok(Self {
            params: p,
            rep: rep.clone(),
            levels: (0..=MAX_REFINEMENTS).map(|_| OnceLock::new()).collect(),
            first_level: first_level(rep.contour),
            rel_tol: CONTOUR_REL_TOL,
            tail: OnceLock::new(),
        })
    }

    /// Relative refinement tolerance; the absolute floor scales with it.
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol < 1.0) {
            return Err(Error::InvalidConfig(format!("contour tolerance must lie in (0, 1), got {rel_tol}")));
        }
        self.rel_tol = rel_tol;
        Ok(self)
    }

    fn floor(&self) -> f64 {
        CONTOUR_FLOOR / CONTOUR_REL_TOL * self.rel_tol
    }

    pub fn params(&self) -> KernelParams {
        self.params
    }

    pub fn representation(&self) -> &MellinRepresentation {
        &self.rep
    }

    fn level(&self, k: usize) -> Result<&[Node]> {
        self.levels[k]
            .get_or_init(|| {
                let spec = self.rep.contour;
                spec.rule(spec.n_panels << k)
                    .into_par_iter()
                    .map(|(s, w)| {
                        Ok(Node {
                            weight: self.rep.phi(s)? * w,
                            coef: FnuCoefficients::new(self.params, s)?,
                        })
                    })
                    .collect()
            })
            .as_deref()
            .map_err(Clone::clone)
    }

    fn tail_nodes(&self) -> Result<&[(Complex, FnuCoefficients)]> {
        self.tail
            .get_or_init(|| {
                let spec = self.rep.contour;
                [1.0, 1.5, 2.0, -1.0, -1.5, -2.0]
                    .iter()
                    .map(|k| {
                        let s = spec.point(k * spec.t_max);
                        Ok((self.rep.phi(s)?, FnuCoefficients::new(self.params, s)?))
                    })
                    .collect()
            })
            .as_deref()
            .map_err(Clone::clone)
    }

    /// `(1/2πi)∫ Φ(s) G(s) ds` where `G(s) = kernel(coefficients at s)`.
    fn integrate<K>(&self, kernel: K) -> Result<EvaluationReport>
    where
        K: Fn(&FnuCoefficients) -> Result<Complex> + Sync,
    {
        let sum = |k: usize| -> Result<(Complex, f64)> {
            let nodes = self.level(k)?;
            let terms: Vec<Complex> = nodes
                .par_iter()
                .map(|n| Ok(n.weight * kernel(&n.coef)?))
                .collect::<Result<_>>()?;
            Ok(terms
                .iter()
                .fold((c(0.0, 0.0), 0.0), |(s, l1), t| (s + t, l1 + t.norm())))
        };
        let floor = self.floor();
        let (mut previous, _) = sum(self.first_level)?;
        let mut change = f64::INFINITY;
        for k in self.first_level + 1..=MAX_REFINEMENTS {
            let (value, l1) = sum(k)?;
            change = (value - previous).norm();
            if change <= (floor * l1).max(self.rel_tol * value.norm()) {
                let tail = self.tail_bound(&kernel)?;
                let tol = (TAIL_FLOOR * l1).max(TAIL_REL_TOL * value.norm());
                if tail > tol {
                    return Err(Error::TailBound { bound: tail, tol });
                }
                let error = change.max(floor * l1) + tail;
                return Ok(EvaluationReport::new(value, error, true)
                    .with_diagnostic("panels", (self.rep.contour.n_panels << k) as f64)
                    .with_diagnostic("tail_bound", tail));
            }
            previous = value;
        }
        Err(Error::NotConverged {
            what: "contour panel refinement",
            budget: self.rep.contour.n_panels << MAX_REFINEMENTS,
            estimate: change,
        })
    }

    fn tail_bound<K>(&self, kernel: &K) -> Result<f64>
    where
        K: Fn(&FnuCoefficients) -> Result<Complex>,
    {
        let nodes = self.tail_nodes()?;
        let mut bound = 0.0;
        for side in nodes.chunks(3) {
            let mut m = [0.0; 3];
            for (slot, (phi, coef)) in m.iter_mut().zip(side) {
                *slot = (phi * kernel(coef)?).norm();
            }
            bound += geometric_tail(m, self.rep.contour.t_max);
        }
        Ok(bound / (2.0 * PI))
    }

    /// `f(x)`.
    pub fn eval(&self, x: f64) -> Result<EvaluationReport> {
        self.params.require_outside(x)?;
        self.integrate(|coef| Ok(coef.eval(x)?.total))
    }

    /// `f'(x)`.
    pub fn eval_dx(&self, x: f64) -> Result<EvaluationReport> {
        self.params.require_outside(x)?;
        self.integrate(|coef| coef.eval_dx(x))
    }

    /// `x^ν d/dx (x^{−ν} f(x)) = f'(x) − ν f(x)/x`.
    pub fn eval_reduced(&self, x: f64) -> Result<EvaluationReport> {
        self.params.require_outside(x)?;
        let nu = self.params.nu;
        self.integrate(|coef| Ok(coef.eval_dx(x)? - nu / x * coef.eval(x)?.total))
    }
}

/// Coarsest refinement level with panels at most one unit of `Im s` wide.
fn first_level(spec: ContourSpec) -> usize {
    let width = |k: usize| 2.0 * spec.t_max / (spec.n_panels << k) as f64;
    (0..MAX_REFINEMENTS - 1).find(|&k| width(k) <= 1.0).unwrap_or(MAX_REFINEMENTS - 1)
}

/// `f(x) = (1/2πi)∫ Φ(s) F_ν(x, s) ds` on the representation's contour.
pub fn forward_contour(rep: &MellinRepresentation, p: KernelParams, x: f64) -> Result<EvaluationReport> {
    ContourTransform::new(rep, p)?.eval(x)
}

/// `J²_{ν+1}(aλ) + Y²_{ν+1}(aλ)` for the inverse formulas.
fn spectral_weight(k: &KernelAtLambda, lambda: f64) -> Result<f64> {
    let w = k.modulus_squared();
    if w > 0.0 && w.is_finite() {
        Ok(w)
    } else {
        Err(Error::DenominatorUnderflow(lambda))
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveArgument(lambda))
    }
}

/// `φ(λ) = λ/(J²_{ν+1}(aλ) + Y²_{ν+1}(aλ)) ∫_a^∞ t f(t) K_ν(t, λ) dt`.
pub fn inverse_solve(
    f: impl Fn(f64) -> Result<Complex>,
    p: KernelParams,
    lambda: f64,
    cfg: &QuadratureConfig,
) -> Result<EvaluationReport> {
    p.require_solver_range()?;
    check_lambda(lambda)?;
    let k = KernelAtLambda::new(p, lambda)?;
    let weight = spectral_weight(&k, lambda)?;
    let integrand = |t: f64| Ok(f(t)? * (t * k.eval(t)?));
    let cfg = cfg.with_origin_cutoff(inverse_tail_start(p, lambda, cfg));
    Ok(integrate_semiinfinite_from_a(integrand, p.a, lambda, &cfg)?.scaled(c(lambda / weight, 0.0)))
}

/// `φ(λ) = −1/(J²_{ν+1}(aλ) + Y²_{ν+1}(aλ)) ∫_a^∞ C_{ν+1}(λt, λa) t^{ν+1} (t^{−ν} f)'(t) dt`,
/// with `t^{ν+1} (t^{−ν} f)' = t f' − ν f`.
pub fn inverse_solve_derivative_form(
    f: impl Fn(f64) -> Result<Complex>,
    f_prime: impl Fn(f64) -> Result<Complex>,
    p: KernelParams,
    lambda: f64,
    cfg: &QuadratureConfig,
) -> Result<EvaluationReport> {
    let nu = p.nu;
    inverse_solve_reduced(|t: f64| Ok(t * f_prime(t)? - nu * f(t)?), p, lambda, cfg)
}

/// The derivative form with `g(t) = t f'(t) − ν f(t)` supplied directly.
pub fn inverse_solve_reduced(
    g: impl Fn(f64) -> Result<Complex>,
    p: KernelParams,
    lambda: f64,
    cfg: &QuadratureConfig,
) -> Result<EvaluationReport> {
    p.require_solver_range()?;
    check_lambda(lambda)?;
    let k = KernelAtLambda::new(p, lambda)?;
    let weight = spectral_weight(&k, lambda)?;
    let integrand = |t: f64| {
        let inner = g(t)?;
        if inner == c(0.0, 0.0) {
            return Ok(inner);
        }
        Ok(inner * k.cross(t)?)
    };
    let cfg = cfg.with_origin_cutoff(inverse_tail_start(p, lambda, cfg));
    Ok(integrate_semiinfinite_from_a(integrand, p.a, lambda, &cfg)?.scaled(c(-1.0 / weight, 0.0)))
}

/// `x^ν d/dx (x^{−ν} f(x))` by Richardson-extrapolated central differences.
pub fn differentiated_side(f: impl Fn(f64) -> Result<Complex>, nu: f64, x: f64) -> Result<Complex> {
    let part = |pick: fn(Complex) -> f64| richardson_derivative(|t: f64| Ok(pick(f(t)?) * t.powf(-nu)), x);
    let d = c(part(|z| z.re)?, part(|z| z.im)?);
    Ok(d * x.powf(nu))
}

/// `|∫₀^∞ λφ(λ)[Y_{ν+1}(xλ)J_{ν+1}(aλ) − J_{ν+1}(xλ)Y_{ν+1}(aλ)] dλ − right|`, where
/// `right` is the differentiated side `x^ν d/dx (x^{−ν} f(x))`.
pub fn reduced_equation_check(
    phi: impl Fn(f64) -> Result<Complex>,
    p: KernelParams,
    x: f64,
    right: Complex,
    cfg: &QuadratureConfig,
) -> Result<EvaluationReport> {
    p.require_outside(x)?;
    let nu1 = p.nu + 1.0;
    let integrand = |lambda: f64| {
        let v = phi(lambda)?;
        if v == c(0.0, 0.0) {
            return Ok(v);
        }
        Ok(-lambda * v * kernel_c(nu1, x * lambda, p.a * lambda)?)
    };
    let left = integrate_improper(integrand, 0.0, x - p.a, &cfg.with_origin_cutoff(forward_tail_start(p, x, cfg)))?;
    Ok(EvaluationReport::new(c((left.value - right).norm(), 0.0), left.abs_error_estimate, true)
        .with_diagnostic("left_re", left.value.re)
        .with_diagnostic("left_im", left.value.im))
}

fn check_expansion_order(nu: f64) -> Result<()> {
    let (lo, hi) = EXPANSION_ORDER_RANGE;
    if nu > lo && nu < hi {
        Ok(())
    } else {
        Err(Error::OrderOutsideRange { nu, lo, hi })
    }
}

/// `J²_ν(y) + Y²_ν(y)`.
fn bessel_modulus_squared(nu: f64, y: f64) -> Result<f64> {
    let (j, yv) = bessel_jy(nu, y)?;
    let w = j * j + yv * yv;
    if w > 0.0 && w.is_finite() {
        Ok(w)
    } else {
        Err(Error::DenominatorUnderflow(y))
    }
}

/// Deviation report for a repeated-integral reconstruction of `target`.
fn deviation(expansion: EvaluationReport, target: Complex) -> EvaluationReport {
    EvaluationReport::new(
        c((expansion.value - target).norm(), 0.0),
        expansion.abs_error_estimate,
        expansion.converged,
    )
    .with_diagnostic("expansion_re", expansion.value.re)
    .with_diagnostic("expansion_im", expansion.value.im)
}

/// `G(t) = ∫₀^∞ C_ν(tξ, aξ) w(ξ) dξ` for `t > a`; zero at `t = a`.
fn half_line_inner(
    w: &impl Fn(f64) -> Result<Complex>,
    nu: f64,
    a: f64,
    t: f64,
    cfg: &QuadratureConfig,
) -> Result<Complex> {
    if t <= a {
        return Ok(c(0.0, 0.0));
    }
    let integrand = |xi: f64| {
        let v = w(xi)?;
        if v == c(0.0, 0.0) {
            return Ok(v);
        }
        Ok(v * kernel_c(nu, t * xi, a * xi)?)
    };
    let cutoff = cfg.origin_cutoff.max(10.0 / a);
    Ok(integrate_improper(integrand, 0.0, t - a, &cfg.with_origin_cutoff(cutoff))?.value)
}

/// Reconstructs `g(x)` from the repeated integral
/// `x/(J²_ν(ax)+Y²_ν(ax)) ∫_a^∞ C_ν(xt, xa) t ∫₀^∞ C_ν(tξ, aξ) g(ξ) dξ dt`
/// and reports `|reconstruction − g(x)|`. Requires `0 < ν < 1/2`.
pub fn expansion_titchmarsh(
    g: impl Fn(f64) -> Result<Complex> + Sync,
    p: KernelParams,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<EvaluationReport> {
    check_expansion_order(p.nu)?;
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::NonPositiveArgument(x));
    }
    let (nu, a) = (p.nu, p.a);
    let outer = |t: f64| {
        let inner = half_line_inner(&g, nu, a, t, cfg)?;
        if inner == c(0.0, 0.0) {
            return Ok(inner);
        }
        Ok(inner * (t * kernel_c(nu, x * t, x * a)?))
    };
    let cutoff = cfg.origin_cutoff.max(a + 10.0 / x);
    let reconstruction = integrate_semiinfinite_from_a(outer, a, x, &cfg.with_origin_cutoff(cutoff))?
        .scaled(c(x / bessel_modulus_squared(nu, a * x)?, 0.0));
    Ok(deviation(reconstruction, g(x)?))
}

/// Which Weber–Orr repeated integral [`expansion_weber_orr`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WeberOrrVariant {
    /// `∫₀^∞ t C_ν(xt, at)/(J²_ν(at)+Y²_ν(at)) ∫_a^∞ C_ν(ξt, at) ξ f(ξ) dξ dt`, for `x > a`.
    ExteriorFirst,
    /// `∫_a^∞ C_ν(xt, xa) t ∫₀^∞ C_ν(tξ, aξ)/(J²_ν(aξ)+Y²_ν(aξ)) ξ f(ξ) dξ dt`.
    HalfLineFirst,
}

/// Reconstructs `f(x)` by a Weber–Orr repeated integral and reports
/// `|reconstruction − f(x)|`.
pub fn expansion_weber_orr(
    f: impl Fn(f64) -> Result<Complex> + Sync,
    p: KernelParams,
    x: f64,
    variant: WeberOrrVariant,
    cfg: &QuadratureConfig,
) -> Result<EvaluationReport> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::NonPositiveArgument(x));
    }
    let (nu, a) = (p.nu, p.a);
    let reconstruction = match variant {
        WeberOrrVariant::ExteriorFirst => {
            p.require_outside(x)?;
            let outer = |t: f64| {
                let inner = |xi: f64| {
                    let v = f(xi)?;
                    if v == c(0.0, 0.0) {
                        return Ok(v);
                    }
                    Ok(v * (xi * kernel_c(nu, xi * t, a * t)?))
                };
                let cutoff = cfg.origin_cutoff.max(a + 10.0 / t);
                let g = integrate_semiinfinite_from_a(inner, a, t, &cfg.with_origin_cutoff(cutoff))?.value;
                if g == c(0.0, 0.0) {
                    return Ok(g);
                }
                Ok(g * (t * kernel_c(nu, x * t, a * t)? / bessel_modulus_squared(nu, a * t)?))
            };
            let cutoff = cfg.origin_cutoff.max(10.0 / a);
            integrate_improper(outer, 0.0, x - a, &cfg.with_origin_cutoff(cutoff))?
        }
        WeberOrrVariant::HalfLineFirst => {
            let weighted = |xi: f64| {
                let v = f(xi)?;
                if v == c(0.0, 0.0) {
                    return Ok(v);
                }
                Ok(v * (xi / bessel_modulus_squared(nu, a * xi)?))
            };
            let outer = |t: f64| {
                let inner = half_line_inner(&weighted, nu, a, t, cfg)?;
                if inner == c(0.0, 0.0) {
                    return Ok(inner);
                }
                Ok(inner * (t * kernel_c(nu, x * t, x * a)?))
            };
            let cutoff = cfg.origin_cutoff.max(a + 10.0 / x);
            integrate_semiinfinite_from_a(outer, a, x, &cfg.with_origin_cutoff(cutoff))?
        }
    };
    Ok(deviation(reconstruction, f(x)?))
}

/// `φ` on a `λ` grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    /// `(λ, φ(λ), error estimate)`, `λ` strictly increasing.
    pub phi_values: Vec<(f64, Complex, f64)>,
    pub config_echo: QuadratureConfig,
    pub diagnostics: Vec<(String, f64)>,
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidConfig("evaluation grid is empty".into()));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidConfig("evaluation grid must be strictly increasing".into()));
    }
    Ok(())
}

/// [`inverse_solve`] over a grid, in parallel.
pub fn solve_grid(
    f: impl Fn(f64) -> Result<Complex> + Sync,
    p: KernelParams,
    lambdas: &[f64],
    cfg: &QuadratureConfig,
) -> Result<SolveResult> {
    check_grid(lambdas)?;
    let reports: Vec<EvaluationReport> = lambdas
        .par_iter()
        .map(|&lambda| inverse_solve(&f, p, lambda, cfg))
        .collect::<Result<_>>()?;
    let worst = reports.iter().map(|r| r.abs_error_estimate).fold(0.0, f64::max);
    Ok(SolveResult {
        phi_values: lambdas
            .iter()
            .zip(&reports)
            .map(|(&l, r)| (l, r.value, r.abs_error_estimate))
            .collect(),
        config_echo: *cfg,
        diagnostics: vec![("max_abs_error_estimate".into(), worst)],
    })
}

/// One row of a round trip: recovered and exact `φ(λ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoundTripRow {
    pub lambda: f64,
    pub recovered: Complex,
    pub abs_error_estimate: f64,
    pub exact: f64,
    pub rel_error: f64,
}

/// Pushes `family` forward through the contour form and back through
/// [`inverse_solve`] on `lambdas`.
pub fn round_trip(
    family: TestFunctionFamily,
    p: KernelParams,
    contour: ContourSpec,
    lambdas: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Vec<RoundTripRow>> {
    let transform = ContourTransform::new(&family.representation(contour)?, p)?;
    let f = |t: f64| transform.eval(t).map(|r| r.value);
    let solved = solve_grid(f, p, lambdas, cfg)?;
    Ok(solved
        .phi_values
        .into_iter()
        .map(|(lambda, recovered, err)| {
            let exact = family.phi(lambda);
            RoundTripRow {
                lambda,
                recovered,
                abs_error_estimate: err,
                exact,
                rel_error: (recovered - exact).norm() / exact.abs(),
            }
        })
        .collect())
}
