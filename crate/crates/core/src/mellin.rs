//! Mellin transforms on vertical contours.
//!
//! ```text
//! f*(s) = ∫₀^∞ f(x) x^{s−1} dx
//! f(x)  = (1/2πi) ∫_{μ−i∞}^{μ+i∞} Φ(s) x^{−s} ds
//! ```
//!
//! Contour integrals use composite 10-point Gauss–Legendre panels in
//! `t = Im s` on `[−T, T]`, doubling the panel count until two successive
//! sums agree. The discarded tails are bounded by a geometric fit of the
//! integrand modulus at `T`, `1.5T` and `2T`.

use std::f64::consts::PI;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::quadrature::{gauss_legendre_10, integrate_improper, QuadratureConfig};
use crate::{Complex, Error, EvaluationReport, Result};

/// Refinements stop once successive sums differ by less than this fraction
/// of `∫|g|` (rounding level for cancelling integrands) ...
pub const CONTOUR_FLOOR: f64 = 1e-14;

/// ... or by less than this fraction of the value.
pub const CONTOUR_REL_TOL: f64 = 1e-11;

/// Largest acceptable contour tail bound is `max(TAIL_FLOOR·∫|g|, TAIL_REL_TOL·|value|)`.
pub const TAIL_FLOOR: f64 = 1e-11;
pub const TAIL_REL_TOL: f64 = 1e-9;

/// Panel doublings attempted before giving up.
pub const MAX_REFINEMENTS: usize = 8;

/// Default factor by which the class-norm tail must shrink under `T → 2T`.
pub const MEMBERSHIP_SHRINK: f64 = 10.0;

/// Vertical line `Re s = mu`, truncated to `|Im s| ≤ t_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    pub mu: f64,
    pub t_max: f64,
    pub n_panels: usize,
}

impl ContourSpec {
    pub const MIN_PANELS: usize = 8;

    pub fn new(mu: f64, t_max: f64, n_panels: usize) -> Result<Self> {
        let spec = Self { mu, t_max, n_panels };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.mu.is_finite() {
            return Err(Error::InvalidConfig(format!("contour abscissa {} is not finite", self.mu)));
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return Err(Error::InvalidConfig(format!("t_max = {} must be positive", self.t_max)));
        }
        if self.n_panels < Self::MIN_PANELS {
            return Err(Error::InvalidConfig(format!(
                "n_panels = {} is below the minimum {}",
                self.n_panels,
                Self::MIN_PANELS
            )));
        }
        Ok(())
    }

    pub fn with_mu(self, mu: f64) -> Self {
        Self { mu, ..self }
    }

    pub fn with_t_max(self, t_max: f64) -> Self {
        Self { t_max, ..self }
    }

    pub fn point(&self, t: f64) -> Complex {
        Complex::new(self.mu, t)
    }

    /// Nodes `s_k` and weights `w_k` with `Σ w_k g(s_k) ≈ (1/2πi)∫ g ds` on
    /// the truncated line, using `panels` panels.
    pub fn rule(&self, panels: usize) -> Vec<(Complex, f64)> {
        panel_rule(-self.t_max, self.t_max, panels)
            .map(|(t, w)| (self.point(t), w / (2.0 * PI)))
            .collect()
    }
}

impl Default for ContourSpec {
    fn default() -> Self {
        Self {
            mu: -0.5,
            t_max: 30.0,
            n_panels: 16,
        }
    }
}

/// Composite GL10 nodes and weights on `[lo, hi]`.
fn panel_rule(lo: f64, hi: f64, panels: usize) -> impl Iterator<Item = (f64, f64)> {
    let width = (hi - lo) / panels as f64;
    let rule = gauss_legendre_10();
    (0..panels).flat_map(move |k| {
        let centre = lo + (k as f64 + 0.5) * width;
        rule.into_iter()
            .map(move |(x, w)| (centre + 0.5 * width * x, 0.5 * width * w))
    })
}

fn checked(v: Complex, t: f64) -> Result<Complex> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(t))
    }
}

/// Weighted sum and weighted `Σ|g|` over a node list, evaluated in
/// parallel and summed in order.
fn weighted_sum<G>(g: &G, nodes: &[(f64, f64)]) -> Result<(Complex, f64)>
where
    G: Fn(f64) -> Result<Complex> + Sync,
{
    let values: Vec<Complex> = nodes
        .par_iter()
        .map(|&(t, _)| g(t).and_then(|v| checked(v, t)))
        .collect::<Result<_>>()?;
    Ok(values
        .iter()
        .zip(nodes)
        .fold((Complex::new(0.0, 0.0), 0.0), |(sum, l1), (v, (_, w))| (sum + v * *w, l1 + v.norm() * w)))
}

/// Outcome of a refined panel integral.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Refined {
    pub value: Complex,
    pub error: f64,
    /// `∫|g|` on the final rule.
    pub l1: f64,
    pub panels: usize,
}

/// `∫_lo^hi g(t) dt`, doubling the panel count from `panels` until two
/// successive sums differ by at most `max(floor·∫|g|, rel_tol·|value|)`.
pub(crate) fn refine<G>(g: &G, lo: f64, hi: f64, panels: usize, floor: f64, rel_tol: f64) -> Result<Refined>
where
    G: Fn(f64) -> Result<Complex> + Sync,
{
    let mut n = panels;
    let nodes: Vec<_> = panel_rule(lo, hi, n).collect();
    let (mut previous, _) = weighted_sum(g, &nodes)?;
    let mut change = f64::INFINITY;
    for _ in 0..MAX_REFINEMENTS {
        n *= 2;
        let nodes: Vec<_> = panel_rule(lo, hi, n).collect();
        let (value, l1) = weighted_sum(g, &nodes)?;
        change = (value - previous).norm();
        if change <= (floor * l1).max(rel_tol * value.norm()) {
            return Ok(Refined {
                value,
                error: change.max(floor * l1),
                l1,
                panels: n,
            });
        }
        previous = value;
    }
    Err(Error::NotConverged {
        what: "contour panel refinement",
        budget: n,
        estimate: change,
    })
}

/// Geometric-fit bound on `∫_T^∞ m(t) dt` from samples of `m` at `T`,
/// `1.5T` and `2T`. Infinite when the samples are not decaying.
pub(crate) fn geometric_tail(m: [f64; 3], t: f64) -> f64 {
    if m.iter().any(|v| !v.is_finite()) {
        return f64::INFINITY;
    }
    if m[1] == 0.0 && m[2] == 0.0 {
        // Nothing resolved beyond T: charge the first half-interval only.
        return m[0] * 0.5 * t;
    }
    if m[0] == 0.0 || m[1] == 0.0 {
        return f64::INFINITY;
    }
    let ratio = (m[1] / m[0]).max(m[2] / m[1]);
    if ratio >= 1.0 {
        return f64::INFINITY;
    }
    m[0] * 0.5 * t / -ratio.ln()
}

/// Bound on `(1/2π)∫_{|t|>T} |g(μ+it)| dt`. `modulus` returns the part of
/// `|g|` that is resolved above evaluation noise.
fn tail_bound<M>(modulus: M, spec: &ContourSpec) -> Result<f64>
where
    M: Fn(Complex) -> Result<f64>,
{
    let t = spec.t_max;
    let mut bound = 0.0;
    for side in [1.0, -1.0] {
        let mut m = [0.0; 3];
        for (slot, k) in m.iter_mut().zip([1.0, 1.5, 2.0]) {
            *slot = modulus(spec.point(side * k * t))?;
        }
        bound += geometric_tail(m, t);
    }
    Ok(bound / (2.0 * PI))
}

/// Truncated contour integral plus tail bound, failing when the bound is
/// above tolerance.
fn contour_with_tail<G, M>(g: G, modulus: M, spec: &ContourSpec) -> Result<EvaluationReport>
where
    G: Fn(Complex) -> Result<Complex> + Sync,
    M: Fn(Complex) -> Result<f64>,
{
    spec.validate()?;
    let on_line = |t: f64| g(spec.point(t));
    let body = refine(&on_line, -spec.t_max, spec.t_max, spec.n_panels, CONTOUR_FLOOR, CONTOUR_REL_TOL)?;
    let value = body.value / (2.0 * PI);
    let l1 = body.l1 / (2.0 * PI);
    let tail = tail_bound(modulus, spec)?;
    let tol = (TAIL_FLOOR * l1).max(TAIL_REL_TOL * value.norm());
    if tail > tol {
        return Err(Error::TailBound { bound: tail, tol });
    }
    Ok(EvaluationReport::new(value, body.error / (2.0 * PI) + tail, true)
        .with_diagnostic("panels", body.panels as f64)
        .with_diagnostic("tail_bound", tail)
        .with_diagnostic("t_max", spec.t_max))
}

/// `(1/2πi)∫ g(s) ds` over the line of `spec`, with the tail bound folded
/// into the error estimate.
pub fn contour_integral<G>(g: G, spec: &ContourSpec) -> Result<EvaluationReport>
where
    G: Fn(Complex) -> Result<Complex> + Sync,
{
    contour_with_tail(&g, |s| Ok(g(s)?.norm()), spec)
}

/// A Mellin symbol `Φ(s)`.
pub type Symbol = Arc<dyn Fn(Complex) -> Result<Complex> + Send + Sync>;

/// A symbol on a contour, together with the class weights `(c1, c2)` of the
/// norm `(1/2π)∫ e^{πc1|s|}|s|^{c2}|Φ(s)| |ds|`.
#[derive(Clone)]
pub struct MellinRepresentation {
    phi: Symbol,
    pub contour: ContourSpec,
    pub class_c1: f64,
    pub class_c2: f64,
    pub shrink_factor: f64,
    membership: Arc<OnceLock<Result<f64>>>,
}

impl fmt::Debug for MellinRepresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MellinRepresentation")
            .field("contour", &self.contour)
            .field("class_c1", &self.class_c1)
            .field("class_c2", &self.class_c2)
            .field("shrink_factor", &self.shrink_factor)
            .finish_non_exhaustive()
    }
}

impl MellinRepresentation {
    pub fn new(
        phi: impl Fn(Complex) -> Result<Complex> + Send + Sync + 'static,
        contour: ContourSpec,
        class_c1: f64,
        class_c2: f64,
    ) -> Result<Self> {
        contour.validate()?;
        if !(class_c1.is_finite() && class_c2.is_finite()) {
            return Err(Error::InvalidConfig(format!("class parameters ({class_c1}, {class_c2}) must be finite")));
        }
        Ok(Self {
            phi: Arc::new(phi),
            contour,
            class_c1,
            class_c2,
            shrink_factor: MEMBERSHIP_SHRINK,
            membership: Arc::new(OnceLock::new()),
        })
    }

    /// The identically zero symbol.
    pub fn zero(contour: ContourSpec) -> Result<Self> {
        Self::new(|_| Ok(Complex::new(0.0, 0.0)), contour, 0.0, 0.0)
    }

    pub fn phi(&self, s: Complex) -> Result<Complex> {
        (self.phi)(s)
    }

    /// The same symbol on another contour or class; membership is re-decided.
    pub fn with_contour(&self, contour: ContourSpec) -> Result<Self> {
        contour.validate()?;
        Ok(Self {
            contour,
            membership: Arc::new(OnceLock::new()),
            ..self.clone()
        })
    }

    pub fn with_class(&self, class_c1: f64, class_c2: f64) -> Result<Self> {
        if !(class_c1.is_finite() && class_c2.is_finite()) {
            return Err(Error::InvalidConfig(format!("class parameters ({class_c1}, {class_c2}) must be finite")));
        }
        Ok(Self {
            class_c1,
            class_c2,
            membership: Arc::new(OnceLock::new()),
            ..self.clone()
        })
    }

    pub fn with_shrink_factor(&self, shrink_factor: f64) -> Result<Self> {
        if !(shrink_factor > 1.0) {
            return Err(Error::InvalidConfig(format!("shrink factor {shrink_factor} must exceed 1")));
        }
        Ok(Self {
            shrink_factor,
            membership: Arc::new(OnceLock::new()),
            ..self.clone()
        })
    }

    /// Decides membership once (through [`class_norm`]) and caches the outcome.
    /// Returns the class norm.
    pub fn check_membership(&self) -> Result<f64> {
        self.membership
            .get_or_init(|| {
                let norm = class_norm(self)?;
                if norm.converged {
                    Ok(norm.value.re)
                } else {
                    Err(Error::NonMember {
                        shrink: norm.diagnostic("shrink").unwrap_or(f64::NAN),
                    })
                }
            })
            .clone()
    }
}

/// `f*(s) = ∫₀^∞ f(x) x^{s−1} dx`.
pub fn mellin_forward(
    f: impl Fn(f64) -> Result<Complex>,
    s: Complex,
    cfg: &QuadratureConfig,
) -> Result<EvaluationReport> {
    let sm1 = s - 1.0;
    integrate_improper(|x: f64| Ok(f(x)? * (sm1 * x.ln()).exp()), 0.0, 0.0, cfg)
}

/// `(1/2πi)∫ Φ(s) x^{−s} ds` on the representation's contour.
pub fn mellin_inverse(rep: &MellinRepresentation, x: f64) -> Result<EvaluationReport> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::NonPositiveArgument(x));
    }
    rep.check_membership()?;
    let ln_x = x.ln();
    contour_integral(|s| Ok(rep.phi(s)? * (-s * ln_x).exp()), &rep.contour)
}

/// Contour half-length used by [`parseval_check`] for the right-hand side.
pub const PARSEVAL_CONTOUR_T_MAX: f64 = 12.0;

/// `|∫₀^∞ f g dx − (1/2πi)∫ f*(s) g*(1−s) ds|` on `Re s = mu`, both Mellin
/// transforms computed by quadrature at every contour node.
pub fn parseval_check(
    f: impl Fn(f64) -> Result<Complex> + Sync,
    g: impl Fn(f64) -> Result<Complex> + Sync,
    mu: f64,
    cfg: &QuadratureConfig,
) -> Result<EvaluationReport> {
    let left = integrate_improper(|x: f64| Ok(f(x)? * g(x)?), 0.0, 0.0, cfg)?;
    let spec = ContourSpec::new(mu, PARSEVAL_CONTOUR_T_MAX, ContourSpec::MIN_PANELS)?;

    // Product value and its propagated quadrature error, memoized per node.
    let cache: Mutex<HashMap<(u64, u64), (Complex, f64)>> = Mutex::new(HashMap::new());
    let product = |s: Complex| -> Result<(Complex, f64)> {
        let key = (s.re.to_bits(), s.im.to_bits());
        if let Some(&hit) = cache.lock().unwrap().get(&key) {
            return Ok(hit);
        }
        let fs = mellin_forward(&f, s, cfg)?;
        let gs = mellin_forward(&g, 1.0 - s, cfg)?;
        let error = fs.value.norm() * gs.abs_error_estimate
            + gs.value.norm() * fs.abs_error_estimate
            + fs.abs_error_estimate * gs.abs_error_estimate;
        let entry = (fs.value * gs.value, error);
        cache.lock().unwrap().insert(key, entry);
        Ok(entry)
    };
    let resolved = |s: Complex| product(s).map(|(v, e)| (v.norm() - e).max(0.0));
    let right = contour_with_tail(|s| product(s).map(|(v, _)| v), resolved, &spec)?;
    let panels = right.diagnostic("panels").unwrap_or(spec.n_panels as f64) as usize;
    let propagated: f64 = spec
        .rule(panels)
        .iter()
        .map(|&(s, w)| product(s).map(|(_, e)| e * w))
        .sum::<Result<f64>>()?;

    let defect = (left.value - right.value).norm();
    Ok(EvaluationReport::new(
        Complex::new(defect, 0.0),
        left.abs_error_estimate + right.abs_error_estimate + propagated,
        true,
    )
    .with_diagnostic("left_re", left.value.re)
    .with_diagnostic("left_im", left.value.im)
    .with_diagnostic("right_re", right.value.re)
    .with_diagnostic("right_im", right.value.im))
}

/// Weighted norm `(1/2π)∫ e^{πc1|s|}|s|^{c2}|Φ(s)| dt`, integrated over
/// `|t| ≤ 4T` in three pieces: the core `|t| ≤ T` and the rings `T < |t| ≤ 2T`,
/// `2T < |t| ≤ 4T`. `converged` requires the ring contributions to shrink by
/// the representation's factor. Contours with `μ = 0` are rejected.
pub fn class_norm(rep: &MellinRepresentation) -> Result<EvaluationReport> {
    let spec = rep.contour;
    spec.validate()?;
    if spec.mu == 0.0 {
        return Err(Error::InvalidConfig("class norms require a contour with mu != 0".into()));
    }
    let (c1, c2) = (rep.class_c1, rep.class_c2);
    let weighted = |t: f64| -> Result<Complex> {
        let s = spec.point(t);
        let phi = rep.phi(s)?.norm();
        if phi == 0.0 {
            return Ok(Complex::new(0.0, 0.0));
        }
        let r = s.norm();
        let w = (PI * c1 * r + c2 * r.ln() + phi.ln()).exp() / (2.0 * PI);
        Ok(Complex::new(w, 0.0))
    };
    let piece = |lo: f64, hi: f64| -> Result<Refined> {
        refine(&weighted, lo, hi, spec.n_panels, 0.0, CONTOUR_REL_TOL)
    };
    let t = spec.t_max;
    let core = piece(-t, t)?;
    let mut rings = [0.0; 2];
    let mut error = core.error;
    for (k, ring) in rings.iter_mut().enumerate() {
        let (lo, hi) = (t * (1 << k) as f64, t * (2 << k) as f64);
        for (a, b) in [(lo, hi), (-hi, -lo)] {
            match piece(a, b) {
                Ok(r) => {
                    *ring += r.value.re;
                    error += r.error;
                }
                Err(Error::NonFinite(_)) => *ring = f64::INFINITY,
                Err(e) => return Err(e),
            }
        }
    }
    let shrink = if rings[0] == 0.0 && rings[1] == 0.0 {
        f64::INFINITY
    } else {
        rings[0] / rings[1]
    };
    let value = core.value.re + rings[0] + rings[1];
    let converged = value.is_finite() && shrink >= rep.shrink_factor;
    Ok(EvaluationReport::new(Complex::new(value, 0.0), error + rings[1], converged)
        .with_diagnostic("shrink", shrink)
        .with_diagnostic("tail", rings[0])
        .with_diagnostic("t_max", t))
}
