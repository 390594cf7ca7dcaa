//! Gauss hypergeometric function `₂F₁(a, b; c; z)` with complex parameters and
//! real `z ∈ [0, 1)`.
//!
//! The ascending series is summed directly for `z <= 0.75`. Beyond that the
//! `z → 1 − z` connection formula is used,
//!
//! ```text
//! ₂F₁(a,b;c;z) = A ₂F₁(a, b; a+b−c+1; 1−z) + B (1−z)^{c−a−b} ₂F₁(c−a, c−b; c−a−b+1; 1−z),
//! A = Γ(c)Γ(c−a−b) / (Γ(c−a)Γ(c−b)),   B = Γ(c)Γ(a+b−c) / (Γ(a)Γ(b)),
//! ```
//!
//! unless `c − a − b` sits near an integer, where the direct series is kept.

use std::sync::OnceLock;

use crate::specfun::gamma::{gamma, rgamma};
use crate::{Complex, Error, Result};

/// Maximum number of series terms before declaring divergence.
pub const SERIES_BUDGET: usize = 10_000;

/// Distance from a non-positive integer at which `c` counts as a pole.
const POLE_TOLERANCE: f64 = 1e-12;

/// Above this `z` the `1 − z` transformation is used.
const TRANSFORM_THRESHOLD: f64 = 0.75;

/// `c − a − b` closer than this to an integer disables the transformation.
const INTEGER_GUARD: f64 = 1e-3;

const TERM_EPS: f64 = 1e-17;

/// Validated arguments of `₂F₁(a, b; c; z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyp2F1Args {
    pub a: Complex,
    pub b: Complex,
    pub c: Complex,
    pub z: f64,
}

impl Hyp2F1Args {
    pub fn new(a: Complex, b: Complex, c: Complex, z: f64) -> Result<Self> {
        check_lower(c)?;
        check_z(z)?;
        Ok(Self { a, b, c, z })
    }
}

fn nearest_integer_distance(w: Complex) -> f64 {
    Complex::new(w.re - w.re.round(), w.im).norm()
}

fn is_nonpositive_integer(w: Complex, tol: f64) -> bool {
    w.re < 0.5 && nearest_integer_distance(w) <= tol
}

fn check_lower(c: Complex) -> Result<()> {
    if !(c.re.is_finite() && c.im.is_finite()) || is_nonpositive_integer(c, POLE_TOLERANCE) {
        return Err(Error::HypergeometricPole { re: c.re, im: c.im });
    }
    Ok(())
}

fn check_z(z: f64) -> Result<()> {
    if !(0.0..1.0).contains(&z) {
        return Err(Error::HypergeometricArgument(z));
    }
    Ok(())
}

/// Sum of the ascending series and its condition number
/// `max |term| / |sum|` (a measure of cancellation).
fn series(a: Complex, b: Complex, c: Complex, z: f64) -> Result<(Complex, f64)> {
    let mut term = Complex::new(1.0, 0.0);
    let mut sum = term;
    let mut largest = 1.0_f64;
    if z == 0.0 {
        return Ok((sum, 1.0));
    }
    for n in 0..SERIES_BUDGET {
        let nf = n as f64;
        let ratio = (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        term *= ratio;
        sum += term;
        let mag = term.norm();
        largest = largest.max(mag);
        if mag == 0.0 {
            return Ok((sum, largest / sum.norm()));
        }
        // Stop once terms are negligible and the ratio has settled below one.
        if mag <= TERM_EPS * sum.norm() && ratio.norm() < 1.0 {
            return Ok((sum, largest / sum.norm()));
        }
    }
    Err(Error::NotConverged {
        what: "hypergeometric series",
        budget: SERIES_BUDGET,
        estimate: term.norm() / sum.norm(),
    })
}

/// Coefficients `(a)_n (b)_n / ((c)_n n!)` of one ascending series, built on
/// first use and long enough for arguments up to `z_max`.
#[derive(Debug)]
struct SeriesTable {
    a: Complex,
    b: Complex,
    c: Complex,
    z_max: f64,
    table: OnceLock<Table>,
}

impl Clone for SeriesTable {
    fn clone(&self) -> Self {
        Self::new(self.a, self.b, self.c, self.z_max)
    }
}

impl SeriesTable {
    fn new(a: Complex, b: Complex, c: Complex, z_max: f64) -> Self {
        Self {
            a,
            b,
            c,
            z_max,
            table: OnceLock::new(),
        }
    }

    fn table(&self) -> &Table {
        self.table.get_or_init(|| {
            let mut coefs = vec![Complex::new(1.0, 0.0)];
            let mut ratios = Vec::new();
            let mut coef = coefs[0];
            let mut scale = 1.0;
            for n in 0..SERIES_BUDGET {
                let nf = n as f64;
                let ratio = (self.a + nf) * (self.b + nf) / ((self.c + nf) * (nf + 1.0));
                coef *= ratio;
                scale *= self.z_max;
                coefs.push(coef);
                ratios.push(ratio.norm());
                let mag = coef.norm() * scale;
                if mag == 0.0 || (mag <= TERM_EPS && ratio.norm() * self.z_max < 1.0) {
                    break;
                }
            }
            // `ratios[n]` is |c_{n+1}/c_n|; the last entry has no successor.
            ratios.push(f64::INFINITY);
            let norms = coefs.iter().map(|c| c.norm()).collect();
            Table { coefs, norms, ratios }
        })
    }

    /// Same sum and stopping rule as [`series`], falling back to it when the
    /// table runs out.
    fn eval(&self, z: f64) -> Result<(Complex, f64)> {
        if z == 0.0 {
            return Ok((Complex::new(1.0, 0.0), 1.0));
        }
        let table = self.table();
        let eps_sq = TERM_EPS * TERM_EPS;
        let mut sum = table.coefs[0];
        let mut largest = 1.0_f64;
        let mut zn = 1.0;
        for n in 1..table.coefs.len() {
            zn *= z;
            sum += table.coefs[n] * zn;
            let mag = table.norms[n] * zn;
            largest = largest.max(mag);
            if mag == 0.0 || (mag * mag <= eps_sq * sum.norm_sqr() && table.ratios[n] * z < 1.0) {
                return Ok((sum, largest / sum.norm()));
            }
        }
        series(self.a, self.b, self.c, z)
    }
}

#[derive(Debug)]
struct Table {
    coefs: Vec<Complex>,
    norms: Vec<f64>,
    ratios: Vec<f64>,
}

/// Precomputed evaluation plan for fixed `(a, b, c)` and varying `z`.
#[derive(Debug, Clone)]
pub struct Hyp2F1Plan {
    direct: SeriesTable,
    transform: Option<Transform>,
}

#[derive(Debug, Clone)]
struct Transform {
    coef_a: Complex,
    coef_b: Complex,
    exponent: Complex,
    first: SeriesTable,
    second: SeriesTable,
}

impl Hyp2F1Plan {
    pub fn new(a: Complex, b: Complex, c: Complex) -> Result<Self> {
        check_lower(c)?;
        let d = c - a - b;
        let transform = if nearest_integer_distance(d) > INTEGER_GUARD {
            let gc = gamma(c)?;
            let coef_a = gc * gamma(d)? * rgamma(c - a) * rgamma(c - b);
            let coef_b = gc * gamma(-d)? * rgamma(a) * rgamma(b);
            let w_max = 1.0 - TRANSFORM_THRESHOLD;
            Some(Transform {
                coef_a,
                coef_b,
                exponent: d,
                first: SeriesTable::new(a, b, 1.0 - d, w_max),
                second: SeriesTable::new(c - a, c - b, 1.0 + d, w_max),
            })
        } else {
            None
        };
        Ok(Self {
            direct: SeriesTable::new(a, b, c, TRANSFORM_THRESHOLD),
            transform,
        })
    }

    /// `₂F₁(a, b; c; z)`.
    pub fn eval(&self, z: f64) -> Result<Complex> {
        self.eval_detailed(z).map(|(v, _)| v)
    }

    /// Value together with the cancellation condition number of the sum used.
    pub fn eval_detailed(&self, z: f64) -> Result<(Complex, f64)> {
        check_z(z)?;
        match &self.transform {
            Some(t) if z > TRANSFORM_THRESHOLD => {
                let w = 1.0 - z;
                let (s1, k1) = t.first.eval(w)?;
                let (s2, k2) = t.second.eval(w)?;
                let p1 = t.coef_a * s1;
                let p2 = t.coef_b * (t.exponent * w.ln()).exp() * s2;
                let value = p1 + p2;
                let cond = (p1.norm() * k1 + p2.norm() * k2) / value.norm();
                Ok((value, cond))
            }
            _ => self.direct.eval(z),
        }
    }
}

/// `₂F₁(a, b; c; z)` for validated arguments.
pub fn gauss_2f1(args: &Hyp2F1Args) -> Result<Complex> {
    Hyp2F1Plan::new(args.a, args.b, args.c)?.eval(args.z)
}

/// Convenience form of [`gauss_2f1`].
pub fn hyp2f1(a: Complex, b: Complex, c: Complex, z: f64) -> Result<Complex> {
    gauss_2f1(&Hyp2F1Args::new(a, b, c, z)?)
}
