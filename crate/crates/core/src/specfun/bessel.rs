//! Bessel functions `J_ν(x)`, `Y_ν(x)` of real order and positive argument.
//!
//! Below `x = 2`, `J` comes from its ascending series and `Y` from Temme's
//! series; above, Steed's method combines the CF1 ratio `J'_ν/J_ν` with CF2
//! and the Wronskian. Large arguments use the Hankel
//! asymptotic expansion whenever its terms drop below machine precision.
//! Negative orders are reflected:
//!
//! ```text
//! J_{−α} = cos(απ) J_α − sin(απ) Y_α,    Y_{−α} = sin(απ) J_α + cos(απ) Y_α.
//! ```

use std::f64::consts::PI;

use crate::specfun::gamma::rgamma_real;
use crate::specfun::{cos_pi, sin_pi};
use crate::{Error, Result};

/// Largest supported |ν|.
pub const MAX_ORDER: f64 = 50.0;

const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-300;
const MAX_ITER: usize = 10_000;
const TEMME_SWITCH: f64 = 2.0;
const HANKEL_MIN_ARG: f64 = 25.0;

/// Taylor coefficients of 1/Γ(1+z) about z = 0.
const RGAMMA1P_TAYLOR: [f64; 29] = [
    1.0,
    5.772_156_649_015_328_655_5e-1,
    -6.558_780_715_202_539_024_5e-1,
    -4.200_263_503_409_523_702_1e-2,
    1.665_386_113_822_914_793_1e-1,
    -4.219_773_455_554_433_339e-2,
    -9.621_971_527_876_973_032_1e-3,
    7.218_943_246_663_099_902_5e-3,
    -1.165_167_591_859_065_168_7e-3,
    -2.152_416_741_149_509_751_9e-4,
    1.280_502_823_881_161_955_1e-4,
    -2.013_485_478_078_823_868_6e-5,
    -1.250_493_482_142_670_630_7e-6,
    1.133_027_231_981_695_928_6e-6,
    -2.056_338_416_977_607_073_4e-7,
    6.116_095_104_481_416_087_2e-9,
    5.002_007_644_469_222_945_4e-9,
    -1.181_274_570_487_020_044_1e-9,
    1.043_426_711_691_100_539_8e-10,
    7.782_263_439_905_070_814_3e-12,
    -3.696_805_618_642_205_978_7e-12,
    5.100_370_287_454_475_753_7e-13,
    -2.058_326_053_566_506_635_8e-14,
    -5.348_122_539_423_017_820_3e-15,
    1.226_778_628_238_260_840_9e-15,
    -1.181_259_301_697_458_833_7e-16,
    1.186_692_254_751_600_374_6e-18,
    1.412_380_655_318_031_857_3e-18,
    -2.298_745_684_435_370_22e-19,
];

fn check_args(nu: f64, x: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::NonPositiveArgument(x));
    }
    if !(nu.is_finite() && nu.abs() <= MAX_ORDER) {
        return Err(Error::OrderOutOfRange(nu));
    }
    Ok(())
}

/// `(J_ν(x), Y_ν(x))` for `x > 0`, `|ν| <= 50`.
pub fn bessel_jy(nu: f64, x: f64) -> Result<(f64, f64)> {
    check_args(nu, x)?;
    if x >= HANKEL_MIN_ARG {
        if let Some(jy) = hankel(nu, x) {
            return Ok(jy);
        }
    }
    if nu >= 0.0 {
        return temme_steed(nu, x);
    }
    let alpha = -nu;
    let (j, y) = temme_steed(alpha, x)?;
    let (c, s) = (cos_pi(alpha), sin_pi(alpha));
    Ok((c * j - s * y, s * j + c * y))
}

/// Bessel function of the first kind.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    bessel_jy(nu, x).map(|(j, _)| j)
}

/// Bessel function of the second kind.
pub fn bessel_y(nu: f64, x: f64) -> Result<f64> {
    bessel_jy(nu, x).map(|(_, y)| y)
}

/// Hankel expansion; `None` when the terms stop decreasing before reaching
/// machine precision.
fn hankel(nu: f64, x: f64) -> Option<(f64, f64)> {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term: f64 = 1.0;
    let mut prev = f64::INFINITY;
    let mut converged = false;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        let mag = term.abs();
        if mag > prev {
            return None;
        }
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if mag <= EPS * 0.1 * p.abs().max(q.abs()) || term == 0.0 {
            converged = true;
            break;
        }
        prev = mag;
    }
    if !converged {
        return None;
    }
    // χ = x − (2ν+1)π/4, expanded so that x keeps its full precision.
    let phase = 0.25 * (2.0 * nu + 1.0);
    let (cp, sp) = (cos_pi(phase), sin_pi(phase));
    let (sx, cx) = x.sin_cos();
    let cos_chi = cx * cp + sx * sp;
    let sin_chi = sx * cp - cx * sp;
    let amp = (2.0 / (PI * x)).sqrt();
    Some((
        amp * (p * cos_chi - q * sin_chi),
        amp * (p * sin_chi + q * cos_chi),
    ))
}

/// Γ-related constants of Temme's series for |μ| <= 1/2:
/// `(gam1, gam2, 1/Γ(1+μ), 1/Γ(1−μ))`.
fn temme_gammas(mu: f64) -> (f64, f64, f64, f64) {
    let mu2 = mu * mu;
    let mut odd = 0.0;
    let mut even = 0.0;
    let mut pow = 1.0;
    for pair in RGAMMA1P_TAYLOR.chunks(2) {
        even += pair[0] * pow;
        if let Some(&c) = pair.get(1) {
            odd += c * pow;
        }
        pow *= mu2;
    }
    let gam1 = -odd;
    let gam2 = even;
    (gam1, gam2, gam2 - mu * gam1, gam2 + mu * gam1)
}

/// Evaluation for ν >= 0: below `x = 2` the ascending series for `J` and
/// Temme's series for `Y`, otherwise Steed's method.
fn temme_steed(nu: f64, x: f64) -> Result<(f64, f64)> {
    if x < TEMME_SWITCH {
        let nl = (nu + 0.5) as usize;
        let xmu = nu - nl as f64;
        let (ymu, ymu1) = temme_y(xmu, x)?;
        let j = j_series(nu, x)?;
        return Ok((j, upward_y(ymu, ymu1, xmu, nl, x)));
    }
    steed(nu, x)
}

/// Ascending series `J_ν(x) = (x/2)^ν Σ (−x²/4)^k / (k! Γ(ν+k+1))`.
fn j_series(nu: f64, x: f64) -> Result<f64> {
    let lead = (nu * (0.5 * x).ln()).exp() * rgamma_real(nu + 1.0);
    let q = -0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..=MAX_ITER {
        let kf = k as f64;
        term *= q / (kf * (nu + kf));
        sum += term;
        if term.abs() < EPS * sum.abs() {
            return Ok(lead * sum);
        }
    }
    Err(Error::NotConverged {
        what: "Bessel J series",
        budget: MAX_ITER,
        estimate: term.abs(),
    })
}

/// `Y_{μ+k}` for `k = nl` by forward recurrence from `(Y_μ, Y_{μ+1})`.
fn upward_y(ymu: f64, ymu1: f64, xmu: f64, nl: usize, x: f64) -> f64 {
    let xi2 = 2.0 / x;
    let (mut ym, mut y1) = (ymu, ymu1);
    for i in 1..=nl {
        let next = (xmu + i as f64) * xi2 * y1 - ym;
        ym = y1;
        y1 = next;
    }
    ym
}

/// Temme's series for `(Y_μ(x), Y_{μ+1}(x))`, `|μ| <= 1/2`, `x < 2`.
fn temme_y(xmu: f64, x: f64) -> Result<(f64, f64)> {
    let xmu2 = xmu * xmu;
    let x2 = 0.5 * x;
    let pimu = PI * xmu;
    let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
    let d = -x2.ln();
    let e = xmu * d;
    let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
    let (gam1, gam2, gampl, gammi) = temme_gammas(xmu);
    let mut ff = 2.0 / PI * fact * (gam1 * e.cosh() + gam2 * fact2 * d);
    let e = e.exp();
    let mut p = e / (gampl * PI);
    let mut q = 1.0 / (e * PI * gammi);
    let pimu2 = 0.5 * pimu;
    let fact3 = if pimu2.abs() < EPS { 1.0 } else { pimu2.sin() / pimu2 };
    let r = PI * pimu2 * fact3 * fact3;
    let mut c = 1.0;
    let d = -x2 * x2;
    let mut sum = ff + r * q;
    let mut sum1 = p;
    for i in 1..=MAX_ITER {
        let fi = i as f64;
        ff = (fi * ff + p + q) / (fi * fi - xmu2);
        c *= d / fi;
        p /= fi - xmu;
        q /= fi + xmu;
        let del = c * (ff + r * q);
        sum += del;
        let del1 = c * p - fi * del;
        sum1 += del1;
        if del.abs() < (1.0 + sum.abs()) * EPS {
            return Ok((-sum, -sum1 * 2.0 / x));
        }
    }
    Err(Error::NotConverged {
        what: "Temme series",
        budget: MAX_ITER,
        estimate: f64::NAN,
    })
}

/// Steed's method (CF1 for `J'/J`, CF2 for `(J' + iY')/(J + iY)`), `x >= 2`.
fn steed(nu: f64, x: f64) -> Result<(f64, f64)> {
    let nl = (nu - x + 1.5).max(0.0) as usize;
    let xmu = nu - nl as f64;
    let xmu2 = xmu * xmu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let w = xi2 / PI;

    // CF1: f_ν = J'_ν/J_ν by modified Lentz.
    let mut isign = 1.0;
    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    let mut converged = false;
    for _ in 0..MAX_ITER {
        b += xi2;
        d = b - d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b - 1.0 / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if d < 0.0 {
            isign = -isign;
        }
        if (del - 1.0).abs() < EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NotConverged {
            what: "Bessel CF1",
            budget: MAX_ITER,
            estimate: f64::NAN,
        });
    }

    // Downward recurrence to the reduced order μ (unnormalized; the ratio
    // 2ν/x stays below ν here, so no rescaling is needed).
    let mut rjl = isign;
    let mut rjpl = h * rjl;
    let rjl1 = rjl;
    let mut fact = nu * xi;
    for _ in 0..nl {
        let rjtemp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
    }
    if rjl == 0.0 {
        rjl = EPS;
    }
    let f = rjpl / rjl;

    let mut a = 0.25 - xmu2;
    let mut p = -0.5 * xi;
    let mut q = 1.0;
    let br = 2.0 * x;
    let mut bi = 2.0;
    let mut fact = a * xi / (p * p + q * q);
    let mut cr = br + q * fact;
    let mut ci = bi + p * fact;
    let mut den = br * br + bi * bi;
    let mut dr = br / den;
    let mut di = -bi / den;
    let mut dlr = cr * dr - ci * di;
    let mut dli = cr * di + ci * dr;
    let mut temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    let mut converged = false;
    for i in 2..=MAX_ITER {
        a += 2.0 * (i - 1) as f64;
        bi += 2.0;
        dr = a * dr + br;
        di = a * di + bi;
        if dr.abs() + di.abs() < FPMIN {
            dr = FPMIN;
        }
        fact = a / (cr * cr + ci * ci);
        cr = br + cr * fact;
        ci = bi - ci * fact;
        if cr.abs() + ci.abs() < FPMIN {
            cr = FPMIN;
        }
        den = dr * dr + di * di;
        dr /= den;
        di /= -den;
        dlr = cr * dr - ci * di;
        dli = cr * di + ci * dr;
        temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        if (dlr - 1.0).abs() + dli.abs() < EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NotConverged {
            what: "Bessel CF2",
            budget: MAX_ITER,
            estimate: f64::NAN,
        });
    }
    let gam = (p - f) / q;
    let mag = (w / ((p - f) * gam + q)).sqrt();
    let rjmu = mag.copysign(rjl);
    let rymu = rjmu * gam;
    let rymup = rymu * (p + q / gam);
    let ry1 = xmu * xi * rymu - rymup;

    let j = rjl1 * (rjmu / rjl);
    Ok((j, upward_y(rymu, ry1, xmu, nl, x)))
}
