//! Complex gamma function: Lanczos approximation (g = 607/128, 15 terms) on
//! `Re s >= 1/2`, reflection below.

use std::f64::consts::PI;

use crate::specfun::{sin_pi, sin_pi_complex};
use crate::{Complex, Error, Result};

/// Distance from a non-positive integer inside which gamma reports a pole.
pub const POLE_TOLERANCE: f64 = 1e-12;

const LANCZOS_G: f64 = 607.0 / 128.0;

const LANCZOS_COEFFS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    0.339_946_499_848_118_9e-4,
    0.465_236_289_270_485_76e-4,
    -0.983_744_753_048_795_6e-4,
    0.158_088_703_224_912_5e-3,
    -0.210_264_441_724_104_9e-3,
    0.217_439_618_115_212_64e-3,
    -0.164_318_106_536_763_9e-3,
    0.844_182_239_838_527_4e-4,
    -0.261_908_384_015_814_1e-4,
    0.368_991_826_595_316_2e-5,
];

const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

fn near_pole(s: Complex) -> bool {
    s.re <= POLE_TOLERANCE
        && s.im.abs() < POLE_TOLERANCE
        && (s.re - s.re.round()).abs() < POLE_TOLERANCE
}

/// ln Γ(s) for Re s >= 1/2 (any branch; only exponentiated).
fn ln_gamma_right(s: Complex) -> Complex {
    let mut series = Complex::new(LANCZOS_COEFFS[0], 0.0);
    for (k, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += c / (s + k as f64);
    }
    let t = s + LANCZOS_G + 0.5;
    (s + 0.5) * t.ln() - t + HALF_LN_TWO_PI + (series / s).ln()
}

/// Γ(s) for complex `s`.
///
/// Relative accuracy is about `1e-15 · (1 + |s| ln|s|)`, the conditioning of
/// Γ itself; non-positive integers (within [`POLE_TOLERANCE`]) are errors.
pub fn gamma(s: Complex) -> Result<Complex> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::NonFinite(s.re));
    }
    if near_pole(s) {
        return Err(Error::GammaPole { re: s.re, im: s.im });
    }
    if s.re >= 0.5 {
        return Ok(ln_gamma_right(s).exp());
    }
    // Γ(s) = π / (sin(πs) Γ(1−s))
    let reflected = ln_gamma_right(1.0 - s);
    let sine = sin_pi_complex(s);
    Ok(PI / (sine * reflected.exp()))
}

/// 1/Γ(s): entire, exactly zero at the poles of Γ.
pub fn rgamma(s: Complex) -> Complex {
    if s.im == 0.0 && s.re <= 0.0 && s.re == s.re.round() {
        return Complex::new(0.0, 0.0);
    }
    if s.re >= 0.5 {
        return (-ln_gamma_right(s)).exp();
    }
    sin_pi_complex(s) * ln_gamma_right(1.0 - s).exp() / PI
}

/// Euler beta function `Γ(a)Γ(b)/Γ(a+b)`.
pub fn beta(a: Complex, b: Complex) -> Result<Complex> {
    let ab = a + b;
    if near_pole(ab) {
        return Err(Error::GammaPole { re: ab.re, im: ab.im });
    }
    Ok(gamma(a)? * gamma(b)? * rgamma(ab))
}

/// `1/Γ(x)` for real `x`, zero at the poles.
pub(crate) fn rgamma_real(x: f64) -> f64 {
    if x <= 0.0 && x == x.round() {
        return 0.0;
    }
    if x >= 0.5 {
        return (-ln_gamma_right(Complex::new(x, 0.0))).exp().re;
    }
    sin_pi(x) * ln_gamma_right(Complex::new(1.0 - x, 0.0)).exp().re / PI
}
