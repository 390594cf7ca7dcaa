//! Special functions consumed by the kernel transforms.
//!
//! All routines are pure and reentrant. Argument checks follow one rule: a
//! request that cannot be answered to the documented accuracy is an error, not
//! a NaN.

mod bessel;
mod gamma;
mod hyp2f1;

pub use bessel::{bessel_j, bessel_jy, bessel_y, MAX_ORDER};
pub use gamma::{beta, gamma, rgamma, POLE_TOLERANCE};
pub use hyp2f1::{gauss_2f1, hyp2f1, Hyp2F1Args, Hyp2F1Plan, SERIES_BUDGET};

use crate::Complex;

/// `sin(πx)`, exact at integers and half-integers.
pub fn sin_pi(x: f64) -> f64 {
    let r = x.rem_euclid(2.0);
    let n = (2.0 * r).round();
    let f = r - 0.5 * n;
    let arg = std::f64::consts::PI * f;
    match n as i64 {
        0 | 4 => arg.sin(),
        1 => arg.cos(),
        2 => -arg.sin(),
        _ => -arg.cos(),
    }
}

/// `cos(πx)`, exact at integers and half-integers.
pub fn cos_pi(x: f64) -> f64 {
    sin_pi(x + 0.5)
}

/// `sin(πz)` for complex `z`.
pub fn sin_pi_complex(z: Complex) -> Complex {
    let y = std::f64::consts::PI * z.im;
    Complex::new(sin_pi(z.re) * y.cosh(), cos_pi(z.re) * y.sinh())
}

/// `cos(πz)` for complex `z`.
pub fn cos_pi_complex(z: Complex) -> Complex {
    let y = std::f64::consts::PI * z.im;
    Complex::new(cos_pi(z.re) * y.cosh(), -sin_pi(z.re) * y.sinh())
}

/// `base^exponent` on the principal branch, `exp(exponent · ln base)`, for `base > 0`.
pub fn real_pow(base: f64, exponent: Complex) -> Complex {
    (exponent * base.ln()).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trig_pi_is_exact_on_lattice() {
        assert_eq!(sin_pi(1.0), 0.0);
        assert_eq!(sin_pi(-3.0), 0.0);
        assert_eq!(cos_pi(0.5), 0.0);
        assert_eq!(cos_pi(-1.5), 0.0);
        assert_eq!(sin_pi(0.5), 1.0);
        assert_eq!(cos_pi(1.0), -1.0);
        for &x in &[0.1, 0.37, -0.75, 2.3, 17.01] {
            assert!((sin_pi(x) - (std::f64::consts::PI * x).sin()).abs() < 1e-14);
            assert!((cos_pi(x) - (std::f64::consts::PI * x).cos()).abs() < 1e-14);
        }
    }

    #[test]
    fn complex_trig_matches_std() {
        let z = Complex::new(0.3, -1.2);
        let pz = z * std::f64::consts::PI;
        assert!((sin_pi_complex(z) - pz.sin()).norm() < 1e-13 * pz.sin().norm());
        assert!((cos_pi_complex(z) - pz.cos()).norm() < 1e-13 * pz.cos().norm());
    }
}
