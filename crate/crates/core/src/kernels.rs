//! Bessel cross-product kernels.
//!
//! ```text
//! C_ν(α, β)  = J_ν(α) Y_ν(β) − Y_ν(α) J_ν(β)
//! K_ν(x, λ)  = J_ν(xλ) Y_{ν+1}(aλ) − Y_ν(xλ) J_{ν+1}(aλ)
//! ```
//!
//! For large `λ`, `K_ν(x, λ) ≈ −2 cos(λ(x − a)) / (πλ√(xa))`, and at `x = a`
//! the Wronskian gives `K_ν(a, λ) = −2/(πaλ)` exactly.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::specfun::bessel_jy;
use crate::{Error, Result};

/// Open interval of orders for which the explicit inverse is available.
pub const SOLVER_ORDER_RANGE: (f64, f64) = (-1.0, -0.5);

/// The pair `(ν, a)` fixing one member of the kernel family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelParams {
    pub nu: f64,
    pub a: f64,
}

impl KernelParams {
    pub fn new(nu: f64, a: f64) -> Result<Self> {
        if !nu.is_finite() {
            return Err(Error::OrderOutOfRange(nu));
        }
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::NonPositiveArgument(a));
        }
        Ok(Self { nu, a })
    }

    /// Checks `ν ∈ (−1, −1/2)`.
    pub fn require_solver_range(&self) -> Result<()> {
        let (lo, hi) = SOLVER_ORDER_RANGE;
        if self.nu > lo && self.nu < hi {
            Ok(())
        } else {
            Err(Error::OrderOutsideRange {
                nu: self.nu,
                lo,
                hi,
            })
        }
    }

    /// Checks `x > a`.
    pub fn require_outside(&self, x: f64) -> Result<()> {
        if x > self.a && x.is_finite() {
            Ok(())
        } else {
            Err(Error::BelowInnerRadius { x, a: self.a })
        }
    }
}

/// `C_ν(α, β)`.
pub fn kernel_c(nu: f64, alpha: f64, beta: f64) -> Result<f64> {
    let (ja, ya) = bessel_jy(nu, alpha)?;
    let (jb, yb) = bessel_jy(nu, beta)?;
    Ok(ja * yb - ya * jb)
}

/// `K_ν(x, λ)` for the family member `p`.
pub fn weber_kernel(p: KernelParams, x: f64, lambda: f64) -> Result<f64> {
    let (jx, yx) = bessel_jy(p.nu, x * lambda)?;
    let (ja, ya) = bessel_jy(p.nu + 1.0, p.a * lambda)?;
    Ok(jx * ya - yx * ja)
}

/// Leading large-`λ` term of [`weber_kernel`], accurate when `λ·min(x, a) ≳ 10`.
pub fn kernel_asymptotic(p: KernelParams, x: f64, lambda: f64) -> f64 {
    -2.0 * (lambda * (x - p.a)).cos() / (PI * lambda * (x * p.a).sqrt())
}

/// `K_ν(·, λ)` with the `aλ` factors evaluated once, for integrals in `x`
/// (or `t`) at fixed `λ`.
#[derive(Debug, Clone, Copy)]
pub struct KernelAtLambda {
    nu: f64,
    lambda: f64,
    j_a: f64,
    y_a: f64,
}

impl KernelAtLambda {
    pub fn new(p: KernelParams, lambda: f64) -> Result<Self> {
        let (j_a, y_a) = bessel_jy(p.nu + 1.0, p.a * lambda)?;
        Ok(Self {
            nu: p.nu,
            lambda,
            j_a,
            y_a,
        })
    }

    /// `J²_{ν+1}(aλ) + Y²_{ν+1}(aλ)`.
    pub fn modulus_squared(&self) -> f64 {
        self.j_a * self.j_a + self.y_a * self.y_a
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let (jx, yx) = bessel_jy(self.nu, x * self.lambda)?;
        Ok(jx * self.y_a - yx * self.j_a)
    }

    /// `C_{ν+1}(λx, λa)`.
    pub fn cross(&self, x: f64) -> Result<f64> {
        let (jx, yx) = bessel_jy(self.nu + 1.0, x * self.lambda)?;
        Ok(jx * self.y_a - yx * self.j_a)
    }
}

/// Which Bessel function a derivative identity is applied to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BesselKind {
    J,
    Y,
}

/// Which of the two lowering/raising identities to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IdentitySign {
    /// `x^{−ν} d/dx (x^ν B_ν) = B_{ν−1}`.
    Plus,
    /// `x^{ν} d/dx (x^{−ν} B_ν) = −B_{ν+1}`.
    Minus,
}

fn bessel(kind: BesselKind, nu: f64, x: f64) -> Result<f64> {
    let (j, y) = bessel_jy(nu, x)?;
    Ok(match kind {
        BesselKind::J => j,
        BesselKind::Y => y,
    })
}

/// Fourth-order central difference.
fn central4(g: &impl Fn(f64) -> Result<f64>, x: f64, h: f64) -> Result<f64> {
    Ok((-g(x + 2.0 * h)? + 8.0 * g(x + h)? - 8.0 * g(x - h)? + g(x - 2.0 * h)?) / (12.0 * h))
}

/// Derivative by a fourth-order central difference with step `x·1e−4`,
/// improved by one Richardson extrapolation against step `x·5e−5`.
pub fn richardson_derivative(g: impl Fn(f64) -> Result<f64>, x: f64) -> Result<f64> {
    let h = x * 1e-4;
    if !(h >= f64::MIN_POSITIVE) || x + 0.5 * h == x || x - 2.0 * h <= 0.0 {
        return Err(Error::StepUnderflow(x));
    }
    let coarse = central4(&g, x, h)?;
    let fine = central4(&g, x, 0.5 * h)?;
    Ok((16.0 * fine - coarse) / 15.0)
}

/// Defect of the derivative identity for `B_ν ∈ {J_ν, Y_ν}` at `x`.
pub fn derivative_identity_check(
    nu: f64,
    x: f64,
    which: BesselKind,
    sign: IdentitySign,
) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::NonPositiveArgument(x));
    }
    let e = match sign {
        IdentitySign::Plus => nu,
        IdentitySign::Minus => -nu,
    };
    let scaled = |t: f64| Ok(t.powf(e) * bessel(which, nu, t)?);
    let lhs = x.powf(-e) * richardson_derivative(scaled, x)?;
    let rhs = match sign {
        IdentitySign::Plus => bessel(which, nu - 1.0, x)?,
        IdentitySign::Minus => -bessel(which, nu + 1.0, x)?,
    };
    Ok((lhs - rhs).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_validation() {
        assert!(KernelParams::new(-0.75, 1.0).is_ok());
        assert!(matches!(KernelParams::new(-0.75, 0.0), Err(Error::NonPositiveArgument(_))));
        assert!(matches!(KernelParams::new(f64::NAN, 1.0), Err(Error::OrderOutOfRange(_))));
        let p = KernelParams::new(0.25, 1.0).unwrap();
        assert!(matches!(p.require_solver_range(), Err(Error::OrderOutsideRange { .. })));
        assert!(matches!(p.require_outside(1.0), Err(Error::BelowInnerRadius { .. })));
        assert!(p.require_outside(1.5).is_ok());
    }

    #[test]
    fn cached_kernel_matches_direct() {
        let p = KernelParams::new(-0.6, 0.5).unwrap();
        let k = KernelAtLambda::new(p, 3.0).unwrap();
        for x in [0.5, 1.0, 7.5] {
            assert_eq!(k.eval(x).unwrap(), weber_kernel(p, x, 3.0).unwrap());
            assert_eq!(k.cross(x).unwrap(), kernel_c(p.nu + 1.0, 3.0 * x, 3.0 * p.a).unwrap());
        }
    }

    #[test]
    fn step_underflow() {
        let r = derivative_identity_check(0.5, 1e-320, BesselKind::J, IdentitySign::Plus);
        assert!(matches!(r, Err(Error::StepUnderflow(_))));
    }
}
