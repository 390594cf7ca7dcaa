//! Mellin transforms, inverse contour integrals, Parseval pairing, class norms.

use std::f64::consts::PI;

use weber_core::mellin::{
    class_norm, mellin_forward, mellin_inverse, parseval_check, ContourSpec, MellinRepresentation,
};
use weber_core::quadrature::QuadratureConfig;
use weber_core::specfun::{beta, gamma};
use weber_core::{Complex, Error, Result};

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn real(f: impl Fn(f64) -> f64 + Sync) -> impl Fn(f64) -> Result<Complex> + Sync {
    move |x| Ok(c(f(x), 0.0))
}

fn gamma_symbol(contour: ContourSpec) -> MellinRepresentation {
    MellinRepresentation::new(gamma, contour, 0.0, 0.0).unwrap()
}

/// Φ(s) = Γ(s+p)Γ(q−s), the symbol of Γ(p+q) x^p (1+x)^{−p−q}.
fn beta_symbol(p: f64, q: f64, contour: ContourSpec, c1: f64, c2: f64) -> MellinRepresentation {
    MellinRepresentation::new(move |s| Ok(gamma(s + p)? * gamma(q - s)?), contour, c1, c2).unwrap()
}

fn beta_function(p: f64, q: f64) -> impl Fn(f64) -> f64 + Sync + Copy {
    let g = gamma(c(p + q, 0.0)).unwrap().re;
    move |x| g * x.powf(p) * (1.0 + x).powf(-p - q)
}

#[test]
fn forward_transform_of_exponential() {
    let cfg = QuadratureConfig::default();
    let one = mellin_forward(real(|x| (-x).exp()), c(2.0, 0.0), &cfg).unwrap();
    assert!((one.value - 1.0).norm() <= 1e-8);
    let half = mellin_forward(real(|x| (-x).exp()), c(0.5, 0.0), &cfg).unwrap();
    assert!((half.value - PI.sqrt()).norm() <= 1e-8);
    let s = c(0.3, 4.0);
    let off_axis = mellin_forward(real(|x| (-x).exp()), s, &cfg).unwrap();
    assert!((off_axis.value - gamma(s).unwrap()).norm() <= 1e-8);
}

#[test]
fn forward_transform_of_beta_kernel() {
    let cfg = QuadratureConfig::default();
    let r = mellin_forward(real(|x| x * x * (1.0 + x).powi(-3)), c(0.5, 0.0), &cfg).unwrap();
    let want = beta(c(2.5, 0.0), c(0.5, 0.0)).unwrap();
    assert!((r.value - want).norm() <= 1e-8 * want.norm(), "{}", r.value);
}

#[test]
fn forward_transform_reports_non_finite_integrand() {
    let r = mellin_forward(real(|_| f64::NAN), c(0.5, 0.0), &QuadratureConfig::default());
    assert!(matches!(r, Err(Error::NonFinite(_))));
}

#[test]
fn inverse_of_gamma_is_exponential() {
    let rep = gamma_symbol(ContourSpec::new(0.5, 40.0, 16).unwrap());
    for x in [0.5, 1.0, 2.0] {
        let r = mellin_inverse(&rep, x).unwrap();
        assert!((r.value - (-x).exp()).norm() <= 1e-8, "x={x}: {}", r.value);
        assert!(r.abs_error_estimate <= 1e-8);
    }
}

#[test]
fn inverse_of_beta_symbol() {
    let spec = ContourSpec::new(-0.5, 30.0, 16).unwrap();
    let rep = beta_symbol(2.0, 1.0, spec, 0.0, 0.0);
    let r = mellin_inverse(&rep, 2.0).unwrap();
    let want = 2.0 * 4.0 / 27.0;
    assert!((r.value.re - want).abs() <= 1e-10, "{}", r.value);
    // Denser, longer contour as oracle.
    let dense = rep.with_contour(spec.with_t_max(60.0)).unwrap();
    let dense = ContourSpec { n_panels: 32, ..dense.contour };
    let oracle = mellin_inverse(&rep.with_contour(dense).unwrap(), 2.0).unwrap();
    assert!((oracle.value - r.value).norm() <= 1e-12);
}

#[test]
fn inverse_of_zero_symbol_is_exactly_zero() {
    let rep = MellinRepresentation::zero(ContourSpec::default()).unwrap();
    let r = mellin_inverse(&rep, 1.7).unwrap();
    assert_eq!(r.value, c(0.0, 0.0));
    assert_eq!(r.abs_error_estimate, 0.0);
}

#[test]
fn inverse_rejects_non_members_and_short_contours() {
    let slow = MellinRepresentation::new(|s| Ok(1.0 / (1.0 + s * s)), ContourSpec::default(), 0.5, 0.0).unwrap();
    assert!(matches!(mellin_inverse(&slow, 1.0), Err(Error::NonMember { .. })));
    let short = gamma_symbol(ContourSpec::new(0.5, 3.0, 8).unwrap());
    assert!(matches!(mellin_inverse(&short, 1.0), Err(Error::TailBound { .. })));
    assert!(matches!(mellin_inverse(&short, 0.0), Err(Error::NonPositiveArgument(_))));
}

#[test]
fn round_trip_through_both_transforms() {
    let cfg = QuadratureConfig::default();
    for (p, q) in [(1.0, 1.0), (1.0, 2.0), (2.0, 1.0), (2.0, 2.0)] {
        let mu = -0.5;
        let rep = beta_symbol(p, q, ContourSpec::new(mu, 16.0, 8).unwrap(), 0.0, 0.0);
        let f = |x: f64| mellin_inverse(&rep, x).map(|r| r.value);
        for t in [-3.0, -1.0, 0.0, 0.5, 2.0] {
            let s0 = c(mu, t);
            let back = mellin_forward(f, s0, &cfg).unwrap().value;
            let want = rep.phi(s0).unwrap();
            assert!((back - want).norm() <= 1e-6 * want.norm(), "p={p} q={q} s0={s0}: {back} vs {want}");
        }
    }
}

#[test]
fn inverse_is_contour_independent() {
    let spec = ContourSpec::new(-0.5, 30.0, 16).unwrap();
    let rep = beta_symbol(2.0, 1.0, spec, 0.0, 0.0);
    let shifted = rep.with_contour(spec.with_mu(0.4)).unwrap();
    for x in [0.3, 1.0, 3.0, 10.0] {
        let a = mellin_inverse(&rep, x).unwrap().value;
        let b = mellin_inverse(&shifted, x).unwrap().value;
        assert!((a - b).norm() <= 1e-7, "x={x}");
        assert!((a.re - beta_function(2.0, 1.0)(x)).abs() <= 1e-10, "x={x}");
    }
}

#[test]
fn parseval_pairs() {
    let cfg = QuadratureConfig::default();
    let r = parseval_check(real(|x| (-x).exp()), real(|x| (-x).exp()), 0.5, &cfg).unwrap();
    assert!((r.diagnostic("left_re").unwrap() - 0.5).abs() <= 1e-9);
    assert!(r.value.re <= 1e-7, "{}", r.value.re);
    let r = parseval_check(real(|x| (-x).exp()), real(|x| x * (-x).exp()), 0.5, &cfg).unwrap();
    assert!((r.diagnostic("left_re").unwrap() - 0.25).abs() <= 1e-9);
    assert!(r.value.re <= 1e-7, "{}", r.value.re);
    let r = parseval_check(real(|x| x * x * (1.0 + x).powi(-3)), real(|x| (-x).exp()), 0.5, &cfg).unwrap();
    assert!(r.value.re <= 1e-6, "{}", r.value.re);
}

#[test]
fn class_norm_of_beta_symbol() {
    let rep = beta_symbol(2.0, 1.0, ContourSpec::new(-0.5, 30.0, 16).unwrap(), 0.0, 0.0);
    let n30 = class_norm(&rep).unwrap();
    let n60 = class_norm(&rep.with_contour(ContourSpec::new(-0.5, 60.0, 16).unwrap()).unwrap()).unwrap();
    assert!(n30.converged && n60.converged);
    assert!(n30.value.re.is_finite() && n30.value.re > 0.0);
    assert!((n30.value.re - n60.value.re).abs() <= 1e-8 * n60.value.re);
    let weighted = class_norm(&rep.with_class(0.5, 1.0).unwrap()).unwrap();
    assert!(weighted.converged && weighted.value.re.is_finite());
    assert!(weighted.value.re > n30.value.re);
}

#[test]
fn polynomial_decay_is_not_a_member() {
    let rep = MellinRepresentation::new(|s| Ok(1.0 / (1.0 + s * s)), ContourSpec::default(), 0.5, 0.0).unwrap();
    let r = class_norm(&rep).unwrap();
    assert!(!r.converged);
    assert!(r.diagnostic("shrink").unwrap() < 1.0);
}

#[test]
fn class_inclusion_ordering() {
    // Convergence for (c1, c2) implies convergence for every (d1, d2) with
    // 2 sign(c1 − d1) + sign(c2 − d2) ≥ 0.
    let spec = ContourSpec::new(-0.5, 20.0, 16).unwrap();
    let symbols: Vec<MellinRepresentation> = vec![
        beta_symbol(2.0, 1.0, spec, 0.0, 0.0),
        beta_symbol(1.0, 1.0, spec, 0.0, 0.0),
        MellinRepresentation::new(|s| Ok(gamma(s + 1.0)? * gamma(-s)?.powi(0)), spec, 0.0, 0.0).unwrap(),
        MellinRepresentation::new(|s: Complex| Ok((s * s).exp()), spec, 0.0, 0.0).unwrap(),
    ];
    let classes = [(0.5, 1.0), (0.5, 0.0), (0.0, 1.0), (0.0, 0.0), (1.0, 0.0)];
    let sign = |v: f64| if v > 0.0 { 1 } else if v < 0.0 { -1 } else { 0 };
    for rep in &symbols {
        for &(c1, c2) in &classes {
            if !class_norm(&rep.with_class(c1, c2).unwrap()).unwrap().converged {
                continue;
            }
            for &(d1, d2) in &classes {
                if 2 * sign(c1 - d1) + sign(c2 - d2) >= 0 {
                    let smaller = class_norm(&rep.with_class(d1, d2).unwrap()).unwrap();
                    assert!(smaller.converged, "({c1},{c2}) converges but ({d1},{d2}) does not");
                }
            }
        }
    }
}

#[test]
fn class_norm_rejects_imaginary_axis() {
    let rep = gamma_symbol(ContourSpec::new(0.0, 10.0, 8).unwrap());
    assert!(matches!(class_norm(&rep), Err(Error::InvalidConfig(_))));
}
