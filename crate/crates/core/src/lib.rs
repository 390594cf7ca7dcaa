//! Numerical toolkit for the Weber-type integral equation
//!
//! ```text
//! ∫₀^∞ φ(λ) [J_ν(xλ) Y_{ν+1}(aλ) − Y_ν(xλ) J_{ν+1}(aλ)] dλ = f(x),   x > a > 0,
//! ```
//!
//! covering the forward transform (directly, and through a Mellin contour
//! integral of the closed-form kernel transform `F_ν(x, s)`), the explicit
//! inverse for `−1 < ν < −1/2`, and brute-force quadrature oracles for every
//! closed form.
//!
//! Module map:
//!
//! - [`specfun`]: Bessel `J_ν`, `Y_ν` of real order, complex gamma, beta, Gauss `₂F₁`.
//! - [`quadrature`]: finite, endpoint-singular and oscillatory improper integrals.
//! - [`mellin`]: forward/inverse Mellin transforms, Parseval pairing, class norms.
//! - [`kernels`]: the cross-product kernels and their asymptotics.
//! - [`closedform`]: `F_ν(x, s)` and the bound machinery around it.
//! - [`solver`]: forward transforms, the two inverse formulas, expansion checks.
//! - [`cli`]: the `weber` command-line front end.

// Reference constants are kept at the digits they were published with; NaN
// rejection relies on negated comparisons.
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod closedform;
mod error;
pub mod kernels;
pub mod mellin;
pub mod quadrature;
mod report;
pub mod solver;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
pub use report::EvaluationReport;

/// Complex scalar used throughout (contour points, transform values).
pub type Complex = num_complex::Complex64;
