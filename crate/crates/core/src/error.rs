use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument must be positive and finite, got {0}")]
    NonPositiveArgument(f64),

    #[error("Bessel order {0} outside the supported range |nu| <= 50")]
    OrderOutOfRange(f64),

    #[error("gamma function pole at {re}{im:+}i")]
    GammaPole { re: f64, im: f64 },

    #[error("hypergeometric lower parameter c = {re}{im:+}i is at a pole")]
    HypergeometricPole { re: f64, im: f64 },

    #[error("hypergeometric argument z = {0} outside [0, 1)")]
    HypergeometricArgument(f64),

    #[error("{what} did not converge (budget {budget}, last error estimate {estimate:e})")]
    NotConverged {
        what: &'static str,
        budget: usize,
        estimate: f64,
    },

    #[error("Re s = {re} outside the open strip ({lo}, {hi})")]
    StripViolation { re: f64, lo: f64, hi: f64 },

    #[error("x = {x} must exceed the inner radius a = {a}")]
    BelowInnerRadius { x: f64, a: f64 },

    #[error("order nu = {nu} outside the admissible interval ({lo}, {hi})")]
    OrderOutsideRange { nu: f64, lo: f64, hi: f64 },

    #[error("phase frequency {0} is not positive: the oscillatory integral diverges")]
    DegeneratePhase(f64),

    #[error("integrand is not finite at {0}")]
    NonFinite(f64),

    #[error("integral diverges: {0}")]
    Divergent(String),

    #[error("representation is not a member of its class (tail shrink factor {shrink:e})")]
    NonMember { shrink: f64 },

    #[error("contour tail bound {bound:e} exceeds tolerance {tol:e}")]
    TailBound { bound: f64, tol: f64 },

    #[error("denominator J^2 + Y^2 underflowed at {0}")]
    DenominatorUnderflow(f64),

    #[error("finite-difference step underflow at x = {0}")]
    StepUnderflow(f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
