use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("exponent {0} outside the supported range (1 + 1e-6, 1e6)")]
    InvalidExponent(f64),

    #[error("exponents {p} and {q} are not conjugate (1/p + 1/q != 1)")]
    ExponentMismatch { p: f64, q: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid {field}: {reason}")]
    Invalid { field: &'static str, reason: String },

    #[error("index mask is empty")]
    EmptyMask,

    #[error("mask index {index} (1-based) outside 1..={len}")]
    MaskOutOfRange { index: usize, len: usize },

    #[error("point is not on the boundary: functional {value} vs radius {radius}")]
    NotOnBoundary { value: f64, radius: f64 },

    #[error("target point does not belong to the set")]
    Infeasible,

    #[error("set kind {set} cannot be applied to a {input}")]
    KindMismatch { set: &'static str, input: &'static str },

    #[error("function is not in the positive cone")]
    NotInCone,

    #[error("|lambda| = {0} exceeds 1; the covering constant of lambda*I is only defined here for |lambda| <= 1")]
    LambdaOutOfRange(f64),

    #[error("lambda {lambda} must lie in (l, 1] with l = {modulus}")]
    BadLambda { lambda: f64, modulus: f64 },

    #[error("alpha {alpha} must lie in ({modulus}, {lambda})")]
    AlphaOutOfRange { alpha: f64, modulus: f64, lambda: f64 },

    #[error("no convergence after {iterations} iterations (last step {last_step:.3e})")]
    NoConvergence { iterations: usize, last_step: f64 },

    #[error("iterate left the domain at iteration {iteration}: {point:?}")]
    LeftDomain { iteration: usize, point: Vec<f64> },

    #[error("unknown example id {0:?} (expected 6.7, 6.8 or 6.9)")]
    UnknownExample(String),
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Invalid { field, reason: reason.into() }
    }
}
