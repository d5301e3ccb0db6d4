use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("matrix is not symplectic: det = {det:.15e}")]
    NotSymplectic { det: f64 },

    #[error("determinant drifted to {det:.15e} during composition")]
    DeterminantDrift { det: f64 },

    #[error("cannot multiply an empty list of propagators")]
    EmptyProduct,

    #[error("conjugating form w K^(+-1) w^-1 not found among conjugators of length <= {bound}")]
    NielsenFormNotFound { bound: usize },

    #[error("beta range [{lower}, {upper}] is invalid: {reason}")]
    InvalidRange {
        lower: f64,
        upper: f64,
        reason: &'static str,
    },

    #[error("hyperbolic or parabolic monodromy carries no Floquet quantum numbers")]
    NoFloquetQuantumNumbers,

    #[error("grid must be sorted ascending (violated at index {index})")]
    UnsortedGrid { index: usize },

    #[error("interval ratio 1 makes every point commutative; no discrete set exists")]
    CommutativeEverywhere,
}

pub type Result<T> = std::result::Result<T, Error>;

/// An orbit that left the numerically meaningful region.
///
/// `step` is the index of the first state whose magnitude exceeded the
/// escape threshold; `partial` holds every state before it.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("orbit escaped at step {step} (|state| > {threshold:e})")]
pub struct Escape<T: std::fmt::Debug> {
    pub step: usize,
    pub threshold: f64,
    pub partial: Vec<T>,
}

pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and > 0",
        })
    }
}

pub(crate) fn non_negative(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and >= 0",
        })
    }
}
