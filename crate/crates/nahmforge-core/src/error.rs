//! Error type shared by all nahmforge-core modules.

use crate::series::FracExponent;
use thiserror::Error;

/// Errors produced by exact series arithmetic and the higher-level engines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A monomial was requested at or above the truncation order, so the
    /// resulting series could not represent anything.
    #[error("monomial exponent {exponent} is not below the truncation order {order}")]
    EmptySeries {
        exponent: FracExponent,
        order: FracExponent,
    },

    /// Attempt to invert a series that is identically zero to its order.
    #[error("cannot invert a series that is zero to its truncation order")]
    NonInvertible,

    /// An infinite product whose factor exponents do not tend to +infinity.
    #[error("divergent infinite product: base exponent {0} is negative")]
    DivergentProduct(FracExponent),

    /// Series square root requires leading coefficient exactly 1 at exponent 0.
    #[error("series square root requires constant term 1, found leading term at {exponent} with coefficient {coeff}")]
    SqrtNonUnit { exponent: FracExponent, coeff: String },

    /// A parameter was outside its documented domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A limit computation failed to stabilize.
    #[error("convergence error: {0}")]
    Convergence(String),

    /// Malformed JSON input for one of the serialized types.
    #[error("parse error: {0}")]
    Parse(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
