//! Crate-wide error type.

use thiserror::Error;

/// Errors reported by the classification routines.
///
/// `NotInAm` is the mathematically meaningful rejection: the input algebra
/// does not have conductor exactly `x^m K[x]` (it contains an element of
/// degree 1 or of degree `m-1`, or is all of `K[x]`).  The other variants
/// are input-validation failures.
#[derive(Debug, Error)]
pub enum Error {
    /// The generated subalgebra is not in the class for this `m`.
    #[error("not an algebra with conductor x^{m} K[x]: {reason}")]
    NotInAm { m: usize, reason: String },

    /// A degree set that is not admissible for the given `m`.
    #[error("invalid degree set: {0}")]
    InvalidGamma(String),

    /// A scalar, polynomial, or parameter outside its documented domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Mixing values attached to different truncation levels.
    #[error("mismatched truncation: m = {left} vs m = {right}")]
    MismatchedTruncation { left: usize, right: usize },

    /// Text that does not parse as a polynomial or scalar.
    #[error("parse error: {0}")]
    Parse(String),

    /// An internal consistency check failed; indicates a bug in this crate.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
