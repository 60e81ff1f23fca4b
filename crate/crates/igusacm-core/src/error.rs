//! Error type shared by the whole pipeline.

use alloc::string::String;
use core::fmt;

/// Errors surfaced by the pipeline.
///
/// The variants are coarse on purpose: callers either retry with more
/// precision ([`Error::PrecisionExhausted`]), give up on the input
/// ([`Error::InvalidField`], [`Error::InvalidInput`]), or give up on the
/// machine ([`Error::ResourceBudget`]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// The `(Δ₀, a, b)` triple does not describe a primitive quartic CM field.
    InvalidField(String),
    /// A precondition on an operation's input failed (broken triple, matrix
    /// not antisymmetric, point not in the required domain, ...).
    InvalidInput(String),
    /// A certified comparison could not be decided at the working precision;
    /// retrying with a higher precision may succeed.
    PrecisionExhausted(String),
    /// Rounding to a rational was ambiguous even after the automatic retry.
    RoundingAmbiguous(String),
    /// A desk-scale enumeration (class group, principality search, sieve)
    /// exceeded its configured budget.
    ResourceBudget(String),
    /// A requested precision exceeds the configured hard cap.
    PrecisionCap { requested: u32, cap: u32 },
    /// The point corresponds to a product of elliptic curves (`h₁₀ = 0`), so
    /// there is no genus-2 curve to take invariants of.
    ProductOfEllipticCurves,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidField(msg) => write!(f, "invalid CM field: {msg}"),
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::PrecisionExhausted(msg) => {
                write!(f, "insufficient precision: {msg}")
            }
            Error::RoundingAmbiguous(msg) => {
                write!(f, "ambiguous rational rounding: {msg}")
            }
            Error::ResourceBudget(msg) => write!(f, "resource budget exceeded: {msg}"),
            Error::PrecisionCap { requested, cap } => {
                write!(f, "requested precision {requested} exceeds cap {cap}")
            }
            Error::ProductOfEllipticCurves => {
                write!(f, "h10 vanishes: the surface is a product of elliptic curves")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
