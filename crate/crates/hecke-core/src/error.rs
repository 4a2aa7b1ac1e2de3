//! Crate-wide error type.

use std::fmt;

/// Errors produced by domain operations.
///
/// Every variant names the violated precondition; the CLI maps all of them to
/// exit code 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// `p` passed to field construction is not prime.
    NonPrime(u64),
    /// Zero input where a nonzero rational function is required.
    ZeroInput,
    /// The place is not a finite place different from the distinguished one.
    BadPlace,
    /// Both entries of a projective row are zero.
    ZeroRow,
    /// Matrix with zero determinant.
    SingularMatrix,
    /// Upper-entry support lies outside the exponent range `[1, m-1]`.
    BadSupport,
    /// Operator descriptor not supported by the requested operation.
    UnsupportedDescriptor(String),
    /// Window radius too small for the requested eigen computation.
    RadiusTooSmall { radius: u32, needed: u32 },
    /// Eigenform propagation cannot determine any further value.
    Stuck(String),
    /// Seed of an eigenform propagation is not exactly the nucleus.
    SeedDomainMismatch(String),
    /// An enumeration would exceed the configured budget.
    BudgetExceeded { needed: u64, budget: u64 },
    /// Coset representatives failed the disjointness / membership checks.
    RepCheckFailed(String),
    /// Equivalence-oracle classes failed the transitivity audit.
    OracleInconsistency(String),
    /// Text input does not match the grammar.
    Parse(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonPrime(p) => write!(f, "{p} is not prime"),
            Error::ZeroInput => write!(f, "input rational function is zero"),
            Error::BadPlace => write!(f, "place must be finite and different from the place of t"),
            Error::ZeroRow => write!(f, "projective row (0, 0) has no normalization"),
            Error::SingularMatrix => write!(f, "matrix determinant is zero"),
            Error::BadSupport => {
                write!(f, "upper entry has support outside the exponent range [1, m-1]")
            }
            Error::UnsupportedDescriptor(msg) => write!(f, "unsupported descriptor: {msg}"),
            Error::RadiusTooSmall { radius, needed } => {
                write!(f, "radius {radius} too small, need at least {needed}")
            }
            Error::Stuck(msg) => write!(f, "eigenform propagation stuck: {msg}"),
            Error::SeedDomainMismatch(msg) => write!(f, "seed domain mismatch: {msg}"),
            Error::BudgetExceeded { needed, budget } => {
                write!(f, "enumeration needs {needed} candidates, budget is {budget}")
            }
            Error::RepCheckFailed(msg) => write!(f, "coset representative check failed: {msg}"),
            Error::OracleInconsistency(msg) => write!(f, "equivalence oracle inconsistency: {msg}"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}
