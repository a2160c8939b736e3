use thiserror::Error;

/// Errors shared across the crate. Every fallible operation narrows its
/// failure modes to a subset of these variants; the CLI maps them onto the
/// documented exit codes.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("division by zero")]
    DivisionByZero,

    /// A subtraction (or a sum) cancelled every carried digit, so the true
    /// valuation of the result is unknown at the working precision.
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("out of domain: {0}")]
    OutOfDomain(String),

    /// Hensel lifting was asked to refine a residue that is a root of the
    /// reduction but not a simple one (derivative vanishes mod p).
    #[error("residue {residue} is not a simple root mod {prime}")]
    NotSimpleRoot { residue: u64, prime: u64 },

    /// Hensel lifting was asked to refine a residue that is not even a root
    /// of the reduction mod p.
    #[error("residue {residue} is not a root mod {prime}")]
    NotRootModP { residue: u64, prime: u64 },

    #[error("map evaluated at a zero of its denominator")]
    PoleHit,

    #[error("not a fixed point: |f(x)-x|_p = p^{norm_exponent} exceeds tolerance p^-{tolerance}")]
    NotFixed {
        norm_exponent: i64,
        tolerance: i64,
    },

    #[error("regime violation: {0}")]
    RegimeViolation(String),

    /// The partition function vanished for the supplied boundary field;
    /// no measure exists for that field.
    #[error("partition function is zero: no measure for this field")]
    ZeroPartition,

    #[error("enumeration guard exceeded: {0}")]
    EnumerationGuard(String),

    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("bad field: {0}")]
    BadField(String),

    /// Two symbol sequences agree on their whole (finite) common prefix, so
    /// the dynamical distance is not determined at this depth.
    #[error("sequences agree on their full common prefix; distance undetermined")]
    IdenticalPrefix,
}

pub type Result<T> = std::result::Result<T, Error>;
