//! Error type shared across the crate.

use thiserror::Error;

/// Errors raised by series construction, Hecke operators, quadratic
/// representation solvers and the congruence engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Series inversion requires a constant term of +1 or -1.
    #[error("cannot invert series: constant term {0} is not +1 or -1")]
    NonUnitConstant(String),

    /// A modulus smaller than 2 was supplied.
    #[error("modulus must be >= 2, got {0}")]
    ModulusTooSmall(u64),

    /// The (r, delta) pair is not one of the admissible eta-power specs.
    #[error("inadmissible eta power (r = {r}, delta = {delta})")]
    InadmissiblePair { r: u32, delta: u32 },

    /// The congruence engine only covers r in {4, 6, 8, 10, 14, 26}.
    #[error("r = {0} carries no congruence family")]
    UnsupportedFamily(u32),

    /// A prime was required.
    #[error("{0} is not prime")]
    NotPrime(u64),

    /// Progression primes 2 and 3 are outside every congruence family.
    #[error("prime {0} is too small: the offset formula requires l >= 5")]
    PrimeTooSmall(u64),

    /// Hecke application needs at least p coefficients.
    #[error("series precision {have} is below the Hecke prime {need}")]
    PrecisionBelowPrime { have: usize, need: usize },

    /// The prime does not split in the quadratic field required by the
    /// closed-form coefficient.
    #[error("prime {p} is not split for r = {r} (requires p = {class} mod {modulus})")]
    NotSplit { p: u64, r: u32, class: u64, modulus: u64 },

    /// A requested computation exceeds the configured precision cap.
    #[error("required precision {needed} exceeds the {backend} cap {cap}")]
    PrecisionOverflow { needed: usize, cap: usize, backend: &'static str },

    /// A witness scan ran out of coefficients before reaching the index
    /// where a witness is guaranteed.
    #[error("insufficient precision: need at least {needed} coefficients, have {have}")]
    InsufficientPrecision { needed: usize, have: usize },

    /// A witness scan completed without finding a witness.
    #[error("no witness found below index {scanned}")]
    NoWitnessFound { scanned: usize },

    /// special_prime_check requires l | t.
    #[error("special prime check requires l | t, got l = {ell}, t = {t}")]
    NotSpecialPrime { ell: u64, t: u64 },

    /// An exact division in a closed-form evaluation left a remainder.
    /// This indicates a normalization bug, never bad input.
    #[error("internal consistency failure: {0}")]
    Inconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
