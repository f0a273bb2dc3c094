//! # qeta
//!
//! Exact and modular q-series arithmetic for partition congruences.
//!
//! The crate computes t-color partition numbers p_{-t}(n) and Dedekind
//! eta-power expansions eta^r(delta z), applies Hecke operators T_l to
//! their coefficients mod l, evaluates the closed two-square /
//! x^2 + 3y^2 formulas for prime-index coefficients, and mechanically
//! verifies or refutes Ramanujan-type congruence families
//!
//! ```text
//! p_{-t}(l n + a) = 0 (mod l),    t = l s - r,   a = r(l^2 - 1)/24 mod l
//! ```
//!
//! at configurable desk scale.
//!
//! ## Quick tour
//!
//! ```
//! use qeta::qseries::TruncatedSeries;
//! use qeta::congruence::{verify_claim, CongruenceClaim, EngineConfig, Verdict};
//!
//! // p(5n + 4) = 0 (mod 5), Ramanujan's classic, as the (r, s) = (4, 1) claim:
//! let claim = CongruenceClaim::new(4, 5, 1).unwrap();
//! let report = verify_claim(&claim, 500, &EngineConfig::default()).unwrap();
//! assert_eq!(report.verdict, Verdict::HoldsToBound);
//!
//! // the partition numbers behind it:
//! let p = TruncatedSeries::euler_power(-1, 10);
//! assert_eq!(p.coeff(4), &num_bigint::BigInt::from(5));
//! ```
//!
//! The `book/` directory of the repository walks through the mathematics
//! chapter by chapter; its code snippets compile and run against this
//! crate as doctests (see the `guide` module below).

pub mod cm;
pub mod congruence;
pub mod error;
pub mod etaforms;
pub mod hecke;
pub mod qseries;

pub use error::{Error, Result};

// The mdbook chapters double as doctests so the guide can never drift
// from the API. rustdoc compiles every fenced rust block below when
// running `cargo test --doc`.
#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/qseries.md")]
    mod qseries {}
    #[doc = include_str!("../../../book/src/etaforms.md")]
    mod etaforms {}
    #[doc = include_str!("../../../book/src/hecke.md")]
    mod hecke {}
    #[doc = include_str!("../../../book/src/cm.md")]
    mod cm {}
    #[doc = include_str!("../../../book/src/congruences.md")]
    mod congruences {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
