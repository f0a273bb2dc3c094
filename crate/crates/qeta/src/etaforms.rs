//! The named generating functions: t-color partitions, Euler powers, and
//! eta powers F = q^(d r / 24) prod (1 - q^(d n))^r.
//!
//! An eta power is identified by the pair (r, delta); its weight is r/2,
//! its level is delta^2, and its q-expansion is supported on the single
//! residue class (delta * r / 24) mod delta.

use crate::error::{Error, Result};
use crate::qseries::{ModSeries, TruncatedSeries};

/// The admissible (r, delta) pairs. The first six carry congruence
/// families; (2, 12) is constructible but has no congruence theorem and
/// the congruence engine refuses it.
pub const ADMISSIBLE_PAIRS: [(u32, u32); 7] =
    [(2, 12), (4, 6), (6, 4), (8, 3), (10, 12), (14, 12), (26, 12)];

/// The family members r that carry congruence statements, with their
/// deltas.
pub const FAMILY_R: [u32; 6] = [4, 6, 8, 10, 14, 26];

/// Looks up the delta paired with a family member r.
pub fn delta_for(r: u32) -> Option<u32> {
    ADMISSIBLE_PAIRS.iter().find(|&&(rr, _)| rr == r).map(|&(_, d)| d)
}

/// Identifies an eta power eta^r(delta z) together with its derived
/// structure constants.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EtaPowerSpec {
    r: u32,
    delta: u32,
}

impl EtaPowerSpec {
    /// Accepts only the admissible (r, delta) pairs.
    pub fn new(r: u32, delta: u32) -> Result<Self> {
        if ADMISSIBLE_PAIRS.contains(&(r, delta)) {
            Ok(Self { r, delta })
        } else {
            Err(Error::InadmissiblePair { r, delta })
        }
    }

    /// The admissible spec for a family member r (delta is determined).
    pub fn for_family(r: u32) -> Result<Self> {
        match delta_for(r) {
            Some(d) if r != 2 => Self::new(r, d),
            _ => Err(Error::UnsupportedFamily(r)),
        }
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn delta(&self) -> u32 {
        self.delta
    }

    /// Weight k = r / 2.
    pub fn weight(&self) -> u32 {
        self.r / 2
    }

    /// Level N = delta^2.
    pub fn level(&self) -> u32 {
        self.delta * self.delta
    }

    /// Leading exponent delta * r / 24 (an integer for every admissible
    /// pair).
    pub fn offset(&self) -> usize {
        let num = self.delta as usize * self.r as usize;
        debug_assert_eq!(num % 24, 0);
        num / 24
    }

    /// The residue class mod delta on which the expansion is supported.
    pub fn support_residue(&self) -> u32 {
        (self.offset() % self.delta as usize) as u32
    }
}

/// A color count t, optionally tagged with a decomposition t = l*s - r.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ColorCount {
    pub t: u32,
    pub ell: u64,
    pub s: u32,
    pub r: u32,
}

impl ColorCount {
    fn new(t: u32, ell: u64, s: u32, r: u32) -> Self {
        debug_assert_eq!(i64::from(t), ell as i64 * i64::from(s) - i64::from(r));
        Self { t, ell, s, r }
    }
}

/// Exact generating function of t-color partitions,
/// sum p_{-t}(n) q^n = prod (1 - q^n)^(-t).
pub fn pcolor_series(t: u32, precision: usize) -> TruncatedSeries {
    assert!(t >= 1, "color count must be positive");
    TruncatedSeries::euler_power(-i64::from(t), precision)
}

/// Exact q-expansion of F = q^(d r / 24) prod (1 - q^(d n))^r, carrying
/// the coefficients A_r(n).
pub fn eta_power_series(spec: EtaPowerSpec, precision: usize) -> TruncatedSeries {
    let delta = spec.delta() as usize;
    let offset = spec.offset();
    let inner_len = precision / delta + 1;
    let inner = TruncatedSeries::euler_power(i64::from(spec.r()), inner_len);
    inner.dilate(delta, precision).truncated(precision).shift_up(offset)
}

/// Modular-backend counterpart of [`eta_power_series`].
pub fn eta_power_series_mod(
    spec: EtaPowerSpec,
    precision: usize,
    modulus: u64,
) -> Result<ModSeries> {
    let delta = spec.delta() as usize;
    let offset = spec.offset();
    let inner_len = precision / delta + 1;
    let inner = ModSeries::euler_power(i64::from(spec.r()), inner_len, modulus)?;
    Ok(inner.dilate(delta, precision).truncated(precision).shift_up(offset))
}

/// All decompositions t = l*s - r with r in the family set and s >= 0.
/// An empty result means no congruence theorem applies to (t, l).
///
/// s is bounded by (t + 26) / l since r <= 26.
pub fn decompose_t(t: u32, ell: u64) -> Vec<ColorCount> {
    let mut out = Vec::new();
    for &r in &FAMILY_R {
        let sum = u64::from(t) + u64::from(r);
        if sum % ell == 0 {
            let s = sum / ell;
            out.push(ColorCount::new(t, ell, s as u32, r));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::Zero;

    /// Independent oracle: count t-color partitions of n by dynamic
    /// programming over (part size, color) items.
    fn pcolor_brute(t: u32, max_n: usize) -> Vec<BigInt> {
        let mut ways = vec![BigInt::from(0); max_n + 1];
        ways[0] = BigInt::from(1);
        for size in 1..=max_n {
            for _color in 0..t {
                for n in size..=max_n {
                    let add = ways[n - size].clone();
                    ways[n] += add;
                }
            }
        }
        ways
    }

    #[test]
    fn pcolor_matches_brute_force() {
        for t in [1u32, 2, 3] {
            let series = pcolor_series(t, 31);
            let brute = pcolor_brute(t, 30);
            for n in 0..=30 {
                assert_eq!(series.coeff(n), &brute[n], "t = {t}, n = {n}");
            }
        }
    }

    #[test]
    fn pcolor_known_values() {
        let p1 = pcolor_series(1, 20);
        assert_eq!(p1.coeff(4), &BigInt::from(5));
        assert_eq!(p1.coeff(9), &BigInt::from(30));
        assert_eq!(p1.coeff(14), &BigInt::from(135));
        let p2 = pcolor_series(2, 5);
        assert_eq!(p2.coeff(2), &BigInt::from(5));
        for t in [1u32, 5, 26] {
            assert_eq!(pcolor_series(t, 2).coeff(0), &BigInt::from(1));
        }
    }

    #[test]
    fn admissibility() {
        assert!(EtaPowerSpec::new(8, 3).is_ok());
        assert!(EtaPowerSpec::new(2, 12).is_ok());
        assert!(matches!(
            EtaPowerSpec::new(8, 5),
            Err(Error::InadmissiblePair { r: 8, delta: 5 })
        ));
        assert!(EtaPowerSpec::for_family(2).is_err());
        assert!(EtaPowerSpec::for_family(12).is_err());
    }

    #[test]
    fn structure_constants() {
        let s = EtaPowerSpec::new(26, 12).unwrap();
        assert_eq!(s.weight(), 13);
        assert_eq!(s.level(), 144);
        assert_eq!(s.offset(), 13);
        assert_eq!(s.support_residue(), 1);
        assert_eq!(EtaPowerSpec::new(10, 12).unwrap().support_residue(), 5);
        assert_eq!(EtaPowerSpec::new(8, 3).unwrap().support_residue(), 1);
        assert_eq!(EtaPowerSpec::new(14, 12).unwrap().support_residue(), 7);
    }

    #[test]
    fn eta_power_examples() {
        let f8 = eta_power_series(EtaPowerSpec::new(8, 3).unwrap(), 40);
        assert_eq!(f8.coeff(1), &BigInt::from(1));
        assert_eq!(f8.coeff(7), &BigInt::from(20));

        let f26 = eta_power_series(EtaPowerSpec::new(26, 12).unwrap(), 40);
        assert_eq!(f26.coeff(13), &BigInt::from(1));
        assert_eq!(f26.coeff(37), &BigInt::from(299));

        let f10 = eta_power_series(EtaPowerSpec::new(10, 12).unwrap(), 40);
        assert_eq!(f10.coeff(17), &BigInt::from(-10));
    }

    #[test]
    fn support_and_index_bridge() {
        for (r, delta) in ADMISSIBLE_PAIRS {
            let spec = EtaPowerSpec::new(r, delta).unwrap();
            let n = 600;
            let f = eta_power_series(spec, n);
            let inner = TruncatedSeries::euler_power(i64::from(r), n / delta as usize + 1);
            let res = spec.support_residue() as usize;
            for i in 0..n {
                if i % delta as usize != res {
                    assert!(f.coeff(i).is_zero(), "support leak at {i} for r={r}");
                }
            }
            // A_r(delta n + delta r / 24) = a_r(n)
            for m in 0..(n - spec.offset()) / delta as usize {
                assert_eq!(
                    f.coeff(delta as usize * m + spec.offset()),
                    inner.coeff(m),
                    "index bridge broken at m={m} for r={r}"
                );
            }
        }
    }

    #[test]
    fn pcolor_is_inverse_of_euler_power() {
        let n = 200;
        for t in [1u32, 7, 26] {
            let p = pcolor_series(t, n);
            let e = TruncatedSeries::euler_power(i64::from(t), n);
            assert_eq!(p, e.invert().unwrap());
            assert_eq!(p.mul(&e), TruncatedSeries::one(n));
        }
    }

    #[test]
    fn decompositions() {
        let d = decompose_t(3, 11);
        assert_eq!(d.len(), 1);
        assert_eq!((d[0].s, d[0].r), (1, 8));

        let d = decompose_t(1, 5);
        let pairs: Vec<_> = d.iter().map(|c| (c.s, c.r)).collect();
        assert!(pairs.contains(&(1, 4)));

        assert!(decompose_t(3, 5).is_empty());

        // bound check: s never exceeds (t + 26)/l
        for c in decompose_t(100, 7) {
            assert!(u64::from(c.s) <= (100 + 26) / 7 + 1);
            assert_eq!(i64::from(c.t), 7 * i64::from(c.s) - i64::from(c.r));
        }
    }
}
