//! Truncated power series over exact (arbitrary precision) integers.
//!
//! A `TruncatedSeries` stores the coefficients of q^0 .. q^(N-1) for a
//! precision bound N. Every binary operation truncates to the minimum
//! precision of its inputs; nothing is ever padded or rounded.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::qseries::modular::ModSeries;

/// A formal power series in q, truncated below a precision bound.
///
/// Invariant: `coeffs.len() == precision >= 1` and the coefficient of q^n
/// is `coeffs[n]`, an exact integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<BigInt>,
}

impl TruncatedSeries {
    /// Builds a series from explicit coefficients; the precision is the
    /// length of the vector.
    ///
    /// Panics if `coeffs` is empty (a series must know at least q^0).
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs precision >= 1");
        Self { coeffs }
    }

    /// Convenience constructor from machine integers.
    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// The zero series at the given precision.
    pub fn zero(precision: usize) -> Self {
        assert!(precision >= 1);
        Self { coeffs: vec![BigInt::zero(); precision] }
    }

    /// The constant series 1.
    pub fn one(precision: usize) -> Self {
        let mut s = Self::zero(precision);
        s.coeffs[0] = BigInt::one();
        s
    }

    /// The monomial c * q^exp (zero if exp is out of range).
    pub fn monomial(c: BigInt, exp: usize, precision: usize) -> Self {
        let mut s = Self::zero(precision);
        if exp < precision {
            s.coeffs[exp] = c;
        }
        s
    }

    /// Exclusive exponent bound: coefficients of q^0 .. q^(precision-1)
    /// are known.
    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of q^n. Panics if n >= precision.
    pub fn coeff(&self, n: usize) -> &BigInt {
        &self.coeffs[n]
    }

    /// All known coefficients, indexed by exponent.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// True if every known coefficient is zero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Restricts to a smaller precision (no-op if already smaller).
    pub fn truncated(&self, precision: usize) -> Self {
        assert!(precision >= 1);
        let n = precision.min(self.coeffs.len());
        Self { coeffs: self.coeffs[..n].to_vec() }
    }

    fn nonzero_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Sum, truncated to the minimum precision.
    pub fn add(&self, other: &Self) -> Self {
        let n = self.precision().min(other.precision());
        let coeffs = (0..n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect();
        Self { coeffs }
    }

    /// Difference, truncated to the minimum precision.
    pub fn sub(&self, other: &Self) -> Self {
        let n = self.precision().min(other.precision());
        let coeffs = (0..n).map(|i| &self.coeffs[i] - &other.coeffs[i]).collect();
        Self { coeffs }
    }

    /// Negation.
    pub fn neg(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    /// Cauchy product, truncated to the minimum precision.
    ///
    /// The convolution loops over the nonzero coefficients of the sparser
    /// factor, so multiplying by a pentagonal-style series costs
    /// O(N * sqrt(N)) instead of O(N^2).
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.precision().min(other.precision());
        let (sparse, dense) = if self.nonzero_count() <= other.nonzero_count() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = vec![BigInt::zero(); n];
        for (i, ci) in sparse.coeffs.iter().enumerate().take(n) {
            if ci.is_zero() {
                continue;
            }
            for (j, cj) in dense.coeffs.iter().enumerate().take(n - i) {
                if !cj.is_zero() {
                    out[i + j] += ci * cj;
                }
            }
        }
        Self { coeffs: out }
    }

    /// f^e by binary exponentiation; `pow(f, 0)` is the constant 1.
    pub fn pow(&self, e: u64) -> Self {
        let mut result = Self::one(self.precision());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Multiplicative inverse g with `f * g = 1` to the shared precision.
    ///
    /// Requires a constant term of +1 or -1; the recurrence walks the
    /// nonzero support of f, so inverting a sparse series is cheap.
    pub fn invert(&self) -> Result<Self> {
        let f0 = &self.coeffs[0];
        if !(f0.is_one() || (-f0).is_one()) {
            return Err(Error::NonUnitConstant(f0.to_string()));
        }
        let n = self.precision();
        let support: Vec<(usize, &BigInt)> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, c)| !c.is_zero())
            .collect();
        let mut g = vec![BigInt::zero(); n];
        g[0] = f0.clone();
        for i in 1..n {
            let mut acc = BigInt::zero();
            for &(k, fk) in &support {
                if k > i {
                    break;
                }
                acc += fk * &g[i - k];
            }
            // f0 is its own inverse
            g[i] = -(f0 * acc);
        }
        Ok(Self { coeffs: g })
    }

    /// Substitutes q -> q^delta. The coefficient of q^(delta * n) in the
    /// result is the coefficient of q^n here; everything else is zero.
    /// The result precision is delta * precision, capped at `cap`.
    pub fn dilate(&self, delta: usize, cap: usize) -> Self {
        assert!(delta >= 1);
        assert!(cap >= 1);
        let n = (self.precision().saturating_mul(delta)).min(cap);
        let mut out = vec![BigInt::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = i * delta;
            if e >= n {
                break;
            }
            out[e] = c.clone();
        }
        Self { coeffs: out }
    }

    /// Multiplies by q^shift, dropping coefficients pushed past the
    /// precision bound.
    pub fn shift_up(&self, shift: usize) -> Self {
        let n = self.precision();
        let mut out = vec![BigInt::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            if i + shift >= n {
                break;
            }
            out[i + shift] = c.clone();
        }
        Self { coeffs: out }
    }

    /// The Euler product prod_{n>=1} (1 - q^n), expanded by the pentagonal
    /// number theorem: only exponents k(3k +- 1)/2 are touched, never the
    /// N dense factors.
    pub fn eta_series(precision: usize) -> Self {
        assert!(precision >= 1);
        let mut coeffs = vec![BigInt::zero(); precision];
        coeffs[0] = BigInt::one();
        let mut k: usize = 1;
        loop {
            let g1 = k * (3 * k - 1) / 2;
            let g2 = k * (3 * k + 1) / 2;
            if g1 >= precision && g2 >= precision {
                break;
            }
            let sign = if k % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            if g1 < precision {
                coeffs[g1] += &sign;
            }
            if g2 < precision {
                coeffs[g2] += &sign;
            }
            k += 1;
        }
        Self { coeffs }
    }

    /// prod_{n>=1} (1 - q^n)^r for any integer r. Positive powers are
    /// built by repeated sparse multiplication with the pentagonal
    /// expansion; negative powers invert the positive one, which is how
    /// the t-color generating function arises.
    pub fn euler_power(r: i64, precision: usize) -> Self {
        if r == 0 {
            return Self::one(precision);
        }
        let eta = Self::eta_series(precision);
        let mut f = eta.clone();
        for _ in 1..r.unsigned_abs() {
            f = f.mul(&eta);
        }
        if r > 0 {
            f
        } else {
            f.invert().expect("eta power has unit constant term")
        }
    }

    /// Coefficientwise reduction into [0, m).
    pub fn reduce_mod(&self, m: u64) -> Result<ModSeries> {
        if m < 2 {
            return Err(Error::ModulusTooSmall(m));
        }
        let mb = BigInt::from(m);
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let mut r = c % &mb;
                if r.is_negative() {
                    r += &mb;
                }
                u64::try_from(&r).expect("residue fits u64")
            })
            .collect();
        ModSeries::from_raw(coeffs, m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Oracle: multiply the first N factors (1 - q^n) densely.
    fn eta_naive(precision: usize) -> TruncatedSeries {
        let mut f = TruncatedSeries::one(precision);
        for n in 1..precision {
            let factor = TruncatedSeries::monomial(-BigInt::one(), n, precision)
                .add(&TruncatedSeries::one(precision));
            f = f.mul(&factor);
        }
        f
    }

    #[test]
    fn eta_matches_naive_product() {
        let fast = TruncatedSeries::eta_series(50);
        let slow = eta_naive(50);
        assert_eq!(fast, slow);
    }

    #[test]
    fn eta_leading_coefficients() {
        let e = TruncatedSeries::eta_series(13);
        let want: Vec<i64> = vec![1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1];
        assert_eq!(e, TruncatedSeries::from_i64(&want));
    }

    #[test]
    fn eta_support_is_pentagonal() {
        let n = 1000;
        let e = TruncatedSeries::eta_series(n);
        let mut pentagonal = std::collections::HashSet::new();
        let mut k = 1usize;
        while k * (3 * k - 1) / 2 < n {
            pentagonal.insert(k * (3 * k - 1) / 2);
            pentagonal.insert(k * (3 * k + 1) / 2);
            k += 1;
        }
        pentagonal.insert(0);
        for (i, c) in e.coeffs().iter().enumerate() {
            if !c.is_zero() {
                assert!(pentagonal.contains(&i), "unexpected support at {i}");
            }
        }
    }

    #[test]
    fn mul_identity_and_zero() {
        let f = TruncatedSeries::euler_power(3, 40);
        assert_eq!(TruncatedSeries::one(40).mul(&f), f);
        assert!(TruncatedSeries::zero(40).mul(&f).is_zero());
    }

    #[test]
    fn mul_telescopes_geometric_series() {
        let n = 64;
        let ones = TruncatedSeries::from_coeffs(vec![BigInt::one(); n]);
        let f = TruncatedSeries::from_i64(&[1, -1]).truncated(2);
        let mut expect = TruncatedSeries::zero(2);
        expect = expect.add(&TruncatedSeries::one(2));
        // (1 - q)(1 + q + q^2 + ...) = 1 at the shared precision
        assert_eq!(f.mul(&ones), expect.truncated(2));
        let f_wide = {
            let mut c = vec![BigInt::zero(); n];
            c[0] = BigInt::one();
            c[1] = -BigInt::one();
            TruncatedSeries::from_coeffs(c)
        };
        assert_eq!(f_wide.mul(&ones), TruncatedSeries::one(n));
    }

    #[test]
    fn pow_binomial_and_empty() {
        let f = {
            let mut c = vec![BigInt::zero(); 8];
            c[0] = BigInt::one();
            c[1] = -BigInt::one();
            TruncatedSeries::from_coeffs(c)
        };
        assert_eq!(f.pow(0), TruncatedSeries::one(8));
        let sq = f.pow(2);
        assert_eq!(sq.coeff(0), &BigInt::from(1));
        assert_eq!(sq.coeff(1), &BigInt::from(-2));
        assert_eq!(sq.coeff(2), &BigInt::from(1));
        assert!(sq.coeff(3).is_zero());
    }

    #[test]
    fn pow_of_eta_matches_euler_power() {
        let n = 120;
        let e = TruncatedSeries::eta_series(n);
        assert_eq!(e.pow(8), TruncatedSeries::euler_power(8, n));
    }

    #[test]
    fn invert_simple_cases() {
        let one = TruncatedSeries::one(10);
        assert_eq!(one.invert().unwrap(), one);
        let f = {
            let mut c = vec![BigInt::zero(); 10];
            c[0] = BigInt::one();
            c[1] = -BigInt::one();
            TruncatedSeries::from_coeffs(c)
        };
        let g = f.invert().unwrap();
        assert_eq!(g, TruncatedSeries::from_coeffs(vec![BigInt::one(); 10]));
    }

    #[test]
    fn invert_rejects_non_unit() {
        let f = TruncatedSeries::from_i64(&[2, 1, 1]);
        assert!(matches!(f.invert(), Err(Error::NonUnitConstant(_))));
    }

    #[test]
    fn dilate_examples() {
        let f = TruncatedSeries::euler_power(2, 20);
        assert_eq!(f.dilate(1, 20), f);
        let g = TruncatedSeries::from_i64(&[1, -1]);
        let d = g.dilate(3, 10);
        assert_eq!(d.precision(), 6);
        assert_eq!(d.coeff(0), &BigInt::one());
        assert!(d.coeff(1).is_zero() && d.coeff(2).is_zero());
        assert_eq!(d.coeff(3), &BigInt::from(-1));
    }

    #[test]
    fn dilate_support_scan() {
        let e = TruncatedSeries::eta_series(40);
        let d = e.dilate(12, 480);
        for (i, c) in d.coeffs().iter().enumerate() {
            if i % 12 != 0 {
                assert!(c.is_zero(), "dilated series leaked support at {i}");
            }
        }
    }

    #[test]
    fn euler_power_values() {
        let a26 = TruncatedSeries::euler_power(26, 5);
        assert_eq!(a26.coeff(0), &BigInt::from(1));
        assert_eq!(a26.coeff(1), &BigInt::from(-26));
        assert_eq!(a26.coeff(2), &BigInt::from(299));

        let a0 = TruncatedSeries::euler_power(0, 6);
        assert_eq!(a0, TruncatedSeries::one(6));

        // p(4) = 5 partitions of 4
        let p = TruncatedSeries::euler_power(-1, 6);
        assert_eq!(p.coeff(4), &BigInt::from(5));
    }

    #[test]
    fn a26_by_binomial_oracle() {
        // (1-q)^26 (1-q^2)^26 already pins the coefficients of q^0..q^2
        let n = 3;
        let one_minus_q = {
            let mut c = vec![BigInt::zero(); n];
            c[0] = BigInt::one();
            c[1] = -BigInt::one();
            TruncatedSeries::from_coeffs(c)
        };
        let one_minus_q2 = {
            let mut c = vec![BigInt::zero(); n];
            c[0] = BigInt::one();
            c[2] = -BigInt::one();
            TruncatedSeries::from_coeffs(c)
        };
        let oracle = one_minus_q.pow(26).mul(&one_minus_q2.pow(26));
        let fast = TruncatedSeries::euler_power(26, n);
        assert_eq!(oracle, fast);
    }

    #[test]
    fn reduce_mod_examples() {
        let f = TruncatedSeries::from_i64(&[1, -26, 0]);
        let r = f.reduce_mod(13).unwrap();
        assert_eq!(r.coeffs(), &[1, 0, 0]);
        assert!(f.reduce_mod(1).is_err());
    }
}
