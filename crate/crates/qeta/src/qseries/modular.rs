//! Truncated power series over Z/mZ with a word-size modulus.
//!
//! This is the fast backend for congruence sweeps: every stored value is
//! fully reduced into [0, m), and each operation agrees with computing
//! exactly and reducing afterwards (the test suite pins this down).
//!
//! The convolution kernels pick an accumulation strategy from the modulus
//! size: for m below 2^16 a plain u64 accumulator suffices, for m below
//! 2^32 products fit u64 and a u128 accumulator never overflows, and
//! larger moduli fall back to per-term reduction.

use crate::error::{Error, Result};

/// A q-expansion with coefficients in Z/mZ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModSeries {
    coeffs: Vec<u64>,
    modulus: u64,
}

impl ModSeries {
    /// Builds a series from residues that must already lie in [0, m).
    pub fn from_raw(coeffs: Vec<u64>, modulus: u64) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::ModulusTooSmall(modulus));
        }
        assert!(!coeffs.is_empty(), "a series needs precision >= 1");
        debug_assert!(coeffs.iter().all(|&c| c < modulus));
        Ok(Self { coeffs, modulus })
    }

    /// Builds a series from signed values, reducing each into [0, m).
    pub fn from_i64(coeffs: &[i64], modulus: u64) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::ModulusTooSmall(modulus));
        }
        let m = modulus as i128;
        let reduced = coeffs
            .iter()
            .map(|&c| (((c as i128 % m) + m) % m) as u64)
            .collect();
        Self::from_raw(reduced, modulus)
    }

    /// The zero series.
    pub fn zero(precision: usize, modulus: u64) -> Result<Self> {
        Self::from_raw(vec![0; precision.max(1)], modulus)
    }

    /// The constant series 1.
    pub fn one(precision: usize, modulus: u64) -> Result<Self> {
        let mut s = Self::zero(precision, modulus)?;
        s.coeffs[0] = 1 % modulus;
        Ok(s)
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Residue of the coefficient of q^n.
    pub fn coeff(&self, n: usize) -> u64 {
        self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn truncated(&self, precision: usize) -> Self {
        assert!(precision >= 1);
        let n = precision.min(self.coeffs.len());
        Self { coeffs: self.coeffs[..n].to_vec(), modulus: self.modulus }
    }

    fn assert_same_modulus(&self, other: &Self) {
        assert_eq!(
            self.modulus, other.modulus,
            "mixed moduli: {} vs {}",
            self.modulus, other.modulus
        );
    }

    fn nonzero_count(&self) -> usize {
        self.coeffs.iter().filter(|&&c| c != 0).count()
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_modulus(other);
        let n = self.precision().min(other.precision());
        let m = self.modulus;
        let coeffs = (0..n)
            .map(|i| {
                let s = self.coeffs[i] + other.coeffs[i];
                if s >= m { s - m } else { s }
            })
            .collect();
        Self { coeffs, modulus: m }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.assert_same_modulus(other);
        let n = self.precision().min(other.precision());
        let m = self.modulus;
        let coeffs = (0..n)
            .map(|i| {
                let (a, b) = (self.coeffs[i], other.coeffs[i]);
                if a >= b { a - b } else { a + m - b }
            })
            .collect();
        Self { coeffs, modulus: m }
    }

    pub fn neg(&self) -> Self {
        let m = self.modulus;
        let coeffs = self.coeffs.iter().map(|&c| if c == 0 { 0 } else { m - c }).collect();
        Self { coeffs, modulus: m }
    }

    /// Cauchy product truncated to the minimum precision, looping over the
    /// nonzero support of the sparser factor.
    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same_modulus(other);
        let n = self.precision().min(other.precision());
        let m = self.modulus;
        let (sparse, dense) = if self.nonzero_count() <= other.nonzero_count() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = vec![0u64; n];
        if m <= 1 << 16 {
            // products < 2^32; u64 accumulator holds > 2^31 of them
            let mut acc = vec![0u64; n];
            for (i, &ci) in sparse.coeffs.iter().enumerate().take(n) {
                if ci == 0 {
                    continue;
                }
                for (j, &cj) in dense.coeffs.iter().enumerate().take(n - i) {
                    acc[i + j] += ci * cj;
                }
            }
            for (o, a) in out.iter_mut().zip(acc) {
                *o = a % m;
            }
        } else if m <= 1 << 32 {
            let mut acc = vec![0u128; n];
            for (i, &ci) in sparse.coeffs.iter().enumerate().take(n) {
                if ci == 0 {
                    continue;
                }
                for (j, &cj) in dense.coeffs.iter().enumerate().take(n - i) {
                    acc[i + j] += (ci * cj) as u128;
                }
            }
            for (o, a) in out.iter_mut().zip(acc) {
                *o = (a % m as u128) as u64;
            }
        } else {
            for (i, &ci) in sparse.coeffs.iter().enumerate().take(n) {
                if ci == 0 {
                    continue;
                }
                for (j, &cj) in dense.coeffs.iter().enumerate().take(n - i) {
                    if cj != 0 {
                        let t = (ci as u128 * cj as u128) % m as u128;
                        let s = out[i + j] as u128 + t;
                        out[i + j] = (s % m as u128) as u64;
                    }
                }
            }
        }
        Self { coeffs: out, modulus: m }
    }

    /// f^e by binary exponentiation.
    pub fn pow(&self, e: u64) -> Self {
        let mut result = Self::one(self.precision(), self.modulus).unwrap();
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

    /// Inverse series; the constant term must be 1 or m - 1 (the images
    /// of +1 and -1, which are their own inverses mod m).
    pub fn invert(&self) -> Result<Self> {
        let m = self.modulus;
        let f0 = self.coeffs[0];
        if f0 != 1 && f0 != m - 1 {
            return Err(Error::NonUnitConstant(format!("{f0} (mod {m})")));
        }
        let n = self.precision();
        let support: Vec<(usize, u64)> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .filter(|&(_, &c)| c != 0)
            .map(|(k, &c)| (k, c))
            .collect();
        let mut g = vec![0u64; n];
        g[0] = f0;
        if m <= 1 << 16 {
            // terms < 2^32 and fewer than 2^32 of them
            for i in 1..n {
                let mut acc: u64 = 0;
                for &(k, fk) in &support {
                    if k > i {
                        break;
                    }
                    acc += fk * g[i - k];
                }
                let s = acc % m;
                // g[i] = -f0 * s
                g[i] = if s == 0 { 0 } else { (m - s) * f0 % m };
            }
        } else {
            for i in 1..n {
                let mut acc: u128 = 0;
                for &(k, fk) in &support {
                    if k > i {
                        break;
                    }
                    acc += fk as u128 * g[i - k] as u128;
                    if acc >= 1 << 120 {
                        acc %= m as u128;
                    }
                }
                let s = (acc % m as u128) as u64;
                g[i] = if s == 0 {
                    0
                } else {
                    ((m - s) as u128 * f0 as u128 % m as u128) as u64
                };
            }
        }
        Ok(Self { coeffs: g, modulus: m })
    }

    /// Substitutes q -> q^delta, with result precision delta * precision
    /// capped at `cap`.
    pub fn dilate(&self, delta: usize, cap: usize) -> Self {
        assert!(delta >= 1);
        assert!(cap >= 1);
        let n = (self.precision().saturating_mul(delta)).min(cap);
        let mut out = vec![0u64; n];
        for (i, &c) in self.coeffs.iter().enumerate() {
            let e = i * delta;
            if e >= n {
                break;
            }
            out[e] = c;
        }
        Self { coeffs: out, modulus: self.modulus }
    }

    pub fn shift_up(&self, shift: usize) -> Self {
        let n = self.precision();
        let mut out = vec![0u64; n];
        for (i, &c) in self.coeffs.iter().enumerate() {
            if i + shift >= n {
                break;
            }
            out[i + shift] = c;
        }
        Self { coeffs: out, modulus: self.modulus }
    }

    /// prod (1 - q^n) mod m by the pentagonal number theorem.
    pub fn eta_series(precision: usize, modulus: u64) -> Result<Self> {
        let mut s = Self::zero(precision, modulus)?;
        let m = modulus;
        s.coeffs[0] = 1 % m;
        let mut k: usize = 1;
        loop {
            let g1 = k * (3 * k - 1) / 2;
            let g2 = k * (3 * k + 1) / 2;
            if g1 >= precision && g2 >= precision {
                break;
            }
            let v = if k % 2 == 0 { 1 % m } else { m - 1 };
            for g in [g1, g2] {
                if g < precision {
                    let t = s.coeffs[g] + v;
                    s.coeffs[g] = if t >= m { t - m } else { t };
                }
            }
            k += 1;
        }
        Ok(s)
    }

    /// prod (1 - q^n)^r mod m for any integer r.
    pub fn euler_power(r: i64, precision: usize, modulus: u64) -> Result<Self> {
        if r == 0 {
            return Self::one(precision, modulus);
        }
        let eta = Self::eta_series(precision, modulus)?;
        let mut f = eta.clone();
        for _ in 1..r.unsigned_abs() {
            f = f.mul(&eta);
        }
        if r > 0 {
            Ok(f)
        } else {
            f.invert()
        }
    }

    /// Generating function of t-color partitions mod m:
    /// prod (1 - q^n)^(-t).
    pub fn pcolor_series(t: u32, precision: usize, modulus: u64) -> Result<Self> {
        Self::euler_power(-i64::from(t), precision, modulus)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::exact::TruncatedSeries;

    #[test]
    fn matches_exact_backend() {
        for m in [5u64, 7, 97, 1 << 20, (1 << 33) + 5] {
            let n = 80;
            let f = TruncatedSeries::euler_power(6, n);
            let g = TruncatedSeries::euler_power(-3, n);
            let exact = f.mul(&g).reduce_mod(m).unwrap();
            let modular = f.reduce_mod(m).unwrap().mul(&g.reduce_mod(m).unwrap());
            assert_eq!(exact, modular, "mul disagrees for m = {m}");

            let exact_pow = f.pow(4).reduce_mod(m).unwrap();
            assert_eq!(exact_pow, f.reduce_mod(m).unwrap().pow(4), "pow disagrees for m = {m}");
        }
    }

    #[test]
    fn invert_agrees_with_exact() {
        let n = 120;
        let f = TruncatedSeries::euler_power(5, n);
        for m in [11u64, 101, (1 << 40) + 15] {
            let exact = f.invert().unwrap().reduce_mod(m).unwrap();
            let modular = f.reduce_mod(m).unwrap().invert().unwrap();
            assert_eq!(exact, modular, "invert disagrees for m = {m}");
        }
    }

    #[test]
    fn invert_requires_unit_constant() {
        let f = ModSeries::from_i64(&[3, 1], 7).unwrap();
        assert!(f.invert().is_err());
        let g = ModSeries::from_i64(&[-1, 4], 7).unwrap();
        let gi = g.invert().unwrap();
        assert_eq!(g.mul(&gi), ModSeries::one(2, 7).unwrap());
    }

    #[test]
    fn freshman_dream() {
        // prod (1-q^n)^(l s) = prod (1-q^(l n))^s  mod l
        for (ell, s) in [(5u64, 1i64), (7, 2), (11, 1), (13, 3)] {
            let n = 400;
            let lhs = ModSeries::euler_power(ell as i64 * s, n, ell).unwrap();
            let inner = ModSeries::euler_power(s, n / ell as usize + 1, ell).unwrap();
            let rhs = inner.dilate(ell as usize, n).truncated(n);
            assert_eq!(lhs.truncated(rhs.precision()), rhs, "failed for l={ell} s={s}");
        }
    }

    #[test]
    fn pcolor_counts_colored_partitions() {
        let p2 = ModSeries::pcolor_series(2, 8, 1_000_003).unwrap();
        assert_eq!(&p2.coeffs()[..6], &[1, 2, 5, 10, 20, 36]);
    }
}
