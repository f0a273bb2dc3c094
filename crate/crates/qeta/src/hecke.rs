//! Hecke operators T_p on q-expansions and the mod-l annihilation
//! statements for eta powers.
//!
//! T_p sends sum A(n) q^n to sum (A(pn) + chi(p) p^(k-1) A(n/p)) q^n,
//! with A(n/p) = 0 when p does not divide n. For weight k >= 2 the chi
//! term is divisible by p, so annihilation mod p is exactly the
//! statement A(pn) = 0 mod p for every n.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::qseries::{ModSeries, TruncatedSeries};

/// Trial-division primality for word-size integers; our l never exceeds
/// a few thousand.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Parameters of T_{p,k,chi}. The character value chi(p) is caller
/// supplied because the Nebentypus is never pinned down here; it defaults
/// to 0 and is irrelevant for every mod-p statement with k >= 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HeckeParams {
    pub p: u64,
    pub k: u32,
    pub chi_p: i64,
}

impl HeckeParams {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p, k, chi_p: 0 })
    }

    pub fn with_chi(mut self, chi_p: i64) -> Self {
        self.chi_p = chi_p;
        self
    }
}

/// Applies T_p exactly. The result knows floor(precision / p)
/// coefficients; the input must know at least p.
pub fn apply_tp(f: &TruncatedSeries, params: &HeckeParams) -> Result<TruncatedSeries> {
    let p = params.p as usize;
    if f.precision() < p {
        return Err(Error::PrecisionBelowPrime { have: f.precision(), need: p });
    }
    let out_len = f.precision() / p;
    let scale = BigInt::from(params.chi_p) * BigInt::from(params.p).pow(params.k - 1);
    let mut coeffs = Vec::with_capacity(out_len);
    for n in 0..out_len {
        let mut c = f.coeff(p * n).clone();
        if n % p == 0 {
            c += &scale * f.coeff(n / p);
        }
        coeffs.push(c);
    }
    Ok(TruncatedSeries::from_coeffs(coeffs))
}

/// Outcome of an annihilation check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnnihilationCheck {
    /// True iff A(l n) = 0 mod l for every l n below the precision.
    pub annihilated: bool,
    /// Smallest n with A(l n) nonzero mod l, when one exists.
    pub witness: Option<usize>,
}

/// Decides whether f | T_l vanishes mod l, by scanning every index l*n
/// inside the known precision. Weight k >= 2 is required so the chi term
/// drops out mod l.
pub fn annihilated_mod(f: &TruncatedSeries, ell: u64, k: u32) -> Result<AnnihilationCheck> {
    if !is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    assert!(k >= 2, "the mod-l shortcut needs weight k >= 2");
    let ellb = BigInt::from(ell);
    let mut n = 0usize;
    while ell as usize * n < f.precision() {
        if !(f.coeff(ell as usize * n) % &ellb).is_zero() {
            return Ok(AnnihilationCheck { annihilated: false, witness: Some(n) });
        }
        n += 1;
    }
    Ok(AnnihilationCheck { annihilated: true, witness: None })
}

/// Same scan on an already-reduced series whose modulus is l.
pub fn annihilated_mod_reduced(f: &ModSeries) -> AnnihilationCheck {
    let ell = f.modulus() as usize;
    let mut n = 0usize;
    while ell * n < f.precision() {
        if f.coeff(ell * n) != 0 {
            return AnnihilationCheck { annihilated: false, witness: Some(n) };
        }
        n += 1;
    }
    AnnihilationCheck { annihilated: true, witness: None }
}

/// Classification of (r, l) under the annihilation theorem for eta
/// powers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SerreCase {
    /// F_{r,delta} | T_l = 0 mod l.
    Annihilated,
    /// l splits in the CM field and annihilation provably fails.
    NotAnnihilated,
    /// r outside {4,6,8,10,14,26}, or l ramified for the family.
    OutOfFamily,
}

/// Residue-class classification: r in {4,8,14} pairs with l = 2 mod 3,
/// r in {6,10} with l = 3 mod 4, and r = 26 with l = 11 mod 12; the
/// complementary split classes are never annihilated.
pub fn serre_case(r: u32, ell: u64) -> Result<SerreCase> {
    if !is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    let case = match r {
        4 | 8 | 14 => match ell % 3 {
            2 => SerreCase::Annihilated,
            1 => SerreCase::NotAnnihilated,
            _ => SerreCase::OutOfFamily, // l = 3 ramifies
        },
        6 | 10 => match ell % 4 {
            3 => SerreCase::Annihilated,
            1 => SerreCase::NotAnnihilated,
            _ => SerreCase::OutOfFamily, // l = 2 ramifies
        },
        26 => match ell % 12 {
            11 => SerreCase::Annihilated,
            1 | 5 | 7 => SerreCase::NotAnnihilated,
            _ => SerreCase::OutOfFamily,
        },
        _ => SerreCase::OutOfFamily,
    };
    Ok(case)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::etaforms::{eta_power_series, EtaPowerSpec};

    #[test]
    fn tp_on_zero() {
        let z = TruncatedSeries::zero(30);
        let params = HeckeParams::new(5, 4).unwrap();
        assert!(apply_tp(&z, &params).unwrap().is_zero());
    }

    #[test]
    fn tp_rejects_short_series() {
        let f = TruncatedSeries::one(3);
        let params = HeckeParams::new(5, 4).unwrap();
        assert!(matches!(
            apply_tp(&f, &params),
            Err(Error::PrecisionBelowPrime { have: 3, need: 5 })
        ));
    }

    #[test]
    fn tp_hand_computed() {
        // T_2 with k = 2, chi(2) = 1 on the digit series:
        //   b(n) = A(2n) + 2 A(n/2)
        let f = TruncatedSeries::from_i64(&[3, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5, 8]);
        let params = HeckeParams::new(2, 2).unwrap().with_chi(1);
        let g = apply_tp(&f, &params).unwrap();
        assert_eq!(g, TruncatedSeries::from_i64(&[9, 4, 7, 2, 13, 5]));
    }

    #[test]
    fn tp_annihilates_f83_mod_5() {
        let f = eta_power_series(EtaPowerSpec::new(8, 3).unwrap(), 1000);
        let params = HeckeParams::new(5, 4).unwrap();
        let g = apply_tp(&f, &params).unwrap();
        assert!(g.precision() >= 200);
        let reduced = g.reduce_mod(5).unwrap();
        assert!(reduced.truncated(200).is_zero());
    }

    #[test]
    fn chi_is_irrelevant_mod_ell() {
        let f = eta_power_series(EtaPowerSpec::new(6, 4).unwrap(), 300);
        let ell = 7;
        let fr = f.reduce_mod(ell).unwrap();
        for chi in [-1i64, 0, 1, 3] {
            let params = HeckeParams::new(ell, 3).unwrap().with_chi(chi);
            let g = apply_tp(&f, &params).unwrap().reduce_mod(ell).unwrap();
            // same as the bare map n -> A(l n) mod l
            for n in 0..g.precision() {
                assert_eq!(g.coeff(n), fr.coeff(ell as usize * n));
            }
        }
    }

    #[test]
    fn annihilation_examples() {
        let f83 = eta_power_series(EtaPowerSpec::new(8, 3).unwrap(), 400);
        assert!(annihilated_mod(&f83, 5, 4).unwrap().annihilated);

        let check7 = annihilated_mod(&f83, 7, 4).unwrap();
        assert!(!check7.annihilated);
        assert_eq!(check7.witness, Some(1)); // A_8(7) = 20, not 0 mod 7

        let f26 = eta_power_series(EtaPowerSpec::new(26, 12).unwrap(), 600);
        assert!(annihilated_mod(&f26, 11, 13).unwrap().annihilated);
    }

    #[test]
    fn serre_cases() {
        assert_eq!(serre_case(8, 11).unwrap(), SerreCase::Annihilated);
        assert_eq!(serre_case(26, 13).unwrap(), SerreCase::NotAnnihilated);
        assert_eq!(serre_case(12, 7).unwrap(), SerreCase::OutOfFamily);
        assert_eq!(serre_case(26, 3).unwrap(), SerreCase::OutOfFamily);
        assert_eq!(serre_case(6, 3).unwrap(), SerreCase::Annihilated);
        assert!(matches!(serre_case(8, 9), Err(Error::NotPrime(9))));
    }
}
