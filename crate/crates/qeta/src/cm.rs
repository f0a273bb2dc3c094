//! Quadratic representations of split primes and the closed prime-index
//! coefficient formulas for the eta powers with complex multiplication.
//!
//! Every split prime p has essentially one representation p = a^2 + b^2
//! (p = 1 mod 4) or p = x^2 + 3y^2 (p = 1 mod 3); the coefficient A_r(p)
//! of the eta power is a polynomial in the representation, but only after
//! the representative is pinned down among its sign/swap variants. The
//! source conventions for that choice are unreliable (their own tables
//! break them), so the normalization here is *fitted*: a small family of
//! candidate rules is evaluated against the eta-expansion oracle at the
//! ten smallest split primes, the surviving rule is cached, and the test
//! suite asserts it keeps matching far past the fit window. Reports carry
//! the resolved rule verbatim.
//!
//! All arithmetic on u + v*sqrt(-d) is done on exact integer pairs.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::etaforms::{eta_power_series, eta_power_series_mod, EtaPowerSpec, FAMILY_R};
use crate::hecke::is_prime;

/// A representation a^2 + b^2 = p in the Gaussian integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GaussRep {
    pub p: u64,
    pub a: i64,
    pub b: i64,
}

/// A representation x^2 + 3y^2 = p.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EisenRep {
    pub p: u64,
    pub x: i64,
    pub y: i64,
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Finds the positive pair (a, b), a odd, with a^2 + b^2 = p, by bounded
/// enumeration of the even member. Uniqueness up to units is classical.
fn two_squares_base(p: u64) -> (i64, i64) {
    let mut b = 1;
    while b * b * 2 <= p {
        let rest = p - b * b;
        let a = isqrt(rest);
        if a * a == rest {
            let (odd, even) = if a % 2 == 1 { (a, b) } else { (b, a) };
            return (odd as i64, even as i64);
        }
        b += 1;
    }
    unreachable!("split prime {p} must be a sum of two squares")
}

fn eisenstein_base(p: u64) -> (i64, i64) {
    let mut y = 1;
    while 3 * y * y < p {
        let rest = p - 3 * y * y;
        let x = isqrt(rest);
        if x * x == rest {
            return (x as i64, y as i64);
        }
        y += 1;
    }
    unreachable!("split prime {p} must be x^2 + 3y^2")
}

/// All eight sign/swap variants of the two-square representation.
/// Rejects p not congruent to 1 mod 4.
pub fn rep_two_squares(p: u64) -> Result<Vec<GaussRep>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p % 4 != 1 {
        return Err(Error::NotSplit { p, r: 6, class: 1, modulus: 4 });
    }
    let (a, b) = two_squares_base(p);
    let mut out = Vec::with_capacity(8);
    for (u, v) in [(a, b), (b, a)] {
        for (su, sv) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
            out.push(GaussRep { p, a: su * u, b: sv * v });
        }
    }
    Ok(out)
}

/// All four sign variants of the x^2 + 3y^2 representation.
/// Rejects p not congruent to 1 mod 3.
pub fn rep_eisenstein(p: u64) -> Result<Vec<EisenRep>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p % 3 != 1 {
        return Err(Error::NotSplit { p, r: 8, class: 1, modulus: 3 });
    }
    let (x, y) = eisenstein_base(p);
    let mut out = Vec::with_capacity(4);
    for (sx, sy) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
        out.push(EisenRep { p, x: sx * x, y: sy * y });
    }
    Ok(out)
}

/// (u + v*sqrt(-d))^k on exact integer pairs, by binary exponentiation.
fn pair_pow(u: i64, v: i64, d: i64, k: u32) -> (BigInt, BigInt) {
    let mut ru = BigInt::from(1);
    let mut rv = BigInt::from(0);
    let mut bu = BigInt::from(u);
    let mut bv = BigInt::from(v);
    let d = BigInt::from(d);
    let mut k = k;
    while k > 0 {
        if k & 1 == 1 {
            let nu = &ru * &bu - &d * &rv * &bv;
            let nv = &ru * &bv + &rv * &bu;
            ru = nu;
            rv = nv;
        }
        k >>= 1;
        if k > 0 {
            let nu = &bu * &bu - &d * &bv * &bv;
            let nv = BigInt::from(2) * &bu * &bv;
            bu = nu;
            bv = nv;
        }
    }
    (ru, rv)
}

/// 2 * Re((u + v*sqrt(-d))^k) as an exact integer.
fn trace_pow(u: i64, v: i64, d: i64, k: u32) -> BigInt {
    let (re, _) = pair_pow(u, v, d, k);
    BigInt::from(2) * re
}

fn parity(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn exact_div(num: BigInt, den: i64, what: &str) -> Result<BigInt> {
    let den = BigInt::from(den);
    if !(&num % &den).is_zero() {
        return Err(Error::Inconsistency(format!(
            "{what}: {num} is not divisible by {den}"
        )));
    }
    Ok(num / den)
}

// ---------------------------------------------------------------------------
// Fitted normalization
// ---------------------------------------------------------------------------

/// How the sign of the free component is chosen for one family member.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum SignRule {
    /// x = 1 mod 3 (Eisenstein component).
    XMod3One,
    /// x = 2 mod 3.
    XMod3Two,
    /// x > 0.
    XPositive,
    /// x = 3 mod 4 with a Legendre factor (x|3) on the whole bracket
    /// (the r = 26 fit).
    XMod4ThreeLegendre,
    /// x = 1 mod 4 with the same Legendre factor.
    XMod4OneLegendre,
    /// Gaussian a odd slot, both components positive (sign-free formulas).
    GaussOddPositive,
    /// Gaussian b odd slot; sign of a fixed by (a mod 3, b mod 12):
    /// a = 1 mod 3 when b = +-1 mod 12, a = 2 mod 3 when b = +-5 mod 12.
    GaussBSlotMod12,
    /// Gaussian b odd slot, a > 0.
    GaussBSlotAPositive,
}

impl SignRule {
    fn describe(self) -> &'static str {
        match self {
            SignRule::XMod3One => "x = 1 (mod 3), y > 0",
            SignRule::XMod3Two => "x = 2 (mod 3), y > 0",
            SignRule::XPositive => "x > 0, y > 0",
            SignRule::XMod4ThreeLegendre => {
                "x = 3 (mod 4), y > 0, bracket scaled by the Legendre symbol (x|3)"
            }
            SignRule::XMod4OneLegendre => {
                "x = 1 (mod 4), y > 0, bracket scaled by the Legendre symbol (x|3)"
            }
            SignRule::GaussOddPositive => "a odd, a > 0, b > 0",
            SignRule::GaussBSlotMod12 => {
                "b odd, b > 0; a = 1 (mod 3) if b = +-1 (mod 12), else a = 2 (mod 3)"
            }
            SignRule::GaussBSlotAPositive => "b odd, b > 0, a > 0",
        }
    }
}

/// The resolved normalization for one family member.
#[derive(Clone, Copy, Debug)]
pub struct Normalization {
    pub r: u32,
    rule: SignRule,
}

impl Normalization {
    /// Human-readable statement of the fitted rule, surfaced in reports.
    pub fn describe(&self) -> &'static str {
        self.rule.describe()
    }

    /// The normalized Eisenstein representative, when the family uses one.
    pub fn eisen_rep(&self, p: u64) -> Option<EisenRep> {
        match self.r {
            4 | 8 | 14 => Some(pick_eisen(p, self.rule)),
            26 if p % 12 == 1 => Some(pick_eisen(p, self.rule)),
            _ => None,
        }
    }

    /// The normalized Gaussian representative, when the family uses one.
    pub fn gauss_rep(&self, p: u64) -> Option<GaussRep> {
        match self.r {
            6 => Some(pick_gauss_odd_positive(p)),
            10 => Some(pick_gauss(p, self.rule)),
            26 if p % 12 == 1 => Some(pick_gauss_odd_positive(p)),
            _ => None,
        }
    }
}

fn pick_eisen(p: u64, rule: SignRule) -> EisenRep {
    let (x0, y) = eisenstein_base(p);
    let x = match rule {
        SignRule::XMod3One => {
            if x0.rem_euclid(3) == 1 { x0 } else { -x0 }
        }
        SignRule::XMod3Two => {
            if x0.rem_euclid(3) == 2 { x0 } else { -x0 }
        }
        SignRule::XPositive => x0,
        SignRule::XMod4ThreeLegendre => {
            if x0.rem_euclid(4) == 3 { x0 } else { -x0 }
        }
        SignRule::XMod4OneLegendre => {
            if x0.rem_euclid(4) == 1 { x0 } else { -x0 }
        }
        _ => unreachable!("not an Eisenstein rule"),
    };
    EisenRep { p, x, y }
}

fn pick_gauss_odd_positive(p: u64) -> GaussRep {
    let (a, b) = two_squares_base(p);
    GaussRep { p, a, b }
}

fn pick_gauss(p: u64, rule: SignRule) -> GaussRep {
    let (odd, even) = two_squares_base(p);
    // formulas for r = 10 live on the b-odd slot
    let (a0, b) = (even, odd);
    let a = match rule {
        SignRule::GaussBSlotAPositive => a0,
        SignRule::GaussBSlotMod12 => {
            let c = b.rem_euclid(12).min(12 - b.rem_euclid(12));
            let want = if c == 1 { 1 } else { 2 };
            if a0.rem_euclid(3) == want { a0 } else { -a0 }
        }
        _ => unreachable!("not a Gaussian b-slot rule"),
    };
    GaussRep { p, a, b }
}

/// A_4 = 2x.
fn eval_a4(rep: EisenRep) -> BigInt {
    BigInt::from(2 * rep.x)
}

/// A_6 = 2(a^2 - b^2), a odd.
fn eval_a6(rep: GaussRep) -> BigInt {
    BigInt::from(2) * (BigInt::from(rep.a) * rep.a - BigInt::from(rep.b) * rep.b)
}

/// A_8 = 2x(x^2 - 9y^2).
fn eval_a8(rep: EisenRep) -> BigInt {
    BigInt::from(2 * rep.x) * (BigInt::from(rep.x) * rep.x - BigInt::from(9) * rep.y * rep.y)
}

/// A_10 = (-1)^a i^(b+1) a b (a^2 - b^2) / 6 with b odd; the prefactor
/// collapses to -1 for b = 1 mod 4 and +1 for b = 3 mod 4.
fn eval_a10(rep: GaussRep) -> Result<BigInt> {
    let (a, b) = (rep.a, rep.b);
    debug_assert!(b.rem_euclid(2) == 1);
    let sign = parity(a) * if b.rem_euclid(4) == 1 { -1 } else { 1 };
    let num = BigInt::from(sign)
        * BigInt::from(a)
        * BigInt::from(b)
        * (BigInt::from(a) * a - BigInt::from(b) * b);
    exact_div(num, 6, "A_10 prefactor")
}

/// A_14 = (-1)^((x-y-1)/2) x y (x^2 - y^2)(x^2 - 9y^2) / 30 with y odd,
/// obtained from the trace of (x + y sqrt(-3))^6 over 720 sqrt(-3).
fn eval_a14(rep: EisenRep) -> Result<BigInt> {
    let (x, y) = (rep.x, rep.y);
    debug_assert!(y.rem_euclid(2) == 1);
    let eps = parity((x - y - 1) / 2);
    let x2 = BigInt::from(x) * x;
    let y2 = BigInt::from(y) * y;
    let num = BigInt::from(eps)
        * BigInt::from(x)
        * BigInt::from(y)
        * (&x2 - &y2)
        * (&x2 - BigInt::from(9) * &y2);
    exact_div(num, 30, "A_14 prefactor")
}

/// The r = 26 constant from the newform combination.
pub const A26_DENOMINATOR: i64 = 32_617_728; // 2^8 * 3^4 * 11^2 * 13

/// A_26 combines both fields:
///   glob * [ 2 e3 tr((x + y sqrt(-3))^12) - 2 e4 tr((a + b i)^12) ] / 32617728
/// with e3 = (-1)^((x-y-1)/2), e4 = (-1)^(a + b/2), and glob the
/// rule-supplied unit. Off the support class the coefficient is 0.
fn eval_a26(eisen: EisenRep, gauss: GaussRep, glob: i64) -> Result<BigInt> {
    let e3 = parity((eisen.x - eisen.y - 1) / 2);
    let e4 = parity(gauss.a + gauss.b / 2);
    let t3 = trace_pow(eisen.x, eisen.y, 3, 12);
    let t4 = trace_pow(gauss.a, gauss.b, 1, 12);
    let num = BigInt::from(glob)
        * (BigInt::from(2 * e3) * t3 - BigInt::from(2 * e4) * t4);
    exact_div(num, A26_DENOMINATOR, "A_26 bracket")
}

fn legendre3(x: i64) -> i64 {
    match x.rem_euclid(3) {
        1 => 1,
        2 => -1,
        _ => 0,
    }
}

fn eval_rule(r: u32, rule: SignRule, p: u64) -> Result<BigInt> {
    match r {
        4 => Ok(eval_a4(pick_eisen(p, rule))),
        8 => Ok(eval_a8(pick_eisen(p, rule))),
        // off the support class the coefficient vanishes outright; the
        // closed form only describes the supported split primes
        14 if p % 12 == 1 => Ok(BigInt::zero()),
        14 => eval_a14(pick_eisen(p, rule)),
        6 => Ok(eval_a6(pick_gauss_odd_positive(p))),
        10 if p % 12 == 1 => Ok(BigInt::zero()),
        10 => eval_a10(pick_gauss(p, rule)),
        26 => {
            match p % 12 {
                // only one field represents p; the missing pair is zero and
                // kills its side of the bracket
                5 | 7 => Ok(BigInt::zero()),
                _ => {
                    let eisen = pick_eisen(p, rule);
                    let gauss = pick_gauss_odd_positive(p);
                    let glob = match rule {
                        SignRule::XMod4ThreeLegendre | SignRule::XMod4OneLegendre => {
                            legendre3(eisen.x)
                        }
                        _ => 1,
                    };
                    eval_a26(eisen, gauss, glob)
                }
            }
        }
        _ => Err(Error::UnsupportedFamily(r)),
    }
}

fn candidate_rules(r: u32) -> &'static [SignRule] {
    match r {
        4 | 8 | 14 => &[SignRule::XMod3One, SignRule::XMod3Two, SignRule::XPositive],
        6 => &[SignRule::GaussOddPositive],
        10 => &[SignRule::GaussBSlotMod12, SignRule::GaussBSlotAPositive],
        26 => &[
            SignRule::XMod4ThreeLegendre,
            SignRule::XMod4OneLegendre,
            SignRule::XMod3One,
            SignRule::XPositive,
        ],
        _ => &[],
    }
}

/// The split congruence condition for each family.
fn split_condition(r: u32) -> Result<(u64, &'static [u64])> {
    match r {
        4 | 8 | 14 => Ok((3, &[1])),
        6 | 10 => Ok((4, &[1])),
        26 => Ok((12, &[1, 5, 7])),
        _ => Err(Error::UnsupportedFamily(r)),
    }
}

fn check_split(r: u32, p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let (modulus, classes) = split_condition(r)?;
    if !classes.contains(&(p % modulus)) {
        return Err(Error::NotSplit { p, r, class: classes[0], modulus });
    }
    Ok(())
}

/// The ten smallest split primes for the family, the fit window of the
/// normalization.
pub fn fit_primes(r: u32) -> Result<Vec<u64>> {
    let (modulus, classes) = split_condition(r)?;
    let mut out = Vec::with_capacity(10);
    let mut p = 5;
    while out.len() < 10 {
        if is_prime(p) && classes.contains(&(p % modulus)) {
            out.push(p);
        }
        p += 2;
    }
    Ok(out)
}

/// Eta-expansion oracle A_r(n) used for fitting and cross-checking.
pub fn eta_coefficient_oracle(r: u32, up_to: usize) -> Result<Vec<BigInt>> {
    let spec = EtaPowerSpec::for_family(r)?;
    let series = eta_power_series(spec, up_to + 1);
    Ok(series.coeffs().to_vec())
}

static FITTED: [OnceLock<Option<Normalization>>; 6] = [
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
];

/// Resolves (and caches) the normalization for a family member by fitting
/// the candidate rules against the eta oracle at the ten smallest split
/// primes. The first candidate that reproduces every oracle value wins.
pub fn normalization(r: u32) -> Result<Normalization> {
    let idx = FAMILY_R
        .iter()
        .position(|&rr| rr == r)
        .ok_or(Error::UnsupportedFamily(r))?;
    let fitted = FITTED[idx].get_or_init(|| {
        let primes = fit_primes(r).ok()?;
        let bound = *primes.last().unwrap() as usize;
        let oracle = eta_coefficient_oracle(r, bound).ok()?;
        'rules: for &rule in candidate_rules(r) {
            for &p in &primes {
                match eval_rule(r, rule, p) {
                    Ok(v) if v == oracle[p as usize] => {}
                    _ => continue 'rules,
                }
            }
            return Some(Normalization { r, rule });
        }
        None
    });
    fitted.ok_or_else(|| {
        Error::Inconsistency(format!("no candidate normalization fits r = {r}"))
    })
}

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

/// Exact A_r(p) for a split prime, evaluated from the closed form at the
/// fitted normalization. Inert primes are rejected; their vanishing is an
/// annihilation statement, not a representation one.
pub fn cm_prime_coeff(r: u32, p: u64) -> Result<BigInt> {
    check_split(r, p)?;
    let norm = normalization(r)?;
    eval_rule(r, norm.rule, p)
}

fn mod_pow(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc: u64 = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * base as u128 % m as u128) as u64;
        }
        base = (base as u128 * base as u128 % m as u128) as u64;
        e >>= 1;
    }
    acc
}

fn mod_inv(a: u64, m: u64) -> u64 {
    // extended Euclid; m is prime in every call site
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r): (i128, i128) = (m as i128, (a % m) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert_eq!(r, 1, "inverse of {a} mod {m} does not exist");
    t.rem_euclid(m as i128) as u64
}

fn to_mod(v: i64, m: u64) -> u64 {
    (v as i128).rem_euclid(m as i128) as u64
}

/// Residue of A_r(p) mod p from the reduced closed forms, an independent
/// route that never builds the exact integer:
///
/// - A_4 = 2x, A_6 = -4b^2, A_8 = -24xy^2,
/// - A_10 = sign * (a^3 b - a b^3) / 6,
/// - A_14 = -8 eps x^3 y^3 / 15 (the reduction of the trace formula; the
///   source's displayed constant differs by a unit),
/// - A_26 = glob * (5971968 e3 y^12 - 8192 e4 b^12) / 32617728, evaluated
///   p-adically at p = 13 where the constant loses a factor.
pub fn cm_residue(r: u32, p: u64) -> Result<u64> {
    check_split(r, p)?;
    let norm = normalization(r)?;
    match r {
        4 => {
            let rep = norm.eisen_rep(p).unwrap();
            Ok(to_mod(2 * rep.x, p))
        }
        6 => {
            let rep = norm.gauss_rep(p).unwrap();
            let b2 = to_mod(rep.b, p) * to_mod(rep.b, p) % p;
            Ok((p - 4 % p * b2 % p) % p)
        }
        8 => {
            let rep = norm.eisen_rep(p).unwrap();
            let xy2 = to_mod(rep.x, p) as u128 * (to_mod(rep.y, p) * to_mod(rep.y, p) % p) as u128
                % p as u128;
            Ok((p as u128 - 24 % p as u128 * xy2 % p as u128) as u64 % p)
        }
        10 => {
            if p % 12 == 1 {
                return Ok(0); // off the support class
            }
            let rep = norm.gauss_rep(p).unwrap();
            let sign = parity(rep.a) * if rep.b.rem_euclid(4) == 1 { -1 } else { 1 };
            let (a, b) = (to_mod(rep.a, p), to_mod(rep.b, p));
            let a2 = a * a % p;
            let b2 = b * b % p;
            let diff = (a2 + p - b2) % p;
            let core = a as u128 * b as u128 % p as u128 * diff as u128 % p as u128;
            let v = core as u64 * mod_inv(6, p) % p;
            Ok(if sign == 1 { v } else { (p - v) % p })
        }
        14 => {
            if p % 12 == 1 {
                return Ok(0);
            }
            let rep = norm.eisen_rep(p).unwrap();
            let eps = parity((rep.x - rep.y - 1) / 2);
            let (x, y) = (to_mod(rep.x, p), to_mod(rep.y, p));
            let x3 = mod_pow(x, 3, p);
            let y3 = mod_pow(y, 3, p);
            let core = 8 % p * (x3 as u128 * y3 as u128 % p as u128) as u64 % p
                * mod_inv(15, p)
                % p;
            Ok(if eps == 1 { (p - core) % p } else { core })
        }
        26 => {
            if p % 12 != 1 {
                return Ok(0);
            }
            let eisen = norm.eisen_rep(p).unwrap();
            let gauss = norm.gauss_rep(p).unwrap();
            let glob = legendre3(eisen.x);
            let e3 = parity((eisen.x - eisen.y - 1) / 2);
            let e4 = parity(gauss.a + gauss.b / 2);
            // v_p of the denominator: 13 divides it once, no other split
            // prime does
            let val = if p == 13 { 1u32 } else { 0 };
            let m = p.pow(val + 1);
            let num = if val == 0 {
                // one-step reduction of the traces mod p:
                // tr((x + y sqrt(-3))^12) = 2985984 y^12,
                // tr((a + b i)^12) = 4096 b^12
                let y12 = mod_pow(to_mod(eisen.y, m), 12, m);
                let b12 = mod_pow(to_mod(gauss.b, m), 12, m);
                let t3 = 5_971_968 % m as u128 * y12 as u128 % m as u128;
                let t4 = 8192 % m as u128 * b12 as u128 % m as u128;
                let s3 = if e3 == 1 { t3 } else { (m as u128 - t3) % m as u128 };
                let s4 = if e4 == 1 { (m as u128 - t4) % m as u128 } else { t4 };
                let tot = (s3 + s4) % m as u128;
                (if glob == 1 { tot } else { (m as u128 - tot) % m as u128 }) as u64
            } else {
                // the y^12 shortcut only holds mod p; at p = 13 evaluate the
                // full binomial traces mod p^2 before dividing the 13 out
                let t3 = trace_pow_mod(eisen.x, eisen.y, 3, m);
                let t4 = trace_pow_mod(gauss.a, gauss.b, 1, m);
                let s3 = 2 * e3 as i128 * t3 as i128;
                let s4 = 2 * e4 as i128 * t4 as i128;
                (glob as i128 * (s3 - s4)).rem_euclid(m as i128) as u64
            };
            let mut num = num;
            let mut den = A26_DENOMINATOR as u64;
            for _ in 0..val {
                if num % p != 0 {
                    return Err(Error::Inconsistency(format!(
                        "A_26 residue at p = {p}: numerator not divisible by {p}"
                    )));
                }
                num /= p;
                den /= p;
            }
            Ok(num % p * mod_inv(den % p, p) % p)
        }
        _ => Err(Error::UnsupportedFamily(r)),
    }
}

/// tr((u + v sqrt(-d))^k) mod m with k = 12, via the even binomial sum.
fn trace_pow_mod(u: i64, v: i64, d: u64, m: u64) -> u64 {
    const BINOM12: [u64; 7] = [1, 66, 495, 924, 495, 66, 1];
    let mm = m as u128;
    let (u, v) = (to_mod(u, m), to_mod(v, m));
    let mut acc: u128 = 0;
    for (idx, &c) in BINOM12.iter().enumerate() {
        let j = 2 * idx as u64;
        let term = c as u128 % mm * mod_pow(u, 12 - j, m) as u128 % mm
            * mod_pow(v, j, m) as u128
            % mm
            * mod_pow(m - d % m, j / 2, m) as u128
            % mm;
        acc = (acc + term) % mm;
    }
    (2 * acc % mm) as u64
}

/// A nonvanishing witness: the smallest m with A_r(m p) nonzero mod p.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NonvanishingWitness {
    pub m: usize,
    pub index: usize,
    pub residue: u64,
}

/// Certifies that T_p does not annihilate the eta power mod p, by
/// scanning A_r(m p) mod p for the smallest failing m.
///
/// `precision` bounds the scan; the index where a witness is guaranteed
/// is p for a split prime inside the support class, 5p for r = 10 and
/// 7p for r = 14 off it, and p^2 for r = 26 when A_26(p) = 0.
pub fn nonvanishing_certificate(
    r: u32,
    p: u64,
    precision: usize,
) -> Result<NonvanishingWitness> {
    check_split(r, p)?;
    let spec = EtaPowerSpec::for_family(r)?;
    let series = eta_power_series_mod(spec, precision, p)?;
    let mut m = 1usize;
    while m * p as usize + 1 <= precision {
        let index = m * p as usize;
        let residue = series.coeff(index);
        if residue != 0 {
            return Ok(NonvanishingWitness { m, index, residue });
        }
        m += 1;
    }
    let needed = match r {
        26 if p % 12 != 1 => p as usize * p as usize,
        10 if p % 12 == 1 => 5 * p as usize,
        14 if p % 12 == 1 => 7 * p as usize,
        _ => p as usize,
    };
    if precision <= needed {
        Err(Error::InsufficientPrecision { needed: needed + 1, have: precision })
    } else {
        Err(Error::NoWitnessFound { scanned: precision })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn representation_sets() {
        let reps = rep_two_squares(13).unwrap();
        assert_eq!(reps.len(), 8);
        assert!(reps.iter().any(|r| (r.a, r.b) == (3, 2)));
        for r in &reps {
            assert_eq!(r.a * r.a + r.b * r.b, 13);
        }
        assert!(rep_two_squares(29).unwrap().iter().any(|r| (r.a, r.b) == (5, 2)));
        assert!(rep_two_squares(5).unwrap().iter().any(|r| (r.a, r.b) == (1, 2)));
        assert!(rep_two_squares(11).is_err());

        let reps = rep_eisenstein(7).unwrap();
        assert_eq!(reps.len(), 4);
        assert!(reps.iter().any(|r| (r.x, r.y) == (-2, 1)));
        for r in &reps {
            assert_eq!(r.x * r.x + 3 * r.y * r.y, 7);
        }
        assert!(rep_eisenstein(19).unwrap().iter().any(|r| (r.x, r.y) == (4, 1)));
        assert!(rep_eisenstein(31).unwrap().iter().any(|r| (r.x, r.y) == (-2, 3)));
        assert!(rep_eisenstein(5).is_err());
    }

    #[test]
    fn fitted_rules_resolve() {
        assert_eq!(normalization(8).unwrap().describe(), "x = 1 (mod 3), y > 0");
        assert_eq!(normalization(4).unwrap().describe(), "x = 1 (mod 3), y > 0");
        assert_eq!(normalization(14).unwrap().describe(), "x = 1 (mod 3), y > 0");
        assert_eq!(normalization(6).unwrap().describe(), "a odd, a > 0, b > 0");
        assert!(normalization(10).unwrap().describe().starts_with("b odd"));
        assert!(normalization(26).unwrap().describe().starts_with("x = 3 (mod 4)"));
        assert!(normalization(12).is_err());
    }

    #[test]
    fn coefficient_table_values() {
        assert_eq!(cm_prime_coeff(8, 7).unwrap(), BigInt::from(20));
        assert_eq!(cm_prime_coeff(8, 13).unwrap(), BigInt::from(-70));
        assert_eq!(cm_prime_coeff(8, 19).unwrap(), BigInt::from(56));
        assert_eq!(cm_prime_coeff(8, 31).unwrap(), BigInt::from(308));
        assert_eq!(cm_prime_coeff(8, 37).unwrap(), BigInt::from(110));

        assert_eq!(cm_prime_coeff(26, 13).unwrap(), BigInt::from(1));
        assert_eq!(cm_prime_coeff(26, 37).unwrap(), BigInt::from(299));
        assert_eq!(cm_prime_coeff(26, 5).unwrap(), BigInt::zero());
        assert_eq!(cm_prime_coeff(26, 7).unwrap(), BigInt::zero());

        assert_eq!(cm_prime_coeff(6, 5).unwrap(), BigInt::from(-6));
        assert_eq!(cm_prime_coeff(4, 7).unwrap(), BigInt::from(-4));
        assert_eq!(cm_prime_coeff(10, 17).unwrap(), BigInt::from(-10));
        assert_eq!(cm_prime_coeff(14, 7).unwrap(), BigInt::from(1));

        assert!(cm_prime_coeff(8, 11).is_err()); // inert
    }

    #[test]
    fn residues_match_closed_forms() {
        // (8, 7): -24 x y^2 = 48 = 6 mod 7, and 20 mod 7 = 6
        assert_eq!(cm_residue(8, 7).unwrap(), 6);
        // (4, 7): 2x = -4 = 3 mod 7
        assert_eq!(cm_residue(4, 7).unwrap(), 3);
        for r in FAMILY_R {
            for p in 5..200u64 {
                if check_split(r, p).is_err() {
                    continue;
                }
                let exact = cm_prime_coeff(r, p).unwrap();
                let reduced = cm_residue(r, p).unwrap();
                let want = (exact % BigInt::from(p) + BigInt::from(p)) % BigInt::from(p);
                assert_eq!(
                    BigInt::from(reduced),
                    want,
                    "residue route disagrees at r = {r}, p = {p}"
                );
            }
        }
    }

    #[test]
    fn a8_never_vanishes_mod_split_p() {
        for p in 5..500u64 {
            if is_prime(p) && p % 3 == 1 {
                assert_ne!(cm_residue(8, p).unwrap(), 0, "A_8({p}) = 0 mod {p}");
            }
        }
    }

    #[test]
    fn closed_form_matches_eta_expansion() {
        let bound = 700usize;
        for r in FAMILY_R {
            let oracle = eta_coefficient_oracle(r, bound).unwrap();
            for p in 5..bound as u64 {
                if check_split(r, p).is_err() {
                    continue;
                }
                assert_eq!(
                    cm_prime_coeff(r, p).unwrap(),
                    oracle[p as usize],
                    "closed form off oracle at r = {r}, p = {p}"
                );
            }
        }
    }

    #[test]
    fn nonvanishing_witnesses() {
        let w = nonvanishing_certificate(8, 7, 200).unwrap();
        assert_eq!(w.m, 1);
        let w = nonvanishing_certificate(26, 5, 50).unwrap();
        assert_eq!(w.m, 5); // A_26(25) = -26, nonzero mod 5
        let w = nonvanishing_certificate(10, 13, 100).unwrap();
        assert_eq!(w.m, 5); // support kills 13..52; A_10(65) survives

        // too little precision to reach p^2 = 25
        assert!(matches!(
            nonvanishing_certificate(26, 5, 20),
            Err(Error::InsufficientPrecision { .. })
        ));
    }

    #[test]
    fn inert_side_vanishes() {
        use crate::hecke::annihilated_mod_reduced;
        let families: Vec<(u32, fn(u64) -> bool)> = vec![
            (8, |l| l % 3 == 2),
            (4, |l| l % 3 == 2),
            (14, |l| l % 3 == 2),
            (6, |l| l % 4 == 3),
            (10, |l| l % 4 == 3),
            (26, |l| l % 12 == 11),
        ];
        for (r, inert) in families {
            for ell in (5..=50u64).filter(|&l| is_prime(l) && inert(l)) {
                let spec = EtaPowerSpec::for_family(r).unwrap();
                let f = eta_power_series_mod(spec, 40 * ell as usize, ell).unwrap();
                let check = annihilated_mod_reduced(&f);
                assert!(check.annihilated, "A_{r}(l n) not 0 mod l = {ell}");
            }
        }
    }
}
