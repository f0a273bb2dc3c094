//! Generation, classification, verification and refutation of
//! Ramanujan-type congruences p_{-t}(l n + a) = 0 (mod l) with t = l s - r.
//!
//! The progression offset is a = r(l^2 - 1)/24 mod l, which satisfies the
//! arithmetic constraint 24 a = t (mod l) shared by every congruence of
//! this shape. Verification sweeps run on the modular backend; every
//! refutation witness is re-checked against the exact backend before it
//! is reported.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::etaforms::{pcolor_series, FAMILY_R};
use crate::hecke::{is_prime, serre_case, SerreCase};
use crate::qseries::ModSeries;

/// Precision caps for the two backends. Desk-scale defaults; nothing is
/// ever silently truncated once a cap is hit.
#[derive(Clone, Copy, Debug)]
pub struct EngineConfig {
    pub max_modular_precision: usize,
    pub max_exact_precision: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self { max_modular_precision: 100_000, max_exact_precision: 10_000 }
    }
}

/// One congruence claim: p_{-t}(l n + offset) = 0 (mod l) for all n.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CongruenceClaim {
    pub r: u32,
    pub ell: u64,
    pub s: u32,
    pub t: u32,
    pub offset: u64,
}

impl CongruenceClaim {
    /// Validates the family member, the prime, and t = l s - r >= 1.
    pub fn new(r: u32, ell: u64, s: u32) -> Result<Self> {
        let a = offset(r, ell)?;
        let t = ell as i64 * i64::from(s) - i64::from(r);
        if t < 1 {
            return Err(Error::Inconsistency(format!(
                "t = {ell}*{s} - {r} = {t} is not a positive color count"
            )));
        }
        Ok(Self { r, ell, s, t: t as u32, offset: a })
    }
}

fn require_family(r: u32) -> Result<()> {
    if FAMILY_R.contains(&r) {
        Ok(())
    } else {
        Err(Error::UnsupportedFamily(r))
    }
}

fn require_progression_prime(ell: u64) -> Result<()> {
    if !is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    if ell < 5 {
        return Err(Error::PrimeTooSmall(ell));
    }
    Ok(())
}

/// The progression offset a = r(l^2 - 1)/24 - l * floor(r(l^2-1)/(24 l)),
/// i.e. the least nonnegative residue of r(l^2 - 1)/24 mod l.
/// 24 divides l^2 - 1 for every prime l >= 5.
pub fn offset(r: u32, ell: u64) -> Result<u64> {
    require_family(r)?;
    require_progression_prime(ell)?;
    let big = (ell as u128 * ell as u128 - 1) * r as u128;
    debug_assert_eq!(big % 24, 0);
    Ok(((big / 24) % ell as u128) as u64)
}

/// The unique a in [0, l) with 24 a = t (mod l). Every congruence of this
/// shape satisfies that constraint, and the generated offset always does:
/// 24 * offset(r, l) = -r = t (mod l).
pub fn admissible_offsets(t: u32, ell: u64) -> Result<u64> {
    require_progression_prime(ell)?;
    let inv24 = mod_inv(24 % ell, ell);
    Ok(t as u64 % ell * inv24 % ell)
}

fn mod_inv(a: u64, m: u64) -> u64 {
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

/// What the residue class of l predicts for the family r.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    /// Annihilation holds and the congruence family is a theorem.
    CongruenceHolds,
    /// l splits for the family; the congruence provably fails.
    CongruenceFails,
    /// r carries no congruence family.
    OutOfScope,
}

/// Residue-class classification of (r, l); l = 2, 3 and composites are
/// rejected, r outside the family set is out of scope.
pub fn classify(r: u32, ell: u64) -> Result<Classification> {
    require_progression_prime(ell)?;
    if !FAMILY_R.contains(&r) {
        return Ok(Classification::OutOfScope);
    }
    Ok(match serre_case(r, ell)? {
        SerreCase::Annihilated => Classification::CongruenceHolds,
        SerreCase::NotAnnihilated => Classification::CongruenceFails,
        SerreCase::OutOfFamily => Classification::OutOfScope,
    })
}

/// Verdict of a verification run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// No counterexample below the scan bound.
    HoldsToBound,
    /// A witness with nonzero residue was found (and re-checked exactly).
    Refuted,
    /// No theorem decomposition applies.
    NotApplicable,
}

/// What a verification report is about: a progression claim, or the
/// l | t support statement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClaimKind {
    Progression(CongruenceClaim),
    SpecialPrime { ell: u64, t: u32 },
}

/// Outcome of verifying one claim.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub claim: ClaimKind,
    pub verdict: Verdict,
    /// Scan bound: n ranged over 0..=bound.
    pub bound: usize,
    /// Witnesses (n, nonzero residue); empty for holds_to_bound.
    pub witnesses: Vec<(usize, u64)>,
    pub elapsed: Duration,
    pub backend: &'static str,
}

fn pcolor_mod_capped(
    t: u32,
    precision: usize,
    ell: u64,
    config: &EngineConfig,
) -> Result<ModSeries> {
    if precision > config.max_modular_precision {
        return Err(Error::PrecisionOverflow {
            needed: precision,
            cap: config.max_modular_precision,
            backend: "modular",
        });
    }
    ModSeries::pcolor_series(t, precision, ell)
}

/// Exact re-check of scan witnesses: recomputes p_{-t} with exact
/// integers up to the largest witness index and confirms each residue.
fn recheck_witnesses_exact(
    t: u32,
    ell: u64,
    indices_and_residues: &[(usize, u64)],
    config: &EngineConfig,
) -> Result<()> {
    let Some(&max_index) = indices_and_residues.iter().map(|(i, _)| i).max() else {
        return Ok(());
    };
    let needed = max_index + 1;
    if needed > config.max_exact_precision {
        return Err(Error::PrecisionOverflow {
            needed,
            cap: config.max_exact_precision,
            backend: "exact",
        });
    }
    let exact = pcolor_series(t, needed);
    let ellb = BigInt::from(ell);
    for &(index, residue) in indices_and_residues {
        let got = exact.coeff(index) % &ellb;
        let got = if got < BigInt::zero() { got + &ellb } else { got };
        if got != BigInt::from(residue) {
            return Err(Error::Inconsistency(format!(
                "backends disagree at index {index}: exact gives {got}, modular gave {residue}"
            )));
        }
    }
    Ok(())
}

/// Scans p_{-t}(l n + a) mod l for 0 <= n <= bound. The first nonzero
/// residue refutes the claim; it is re-checked on the exact backend
/// before the report is returned.
pub fn verify_claim(
    claim: &CongruenceClaim,
    bound: usize,
    config: &EngineConfig,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let ell = claim.ell;
    let precision = ell as usize * bound + claim.offset as usize + 1;
    let series = pcolor_mod_capped(claim.t, precision, ell, config)?;
    let mut witnesses = Vec::new();
    for n in 0..=bound {
        let index = ell as usize * n + claim.offset as usize;
        let residue = series.coeff(index);
        if residue != 0 {
            witnesses.push((n, residue));
            break;
        }
    }
    let backend;
    if witnesses.is_empty() {
        backend = "modular";
    } else {
        let rechecks: Vec<(usize, u64)> = witnesses
            .iter()
            .map(|&(n, res)| (ell as usize * n + claim.offset as usize, res))
            .collect();
        recheck_witnesses_exact(claim.t, ell, &rechecks, config)?;
        backend = "modular + exact recheck";
    }
    Ok(VerificationReport {
        claim: ClaimKind::Progression(*claim),
        verdict: if witnesses.is_empty() { Verdict::HoldsToBound } else { Verdict::Refuted },
        bound,
        witnesses,
        elapsed: start.elapsed(),
        backend,
    })
}

/// Witness table of a counterexample scan, one row per residue class of
/// n mod l inside the offset progression.
#[derive(Clone, Debug)]
pub struct ScanReport {
    pub claim: CongruenceClaim,
    pub bound: usize,
    /// Indexed by class c = 0..l: the smallest witness n = c (mod l) with
    /// p_{-t}(l n + a) nonzero mod l, as (n, residue). `None` records
    /// bound insufficiency for that class, never a disproof.
    pub class_witnesses: Vec<Option<(usize, u64)>>,
    pub elapsed: Duration,
    pub backend: &'static str,
}

impl ScanReport {
    /// True when every class produced a witness within the bound.
    pub fn all_classes_witnessed(&self) -> bool {
        self.class_witnesses.iter().all(|w| w.is_some())
    }

    /// Classes left without a witness (inconclusive at this bound).
    pub fn unwitnessed_classes(&self) -> Vec<u64> {
        self.class_witnesses
            .iter()
            .enumerate()
            .filter(|(_, w)| w.is_none())
            .map(|(c, _)| c as u64)
            .collect()
    }
}

/// For a claim in a failing class, collects per residue class c mod l the
/// smallest witness n = c (mod l) with p_{-t}(l n + a) nonzero mod l.
pub fn counterexample_scan(
    r: u32,
    ell: u64,
    s: u32,
    bound: usize,
    config: &EngineConfig,
) -> Result<ScanReport> {
    if classify(r, ell)? != Classification::CongruenceFails {
        return Err(Error::Inconsistency(format!(
            "counterexample scan requires a failing class, but classify({r}, {ell}) predicts the congruence"
        )));
    }
    let start = Instant::now();
    let claim = CongruenceClaim::new(r, ell, s)?;
    let precision = ell as usize * bound + claim.offset as usize + 1;
    let series = pcolor_mod_capped(claim.t, precision, ell, config)?;
    let mut class_witnesses: Vec<Option<(usize, u64)>> = vec![None; ell as usize];
    let mut found = 0usize;
    for n in 0..=bound {
        let class = n % ell as usize;
        if class_witnesses[class].is_some() {
            continue;
        }
        let residue = series.coeff(ell as usize * n + claim.offset as usize);
        if residue != 0 {
            class_witnesses[class] = Some((n, residue));
            found += 1;
            if found == ell as usize {
                break;
            }
        }
    }
    let rechecks: Vec<(usize, u64)> = class_witnesses
        .iter()
        .flatten()
        .map(|&(n, res)| (ell as usize * n + claim.offset as usize, res))
        .collect();
    recheck_witnesses_exact(claim.t, ell, &rechecks, config)?;
    Ok(ScanReport {
        claim,
        bound,
        class_witnesses,
        elapsed: start.elapsed(),
        backend: "modular + exact recheck",
    })
}

/// The l | t special case: every p_{-t}(m) with l not dividing m
/// vanishes mod l, because the whole series collapses onto multiples
/// of l. Verifies that for all m <= bound.
pub fn special_prime_check(
    ell: u64,
    t: u32,
    bound: usize,
    config: &EngineConfig,
) -> Result<VerificationReport> {
    require_progression_prime(ell)?;
    if u64::from(t) % ell != 0 || t == 0 {
        return Err(Error::NotSpecialPrime { ell, t: u64::from(t) });
    }
    let start = Instant::now();
    let precision = bound + 1;
    let series = pcolor_mod_capped(t, precision, ell, config)?;
    let mut witnesses = Vec::new();
    for m in 1..=bound {
        if m % ell as usize == 0 {
            continue;
        }
        let residue = series.coeff(m);
        if residue != 0 {
            witnesses.push((m, residue));
            break;
        }
    }
    if !witnesses.is_empty() {
        recheck_witnesses_exact(t, ell, &witnesses, config)?;
    }
    Ok(VerificationReport {
        claim: ClaimKind::SpecialPrime { ell, t },
        verdict: if witnesses.is_empty() { Verdict::HoldsToBound } else { Verdict::Refuted },
        bound,
        witnesses,
        elapsed: start.elapsed(),
        backend: "modular + exact recheck",
    })
}

/// How one sweep item was handled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepKind {
    /// Standard claim, verified against its classification.
    Verify,
    /// l | t: routed to the special-prime support check.
    SpecialPrime,
}

/// One row of a sweep: the claim, its classification, the verification
/// outcome, and a FLAG when theory and experiment disagree.
#[derive(Clone, Debug)]
pub struct SweepEntry {
    pub r: u32,
    pub ell: u64,
    pub s: u32,
    pub kind: SweepKind,
    pub classification: Classification,
    pub report: Option<VerificationReport>,
    /// Set when the outcome contradicts the classification.
    pub flag: Option<String>,
    /// Per-claim failures stay local to the entry.
    pub error: Option<String>,
}

/// Cross-product sweep over (r, l, s), classified then verified, emitted
/// in deterministic (r, l, s) order. Claims are independent and run in
/// parallel; any holds/fails disagreement with the classification becomes
/// a FLAG on the entry.
pub fn sweep(
    rs: &[u32],
    ell_max: u64,
    s_max: u32,
    bound: usize,
    config: &EngineConfig,
) -> Vec<SweepEntry> {
    let mut items: Vec<(u32, u64, u32)> = Vec::new();
    let mut rs_sorted = rs.to_vec();
    rs_sorted.sort_unstable();
    rs_sorted.dedup();
    for &r in &rs_sorted {
        for ell in (5..=ell_max).filter(|&l| is_prime(l)) {
            for s in 0..=s_max {
                if ell as i64 * i64::from(s) - i64::from(r) >= 1 {
                    items.push((r, ell, s));
                }
            }
        }
    }
    items
        .into_par_iter()
        .map(|(r, ell, s)| run_sweep_item(r, ell, s, bound, config))
        .collect()
}

fn run_sweep_item(
    r: u32,
    ell: u64,
    s: u32,
    bound: usize,
    config: &EngineConfig,
) -> SweepEntry {
    let t = (ell as i64 * i64::from(s) - i64::from(r)) as u32;
    let classification = match classify(r, ell) {
        Ok(c) => c,
        Err(e) => {
            return SweepEntry {
                r,
                ell,
                s,
                kind: SweepKind::Verify,
                classification: Classification::OutOfScope,
                report: None,
                flag: None,
                error: Some(e.to_string()),
            }
        }
    };
    if u64::from(t) % ell == 0 {
        // special prime: congruences on every non-multiple index
        let entry = special_prime_check(ell, t, bound, config);
        return match entry {
            Ok(report) => {
                let flag = (report.verdict != Verdict::HoldsToBound).then(|| {
                    format!(
                        "special prime l = {ell} | t = {t} must clear every non-multiple index, found witness {:?}",
                        report.witnesses.first()
                    )
                });
                SweepEntry {
                    r,
                    ell,
                    s,
                    kind: SweepKind::SpecialPrime,
                    classification,
                    report: Some(report),
                    flag,
                    error: None,
                }
            }
            Err(e) => SweepEntry {
                r,
                ell,
                s,
                kind: SweepKind::SpecialPrime,
                classification,
                report: None,
                flag: None,
                error: Some(e.to_string()),
            },
        };
    }
    let claim = match CongruenceClaim::new(r, ell, s) {
        Ok(c) => c,
        Err(e) => {
            return SweepEntry {
                r,
                ell,
                s,
                kind: SweepKind::Verify,
                classification,
                report: None,
                flag: None,
                error: Some(e.to_string()),
            }
        }
    };
    match verify_claim(&claim, bound, config) {
        Ok(report) => {
            let flag = match (classification, report.verdict) {
                (Classification::CongruenceHolds, Verdict::Refuted) => Some(format!(
                    "classified as a theorem but refuted at witness {:?}",
                    report.witnesses.first()
                )),
                (Classification::CongruenceFails, Verdict::HoldsToBound) => Some(format!(
                    "classified as failing but no witness below n = {bound}"
                )),
                _ => None,
            };
            SweepEntry {
                r,
                ell,
                s,
                kind: SweepKind::Verify,
                classification,
                report: Some(report),
                flag,
                error: None,
            }
        }
        Err(e) => SweepEntry {
            r,
            ell,
            s,
            kind: SweepKind::Verify,
            classification,
            report: None,
            flag: None,
            error: Some(e.to_string()),
        },
    }
}

/// The Euler-power route of the same congruence: a_r(l n + a) = 0 mod l
/// for 0 <= n <= bound. The claim for p_{-t} is equivalent to this by
/// the convolution argument; tests compare both routes directly.
pub fn euler_route_vanishes(
    claim: &CongruenceClaim,
    bound: usize,
    config: &EngineConfig,
) -> Result<bool> {
    let ell = claim.ell;
    let precision = ell as usize * bound + claim.offset as usize + 1;
    if precision > config.max_modular_precision {
        return Err(Error::PrecisionOverflow {
            needed: precision,
            cap: config.max_modular_precision,
            backend: "modular",
        });
    }
    let series = ModSeries::euler_power(i64::from(claim.r), precision, ell)?;
    for n in 0..=bound {
        if series.coeff(ell as usize * n + claim.offset as usize) != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> EngineConfig {
        EngineConfig::default()
    }

    #[test]
    fn offsets() {
        assert_eq!(offset(8, 11).unwrap(), 7);
        assert_eq!(offset(4, 5).unwrap(), 4);
        assert_eq!(offset(6, 7).unwrap(), 5);
        assert_eq!(offset(10, 11).unwrap(), 6);
        assert_eq!(offset(26, 11).unwrap(), 9);
        assert!(matches!(offset(8, 3), Err(Error::PrimeTooSmall(3))));
        assert!(matches!(offset(8, 9), Err(Error::NotPrime(9))));
        assert!(offset(2, 11).is_err());
    }

    #[test]
    fn admissible_offset_constraint() {
        assert_eq!(admissible_offsets(3, 11).unwrap(), 7);
        assert_eq!(admissible_offsets(1, 5).unwrap(), 4);
        assert_eq!(admissible_offsets(1, 7).unwrap(), 5);
        // the generated offset always satisfies 24 a = t (mod l)
        for r in FAMILY_R {
            for ell in [5u64, 7, 11, 13, 17, 19, 23] {
                for s in 1..=3u32 {
                    let t = ell as i64 * i64::from(s) - i64::from(r);
                    if t < 1 {
                        continue;
                    }
                    assert_eq!(
                        offset(r, ell).unwrap(),
                        admissible_offsets(t as u32, ell).unwrap(),
                        "offset identity fails at r={r} l={ell} s={s}"
                    );
                }
            }
        }
    }

    #[test]
    fn classification() {
        assert_eq!(classify(8, 11).unwrap(), Classification::CongruenceHolds);
        assert_eq!(classify(8, 7).unwrap(), Classification::CongruenceFails);
        assert_eq!(classify(26, 13).unwrap(), Classification::CongruenceFails);
        assert_eq!(classify(12, 7).unwrap(), Classification::OutOfScope);
        assert!(classify(8, 15).is_err());
        assert!(classify(8, 3).is_err());
    }

    #[test]
    fn verify_named_congruences() {
        // Ramanujan mod 5 via r = 4, s = 1
        let claim = CongruenceClaim::new(4, 5, 1).unwrap();
        assert_eq!(claim.t, 1);
        assert_eq!(claim.offset, 4);
        let report = verify_claim(&claim, 200, &cfg()).unwrap();
        assert_eq!(report.verdict, Verdict::HoldsToBound);

        // p_{-3}(11 n + 7) via r = 8, s = 1
        let claim = CongruenceClaim::new(8, 11, 1).unwrap();
        assert_eq!((claim.t, claim.offset), (3, 7));
        let report = verify_claim(&claim, 200, &cfg()).unwrap();
        assert_eq!(report.verdict, Verdict::HoldsToBound);
    }

    #[test]
    fn verify_refuted_claim() {
        // 7 = 1 mod 3, so r = 8 predicts failure; witness at n = 0:
        // p_{-6}(2) = 27 = 6 mod 7
        let claim = CongruenceClaim::new(8, 7, 2).unwrap();
        assert_eq!((claim.t, claim.offset), (6, 2));
        let report = verify_claim(&claim, 200, &cfg()).unwrap();
        assert_eq!(report.verdict, Verdict::Refuted);
        assert_eq!(report.witnesses, vec![(0, 6)]);
    }

    #[test]
    fn scan_guard_and_classes() {
        assert!(counterexample_scan(8, 11, 1, 100, &cfg()).is_err());

        let report = counterexample_scan(8, 7, 2, 300, &cfg()).unwrap();
        // six classes carry witnesses; class 5 rides a genuine congruence
        // on the sub-progression 49 m + 37 and stays empty
        assert_eq!(report.unwitnessed_classes(), vec![5]);
        for (c, w) in report.class_witnesses.iter().enumerate() {
            if let Some((n, res)) = w {
                assert_eq!(n % 7, c);
                assert_ne!(*res, 0);
            }
        }
    }

    #[test]
    fn special_primes() {
        let report = special_prime_check(13, 13, 300, &cfg()).unwrap();
        assert_eq!(report.verdict, Verdict::HoldsToBound);
        let report = special_prime_check(5, 10, 300, &cfg()).unwrap();
        assert_eq!(report.verdict, Verdict::HoldsToBound);
        let report = special_prime_check(7, 21, 300, &cfg()).unwrap();
        assert_eq!(report.verdict, Verdict::HoldsToBound);
        assert!(matches!(
            special_prime_check(13, 14, 100, &cfg()),
            Err(Error::NotSpecialPrime { .. })
        ));
        // p_{-13}(1) = 13 = 0 (mod 13): one color choice per partition of 1
        let p13 = pcolor_series(13, 3);
        assert_eq!(p13.coeff(1), &BigInt::from(13));
    }

    #[test]
    fn sweep_is_ordered_and_flag_free_on_theorem_range() {
        let entries = sweep(&[4], 13, 2, 50, &cfg());
        let keys: Vec<_> = entries.iter().map(|e| (e.r, e.ell, e.s)).collect();
        let mut sorted = keys.clone();
        sorted.sort_unstable();
        assert_eq!(keys, sorted, "sweep must emit in (r, l, s) order");
        for e in &entries {
            assert!(e.flag.is_none(), "unexpected FLAG at {:?}", (e.r, e.ell, e.s));
            assert!(e.error.is_none());
        }
    }

    #[test]
    fn bridge_between_euler_and_pcolor_routes() {
        for (r, ell, s) in [(4u32, 5u64, 1u32), (8, 11, 1), (6, 7, 1), (8, 7, 2)] {
            let claim = CongruenceClaim::new(r, ell, s).unwrap();
            let euler = euler_route_vanishes(&claim, 80, &cfg()).unwrap();
            let pcolor =
                verify_claim(&claim, 80, &cfg()).unwrap().verdict == Verdict::HoldsToBound;
            assert_eq!(euler, pcolor, "routes disagree at r={r} l={ell} s={s}");
        }
    }

    #[test]
    fn precision_cap_is_reported() {
        let tight = EngineConfig { max_modular_precision: 50, max_exact_precision: 50 };
        let claim = CongruenceClaim::new(4, 5, 1).unwrap();
        assert!(matches!(
            verify_claim(&claim, 200, &tight),
            Err(Error::PrecisionOverflow { backend: "modular", .. })
        ));
    }
}
