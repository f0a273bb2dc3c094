//! Report records: one JSON object per line, fixed field order, with a
//! schema version on every record. Timestamps and elapsed times are the
//! only nondeterministic fields and both honor the suppression flag.

use std::io::Write;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::Result;
use serde::Serialize;

use qeta::congruence::{
    ClaimKind, Classification, ScanReport, SweepEntry, SweepKind, Verdict, VerificationReport,
};

pub const SCHEMA_VERSION: u32 = 1;

/// The envelope around every payload.
#[derive(Serialize)]
pub struct Record<P: Serialize> {
    pub schema_version: u32,
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
    #[serde(flatten)]
    pub payload: P,
}

/// Shared output settings.
#[derive(Clone, Copy, Debug)]
pub struct Emitter {
    pub with_timestamps: bool,
}

impl Emitter {
    fn stamp(&self) -> Option<u64> {
        self.with_timestamps.then(|| {
            SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
        })
    }

    pub fn record<P: Serialize>(&self, kind: &'static str, payload: P) -> Record<P> {
        Record { schema_version: SCHEMA_VERSION, kind, timestamp: self.stamp(), payload }
    }

    pub fn emit<P: Serialize, W: Write>(
        &self,
        out: &mut W,
        kind: &'static str,
        payload: P,
    ) -> Result<()> {
        let line = serde_json::to_string(&self.record(kind, payload))?;
        writeln!(out, "{line}")?;
        Ok(())
    }
}

#[derive(Serialize)]
pub struct CoeffRow {
    pub r: u32,
    pub delta: u32,
    pub n: usize,
    /// Decimal string; exact big integers are never truncated.
    pub value: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u64>,
}

#[derive(Serialize)]
pub struct ClaimFields {
    pub r: u32,
    pub ell: u64,
    pub s: u32,
    pub t: u32,
    pub offset: u64,
}

#[derive(Serialize)]
pub struct VerifyPayload {
    pub t: u32,
    pub ell: u64,
    pub offset: u64,
    pub decompositions: Vec<DecompositionFields>,
    pub classification: &'static str,
    pub verdict: &'static str,
    pub bound: usize,
    pub witnesses: Vec<WitnessFields>,
    pub backend: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub special_prime: Option<Box<VerifyPayload>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

#[derive(Serialize)]
pub struct DecompositionFields {
    pub r: u32,
    pub s: u32,
}

#[derive(Serialize)]
pub struct WitnessFields {
    pub n: usize,
    pub index: usize,
    pub residue: u64,
}

pub fn classification_str(c: Classification) -> &'static str {
    match c {
        Classification::CongruenceHolds => "congruence_holds",
        Classification::CongruenceFails => "congruence_fails",
        Classification::OutOfScope => "out_of_scope",
    }
}

pub fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::HoldsToBound => "holds_to_bound",
        Verdict::Refuted => "refuted",
        Verdict::NotApplicable => "not_applicable",
    }
}

pub fn witnesses_of(report: &VerificationReport, ell: u64, offset: u64) -> Vec<WitnessFields> {
    report
        .witnesses
        .iter()
        .map(|&(n, residue)| WitnessFields {
            n,
            index: match report.claim {
                ClaimKind::Progression(_) => ell as usize * n + offset as usize,
                ClaimKind::SpecialPrime { .. } => n,
            },
            residue,
        })
        .collect()
}

#[derive(Serialize)]
pub struct ScanHeaderPayload {
    pub role: &'static str,
    pub rs: Vec<u32>,
    pub ell_max: u64,
    pub s_max: u32,
    pub bound: usize,
}

#[derive(Serialize)]
pub struct ScanEntryPayload {
    pub r: u32,
    pub ell: u64,
    pub s: u32,
    pub t: i64,
    pub kind_detail: &'static str,
    pub classification: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<&'static str>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<WitnessFields>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

#[derive(Serialize)]
pub struct FlagPayload {
    pub r: u32,
    pub ell: u64,
    pub s: u32,
    pub reason: String,
}

#[derive(Serialize)]
pub struct SentinelPayload {
    pub role: &'static str,
    pub complete: bool,
    pub records: usize,
    pub flags: usize,
}

pub fn scan_entry_payload(entry: &SweepEntry, with_elapsed: bool) -> ScanEntryPayload {
    let t = entry.ell as i64 * i64::from(entry.s) - i64::from(entry.r);
    let (verdict, witnesses, elapsed_ms) = match &entry.report {
        Some(rep) => (
            Some(verdict_str(rep.verdict)),
            witnesses_of(
                rep,
                entry.ell,
                match rep.claim {
                    ClaimKind::Progression(c) => c.offset,
                    ClaimKind::SpecialPrime { .. } => 0,
                },
            ),
            with_elapsed.then(|| rep.elapsed.as_millis() as u64),
        ),
        None => (None, Vec::new(), None),
    };
    ScanEntryPayload {
        r: entry.r,
        ell: entry.ell,
        s: entry.s,
        t,
        kind_detail: match entry.kind {
            SweepKind::Verify => "verify",
            SweepKind::SpecialPrime => "special_prime",
        },
        classification: classification_str(entry.classification),
        verdict,
        witnesses,
        error: entry.error.clone(),
        elapsed_ms,
    }
}

#[derive(Serialize)]
pub struct FermatRepPayload {
    pub field: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base: Option<(i64, i64)>,
    pub note: &'static str,
}

#[derive(Serialize)]
pub struct FermatCoeffPayload {
    pub r: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gauss: Option<(i64, i64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eisenstein: Option<(i64, i64)>,
    pub normalization: &'static str,
    pub value: String,
    pub residue_mod_p: u64,
}

#[derive(Serialize)]
pub struct FermatPayload {
    pub p: u64,
    pub representations: Vec<FermatRepPayload>,
    pub coefficients: Vec<FermatCoeffPayload>,
}

#[derive(Serialize)]
pub struct HeckePayload {
    pub r: u32,
    pub delta: u32,
    pub ell: u64,
    pub weight: u32,
    pub precision: usize,
    pub annihilated: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_n: Option<usize>,
    pub prediction: &'static str,
    pub agrees: bool,
}

/// Per-class scan rows for the `verify`-style detailed output of a
/// counterexample scan (used in tests and future subcommands).
#[derive(Serialize)]
pub struct ClassWitnessPayload {
    pub class: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residue: Option<u64>,
    pub conclusive: bool,
}

pub fn class_rows(report: &ScanReport) -> Vec<ClassWitnessPayload> {
    report
        .class_witnesses
        .iter()
        .enumerate()
        .map(|(class, witness)| ClassWitnessPayload {
            class: class as u64,
            witness_n: witness.map(|(n, _)| n),
            residue: witness.map(|(_, res)| res),
            conclusive: witness.is_some(),
        })
        .collect()
}
