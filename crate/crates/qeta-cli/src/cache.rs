//! Coefficient cache: one JSON file per (r, delta, modulus, precision)
//! key, carrying a content digest. A missing, mismatched or corrupt entry
//! triggers recomputation and a rewrite, never a wrong answer.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Result;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Serialize, Deserialize)]
pub struct CacheEntry {
    pub schema_version: u32,
    pub r: u32,
    pub delta: u32,
    /// "exact" or the decimal modulus.
    pub modulus: String,
    pub precision: usize,
    pub digest: String,
    /// Coefficients as decimal strings, indexed by exponent.
    pub coeffs: Vec<String>,
}

fn digest_of(coeffs: &[String], key: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(key.as_bytes());
    for c in coeffs {
        hasher.update(c.as_bytes());
        hasher.update(b"\n");
    }
    format!("{:x}", hasher.finalize())
}

fn key_string(r: u32, delta: u32, modulus: &str, precision: usize) -> String {
    format!("r{r}-d{delta}-{modulus}-n{precision}")
}

fn entry_path(dir: &Path, r: u32, delta: u32, modulus: &str, precision: usize) -> PathBuf {
    dir.join(format!("qeta-coeffs-{}.json", key_string(r, delta, modulus, precision)))
}

/// Loads a validated entry, or None when absent or untrustworthy.
pub fn load(
    dir: &Path,
    r: u32,
    delta: u32,
    modulus: &str,
    precision: usize,
) -> Option<Vec<String>> {
    let path = entry_path(dir, r, delta, modulus, precision);
    let raw = fs::read_to_string(path).ok()?;
    let entry: CacheEntry = serde_json::from_str(&raw).ok()?;
    let key_matches = entry.schema_version == crate::report::SCHEMA_VERSION
        && entry.r == r
        && entry.delta == delta
        && entry.modulus == modulus
        && entry.precision == precision
        && entry.coeffs.len() == precision;
    if !key_matches {
        return None;
    }
    let expect = digest_of(&entry.coeffs, &key_string(r, delta, modulus, precision));
    (entry.digest == expect).then_some(entry.coeffs)
}

/// Writes (or rewrites) an entry.
pub fn store(
    dir: &Path,
    r: u32,
    delta: u32,
    modulus: &str,
    precision: usize,
    coeffs: &[String],
) -> Result<()> {
    fs::create_dir_all(dir)?;
    let key = key_string(r, delta, modulus, precision);
    let entry = CacheEntry {
        schema_version: crate::report::SCHEMA_VERSION,
        r,
        delta,
        modulus: modulus.to_string(),
        precision,
        digest: digest_of(coeffs, &key),
        coeffs: coeffs.to_vec(),
    };
    let path = entry_path(dir, r, delta, modulus, precision);
    fs::write(path, serde_json::to_string(&entry)?)?;
    Ok(())
}
