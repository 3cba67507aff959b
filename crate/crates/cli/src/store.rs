//! Content-addressed result cache and atomic file output.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;
use crate::run::Outcome;

pub const ARTIFACT_VERSION: u32 = 1;
pub const RECORD_NAME: &str = "run_record.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub config_hash: String,
    pub experiment: String,
    pub timestamp_unix: u64,
    pub artifact_version: u32,
    pub files: Vec<String>,
    pub diagnostics: Value,
    pub cached: bool,
}

/// `SOFTGUIDE_CACHE_DIR`, else `./.softguide-cache`.
pub fn cache_root() -> PathBuf {
    std::env::var_os("SOFTGUIDE_CACHE_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(".softguide-cache"))
}

/// Replaces `path` with `bytes`; readers never observe a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs())
}

fn record_bytes(r: &RunRecord) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(r).expect("record serializes");
    out.push(b'\n');
    out
}

/// Cached record for `hash`, if every listed file is present.
pub fn lookup(cache: &Path, hash: &str) -> Option<RunRecord> {
    let dir = cache.join(hash);
    let text = fs::read(dir.join(RECORD_NAME)).ok()?;
    let rec: RunRecord = serde_json::from_slice(&text).ok()?;
    let complete = rec.artifact_version == ARTIFACT_VERSION
        && rec.config_hash == hash
        && rec.files.iter().all(|f| dir.join(f).is_file());
    complete.then_some(rec)
}

/// Copies cached artifacts into `out` byte for byte.
pub fn restore(cache: &Path, rec: &RunRecord, out: &Path) -> Result<RunRecord, CliError> {
    let dir = cache.join(&rec.config_hash);
    for f in &rec.files {
        write_atomic(&out.join(f), &fs::read(dir.join(f))?)?;
    }
    let mut hit = rec.clone();
    hit.cached = true;
    hit.timestamp_unix = now();
    write_atomic(&out.join(RECORD_NAME), &record_bytes(&hit))?;
    Ok(hit)
}

/// Writes a fresh outcome to the cache and to `out`.
pub fn store(
    cache: &Path,
    hash: &str,
    experiment: &str,
    outcome: Outcome,
    out: &Path,
) -> Result<RunRecord, CliError> {
    let dir = cache.join(hash);
    let mut names = Vec::new();
    for (name, bytes) in &outcome.files {
        write_atomic(&dir.join(name), bytes)?;
        write_atomic(&out.join(name), bytes)?;
        names.push(name.clone());
    }
    let rec = RunRecord {
        config_hash: hash.to_string(),
        experiment: experiment.to_string(),
        timestamp_unix: now(),
        artifact_version: ARTIFACT_VERSION,
        files: names,
        diagnostics: outcome.diagnostics,
        cached: false,
    };
    // record last: its presence marks a complete cache entry
    write_atomic(&dir.join(RECORD_NAME), &record_bytes(&rec))?;
    write_atomic(&out.join(RECORD_NAME), &record_bytes(&rec))?;
    Ok(rec)
}
