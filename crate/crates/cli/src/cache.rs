//! On-disk cache of whole-diagram homology tables.
//!
//! Entries are keyed by (schema version, sign convention tag, n, m) and
//! carry a content digest; any mismatch on read forces a recompute. Writes go
//! through a temp file plus atomic rename so concurrent runs stay safe.

use crate::render::SCHEMA_VERSION;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use torkh::GradedHomology;

#[derive(Debug, Serialize, Deserialize)]
struct CacheEntry {
    schema: u32,
    sign: String,
    n: usize,
    m: usize,
    digest: String,
    homology: GradedHomology,
}

fn digest_of(h: &GradedHomology) -> String {
    let bytes = serde_json::to_vec(h).expect("homology serializes");
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    format!("{:x}", hasher.finalize())
}

fn entry_path(dir: &Path, sign: &str, n: usize, m: usize) -> PathBuf {
    let mut hasher = Sha256::new();
    hasher.update(format!("v{SCHEMA_VERSION}|{sign}|n{n}|m{m}"));
    dir.join(format!("{:x}.json", hasher.finalize()))
}

/// Read a cached table; returns None on any miss, mismatch, or corruption.
pub fn read(dir: &Path, sign: &str, n: usize, m: usize) -> Option<GradedHomology> {
    let path = entry_path(dir, sign, n, m);
    let data = fs::read(&path).ok()?;
    let entry: CacheEntry = serde_json::from_slice(&data).ok()?;
    if entry.schema != SCHEMA_VERSION
        || entry.sign != sign
        || entry.n != n
        || entry.m != m
        || entry.digest != digest_of(&entry.homology)
    {
        return None;
    }
    Some(entry.homology)
}

/// Atomically write a table to the cache; errors are swallowed (the cache is
/// best-effort).
pub fn write(dir: &Path, sign: &str, n: usize, m: usize, homology: &GradedHomology) {
    let _ = try_write(dir, sign, n, m, homology);
}

fn try_write(
    dir: &Path,
    sign: &str,
    n: usize,
    m: usize,
    homology: &GradedHomology,
) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let entry = CacheEntry {
        schema: SCHEMA_VERSION,
        sign: sign.to_string(),
        n,
        m,
        digest: digest_of(homology),
        homology: homology.clone(),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(&serde_json::to_vec_pretty(&entry)?)?;
    tmp.persist(entry_path(dir, sign, n, m))
        .map_err(|e| e.error)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use torkh::AbelianGroup;

    fn sample() -> GradedHomology {
        let mut h = GradedHomology::default();
        h.groups.insert((0, 1), AbelianGroup::free(1));
        h.groups.insert(
            (3, 7),
            AbelianGroup {
                free_rank: 0,
                invariant_factors: vec![2],
            },
        );
        h
    }

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let h = sample();
        write(dir.path(), "ones-before", 2, 3, &h);
        assert_eq!(read(dir.path(), "ones-before", 2, 3), Some(h));
        assert_eq!(read(dir.path(), "ones-after", 2, 3), None);
        assert_eq!(read(dir.path(), "ones-before", 2, 4), None);
    }

    #[test]
    fn corruption_forces_recompute() {
        let dir = tempfile::tempdir().unwrap();
        let h = sample();
        write(dir.path(), "ones-before", 2, 3, &h);
        let path = entry_path(dir.path(), "ones-before", 2, 3);
        let mut text = fs::read_to_string(&path).unwrap();
        text = text.replace("\"free_rank\": 1", "\"free_rank\": 2");
        fs::write(&path, text).unwrap();
        assert_eq!(read(dir.path(), "ones-before", 2, 3), None);
    }
}
