//! Optional on-disk memoization of per-seed induced-pmf statistics.
//!
//! When `COORDSIM_CACHE_DIR` is set, results are stored as JSON files named by
//! the SHA-256 digest of everything that determines them. Unreadable or stale
//! entries are recomputed; write failures only cost the memoization.

use std::path::PathBuf;

use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const CACHE_ENV: &str = "COORDSIM_CACHE_DIR";

#[derive(Debug, Clone)]
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn from_env() -> Self {
        Cache {
            dir: std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from),
        }
    }

    pub fn disabled() -> Self {
        Cache { dir: None }
    }

    pub fn at(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: Some(dir.into()) }
    }

    /// Hex SHA-256 of the JSON encoding of `key`.
    pub fn digest<K: Serialize>(key: &K) -> String {
        let bytes = serde_json::to_vec(key).expect("cache keys serialize");
        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Returns the stored value for `key`, or computes and stores it.
    pub fn get_or_compute<K, V, E>(&self, key: &K, compute: impl FnOnce() -> Result<V, E>) -> Result<V, E>
    where
        K: Serialize,
        V: Serialize + DeserializeOwned,
    {
        let Some(dir) = &self.dir else {
            return compute();
        };
        let path = dir.join(format!("{}.json", Self::digest(key)));
        if let Some(v) = std::fs::read(&path).ok().and_then(|b| serde_json::from_slice(&b).ok()) {
            return Ok(v);
        }
        let v = compute()?;
        if std::fs::create_dir_all(dir).is_ok() {
            if let Ok(bytes) = serde_json::to_vec(&v) {
                // Write then rename so concurrent readers never see a partial file.
                let tmp = path.with_extension(format!("tmp{}", std::process::id()));
                if std::fs::write(&tmp, bytes).is_ok() {
                    let _ = std::fs::rename(&tmp, &path);
                }
            }
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn memoizes_by_key() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::at(dir.path());
        let first: Result<f64, ()> = cache.get_or_compute(&("k", 1), || Ok(0.5));
        assert_eq!(first, Ok(0.5));
        let second: Result<f64, ()> = cache.get_or_compute(&("k", 1), || panic!("recomputed"));
        assert_eq!(second, Ok(0.5));
        let other: Result<f64, ()> = cache.get_or_compute(&("k", 2), || Ok(0.25));
        assert_eq!(other, Ok(0.25));
    }

    #[test]
    fn digest_is_stable() {
        assert_eq!(Cache::digest(&1u8), Cache::digest(&1u8));
        assert_ne!(Cache::digest(&1u8), Cache::digest(&2u8));
        assert_eq!(Cache::digest(&0u8).len(), 64);
    }
}
