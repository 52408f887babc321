//! On-disk power-sum cache.
//!
//! One JSON file per entry, named by the SHA-256 of the semantic key; the key
//! itself is stored inside and compared on read. Writes go to a temporary
//! file in the same directory and are renamed into place.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use ffzeta::lseries::PowerSumCache;
use ffzeta::rings::{LaurentSeries, SeriesWire};
use ffzeta::scalars::Field;
use log::warn;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Bumped whenever the meaning of a stored value changes.
pub const CACHE_VERSION: &str = concat!("ffzeta-cache/1/", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CacheEntry {
    pub version: String,
    pub key: String,
    pub prec: i64,
    pub value: SeriesWire,
}

pub struct DiskCache {
    dir: PathBuf,
    field: Field,
    version: String,
    tmp_counter: AtomicU64,
}

enum Lookup {
    Absent,
    Found(LaurentSeries),
}

impl DiskCache {
    pub fn open(dir: &Path, field: &Field) -> std::io::Result<DiskCache> {
        DiskCache::with_version(dir, field, CACHE_VERSION)
    }

    pub fn with_version(dir: &Path, field: &Field, version: &str) -> std::io::Result<DiskCache> {
        fs::create_dir_all(dir)?;
        Ok(DiskCache {
            dir: dir.to_path_buf(),
            field: field.clone(),
            version: version.to_string(),
            tmp_counter: AtomicU64::new(0),
        })
    }

    pub fn path_for(&self, key: &str) -> PathBuf {
        let digest = Sha256::digest(key.as_bytes());
        self.dir.join(format!("{digest:x}.json"))
    }

    fn load(&self, key: &str) -> Lookup {
        let path = self.path_for(key);
        let Ok(bytes) = fs::read(&path) else {
            return Lookup::Absent;
        };
        let entry: CacheEntry = match serde_json::from_slice(&bytes) {
            Ok(e) => e,
            Err(e) => {
                warn!("ignoring corrupt cache entry {}: {e}", path.display());
                return Lookup::Absent;
            }
        };
        if entry.version != self.version || entry.key != key {
            return Lookup::Absent;
        }
        match LaurentSeries::from_wire(&entry.value, &self.field) {
            Ok(s) if s.abs_prec() == entry.prec => Lookup::Found(s),
            Ok(_) => {
                warn!("ignoring cache entry {} with inconsistent precision", path.display());
                Lookup::Absent
            }
            Err(e) => {
                warn!("ignoring corrupt cache entry {}: {e}", path.display());
                Lookup::Absent
            }
        }
    }
}

impl PowerSumCache for DiskCache {
    fn get(&self, key: &str, prec: i64) -> Option<LaurentSeries> {
        match self.load(key) {
            Lookup::Found(s) if s.abs_prec() >= prec => Some(s),
            _ => None,
        }
    }

    fn put(&self, key: &str, value: &LaurentSeries) {
        if let Lookup::Found(old) = self.load(key) {
            if old.abs_prec() >= value.abs_prec() {
                return;
            }
        }
        let entry = CacheEntry {
            version: self.version.clone(),
            key: key.to_string(),
            prec: value.abs_prec(),
            value: value.to_wire(&self.field),
        };
        let path = self.path_for(key);
        let tmp = self.dir.join(format!(
            ".tmp-{}-{}",
            std::process::id(),
            self.tmp_counter.fetch_add(1, Ordering::Relaxed)
        ));
        let result = serde_json::to_vec(&entry)
            .map_err(std::io::Error::other)
            .and_then(|bytes| fs::write(&tmp, bytes))
            .and_then(|_| fs::rename(&tmp, &path));
        if let Err(e) = result {
            let _ = fs::remove_file(&tmp);
            warn!("could not write cache entry {}: {e}", path.display());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ffzeta::scalars::Fe;

    fn series(prec: i64) -> LaurentSeries {
        LaurentSeries::with_prec(0, vec![Fe(1), Fe(0), Fe(1)], prec)
    }

    #[test]
    fn roundtrip_and_precision() {
        let dir = tempfile::tempdir().unwrap();
        let f = Field::for_q(2).unwrap();
        let c = DiskCache::open(dir.path(), &f).unwrap();
        assert!(c.get("k", 5).is_none());
        c.put("k", &series(10));
        assert_eq!(c.get("k", 10), Some(series(10)));
        assert!(c.get("k", 11).is_none());
        // a lower-precision put never replaces a better entry
        c.put("k", &series(4));
        assert_eq!(c.get("k", 10), Some(series(10)));
        c.put("k", &series(20));
        assert_eq!(c.get("k", 20), Some(series(20)));
        let exact = LaurentSeries::exact(-1, vec![Fe(1), Fe(1)]);
        c.put("e", &exact);
        assert_eq!(c.get("e", 1_000_000), Some(exact));
    }

    #[test]
    fn version_mismatch_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let f = Field::for_q(3).unwrap();
        let old = DiskCache::with_version(dir.path(), &f, "old").unwrap();
        old.put("k", &series(10));
        let c = DiskCache::open(dir.path(), &f).unwrap();
        assert!(c.get("k", 1).is_none());
        c.put("k", &series(3));
        assert_eq!(c.get("k", 3), Some(series(3)));
        fs::write(c.path_for("k"), b"{not json").unwrap();
        assert!(c.get("k", 1).is_none());
        c.put("k", &series(5));
        assert_eq!(c.get("k", 5), Some(series(5)));
        // no temporary files left behind
        let leftovers = fs::read_dir(dir.path())
            .unwrap()
            .filter(|e| e.as_ref().unwrap().file_name().to_string_lossy().starts_with(".tmp"))
            .count();
        assert_eq!(leftovers, 0);
    }
}
