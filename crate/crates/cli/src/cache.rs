//! On-disk result cache: one JSON-lines file per key in a flat directory.
//!
//! A file holds a single record line. Writes go through a temporary file in
//! the same directory and are renamed into place, so concurrent workers never
//! see a partial record.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use lewislab_core::{Family, Lambda, RankMethod, SystemKind, TOOL_VERSION};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    pub family: Family,
    #[serde(rename = "N")]
    pub level: u32,
    pub n: u32,
    pub lambda: Option<Lambda>,
    pub system: SystemKind,
}

impl CacheKey {
    fn file_name(&self) -> String {
        let lambda = self.lambda.map_or("none".to_string(), |l| l.to_string());
        format!(
            "{}-{}-{}-{}-{}-v{}.jsonl",
            self.family, self.level, self.n, lambda, self.system, TOOL_VERSION
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    #[serde(flatten)]
    pub key: CacheKey,
    pub tool_version: String,
    pub dim: u64,
    pub rank: u64,
    pub rows: u64,
    pub cols: u64,
    pub rank_method: RankMethod,
    pub elapsed_ms: u64,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn open(dir: &Path) -> std::io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Cache { dir: dir.to_path_buf() })
    }

    fn path(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(key.file_name())
    }

    /// A stored record for `key`, ignoring unreadable or foreign files.
    pub fn get(&self, key: &CacheKey) -> Option<CacheRecord> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        let rec: CacheRecord = serde_json::from_str(text.lines().next()?).ok()?;
        (rec.key == *key && rec.tool_version == TOOL_VERSION).then_some(rec)
    }

    pub fn put(&self, record: &CacheRecord) -> std::io::Result<()> {
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        let line = serde_json::to_string(record).expect("record serializes");
        writeln!(tmp, "{line}")?;
        tmp.persist(self.path(&record.key)).map_err(|e| e.error)?;
        Ok(())
    }
}

pub fn now_secs() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn put_then_get() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        let key = CacheKey {
            family: Family::Hecke,
            level: 5,
            n: 4,
            lambda: Some(Lambda::Minus),
            system: SystemKind::Extended,
        };
        assert!(cache.get(&key).is_none());
        let rec = CacheRecord {
            key,
            tool_version: TOOL_VERSION.to_string(),
            dim: 3,
            rank: 27,
            rows: 60,
            cols: 30,
            rank_method: RankMethod::Modular,
            elapsed_ms: 1,
            timestamp: 0,
        };
        cache.put(&rec).unwrap();
        assert_eq!(cache.get(&key), Some(rec));
        let other = CacheKey { n: 6, ..key };
        assert!(cache.get(&other).is_none());
    }
}
