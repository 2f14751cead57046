//! On-disk cache for cohomology results: versioned JSON lines, append-only,
//! single writer.
//!
//! Entries are keyed by (group spec, subgroup member set, working modulus).
//! A corrupt or version-mismatched line is skipped with a warning — the
//! cache can only ever save recomputation, never change an answer, since
//! loaded records are re-validated against the generator/coordinate
//! contract before use.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::cohomology::H2Record;

pub const CACHE_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct CacheLine {
    version: u32,
    group: String,
    members: Vec<usize>,
    modulus: i64,
    record: H2Record,
}

type Key = (String, Vec<usize>, i64);

pub struct H2Cache {
    path: PathBuf,
    entries: HashMap<Key, H2Record>,
    /// Problems noticed while loading; the CLI surfaces these on stderr.
    pub warnings: Vec<String>,
}

impl H2Cache {
    /// Opens (or prepares to create) a cache file and loads every readable
    /// entry. Unreadable lines are skipped, never fatal.
    pub fn open(path: impl AsRef<Path>) -> H2Cache {
        let path = path.as_ref().to_path_buf();
        let mut cache = H2Cache {
            path: path.clone(),
            entries: HashMap::new(),
            warnings: Vec::new(),
        };
        let text = match fs::read_to_string(&path) {
            Ok(text) => text,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return cache,
            Err(e) => {
                cache
                    .warnings
                    .push(format!("cache {} unreadable ({e}); bypassing", path.display()));
                return cache;
            }
        };
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<CacheLine>(line) {
                Ok(entry) if entry.version == CACHE_VERSION => {
                    cache.entries.insert(
                        (entry.group, entry.members, entry.modulus),
                        entry.record,
                    );
                }
                Ok(entry) => {
                    cache.warnings.push(format!(
                        "cache {} line {}: version {} != {}; skipped",
                        path.display(),
                        lineno + 1,
                        entry.version,
                        CACHE_VERSION
                    ));
                }
                Err(e) => {
                    cache.warnings.push(format!(
                        "cache {} line {}: corrupt entry ({e}); skipped",
                        path.display(),
                        lineno + 1
                    ));
                }
            }
        }
        cache
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, group: &str, members: &[usize], modulus: i64) -> Option<&H2Record> {
        self.entries
            .get(&(group.to_string(), members.to_vec(), modulus))
    }

    /// Appends an entry unless the key is already present (entries are
    /// immutable once written). Returns whether anything was written.
    pub fn put(
        &mut self,
        group: &str,
        members: &[usize],
        modulus: i64,
        record: H2Record,
    ) -> std::io::Result<bool> {
        let key = (group.to_string(), members.to_vec(), modulus);
        if self.entries.contains_key(&key) {
            return Ok(false);
        }
        let line = serde_json::to_string(&CacheLine {
            version: CACHE_VERSION,
            group: group.to_string(),
            members: members.to_vec(),
            modulus,
            record: record.clone(),
        })
        .expect("cache entries serialize");
        if let Some(parent) = self.path.parent() {
            if !parent.as_os_str().is_empty() {
                fs::create_dir_all(parent)?;
            }
        }
        let mut file = fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)?;
        writeln!(file, "{line}")?;
        self.entries.insert(key, record);
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::{h2_units, CohomologyCaps};
    use crate::group::named_group;
    use crate::subgroup::Subgroup;
    use std::sync::Arc;

    fn sample_record() -> (Vec<usize>, H2Record) {
        let g = named_group("C2xC2", 10).unwrap();
        let whole = Subgroup::whole(Arc::clone(&g));
        let h2 = h2_units(&whole, 4, &CohomologyCaps::default()).unwrap();
        (whole.members().to_vec(), h2.to_record())
    }

    #[test]
    fn miss_put_get_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("h2.jsonl");
        let (members, record) = sample_record();
        let mut cache = H2Cache::open(&path);
        assert!(cache.get("C2xC2", &members, 4).is_none());
        assert!(cache.put("C2xC2", &members, 4, record.clone()).unwrap());
        assert_eq!(cache.get("C2xC2", &members, 4), Some(&record));
        // A second put of the same key is a no-op.
        assert!(!cache.put("C2xC2", &members, 4, record.clone()).unwrap());

        let reloaded = H2Cache::open(&path);
        assert!(reloaded.warnings.is_empty());
        assert_eq!(reloaded.get("C2xC2", &members, 4), Some(&record));
    }

    #[test]
    fn corrupt_lines_are_skipped_with_warning() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("h2.jsonl");
        let (members, record) = sample_record();
        {
            let mut cache = H2Cache::open(&path);
            cache.put("C2xC2", &members, 4, record.clone()).unwrap();
        }
        std::fs::OpenOptions::new()
            .append(true)
            .open(&path)
            .unwrap()
            .write_all(b"{ not json\n")
            .unwrap();
        let cache = H2Cache::open(&path);
        assert_eq!(cache.len(), 1);
        assert_eq!(cache.warnings.len(), 1);
        assert_eq!(cache.get("C2xC2", &members, 4), Some(&record));
    }

    #[test]
    fn version_mismatch_bypasses() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("h2.jsonl");
        let (members, record) = sample_record();
        let line = serde_json::json!({
            "version": 999,
            "group": "C2xC2",
            "members": members,
            "modulus": 4,
            "record": serde_json::to_value(&record).unwrap(),
        });
        std::fs::write(&path, format!("{line}\n")).unwrap();
        let cache = H2Cache::open(&path);
        assert!(cache.is_empty());
        assert_eq!(cache.warnings.len(), 1);
    }
}
