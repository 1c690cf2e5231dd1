//! On-disk result cache. Each entry is one JSON file holding its key, the
//! payload text and the payload's sha256; files are written to a temporary
//! name and renamed into place.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::data::CODE_DATA_VERSION;
use crate::error::CliResult;

#[derive(Clone, Debug)]
pub struct Cache {
    dir: Option<PathBuf>,
}

fn sha(s: &str) -> String {
    hex::encode(Sha256::digest(s.as_bytes()))
}

fn default_dir() -> Option<PathBuf> {
    if let Some(d) = std::env::var_os("XDG_CACHE_HOME") {
        return Some(PathBuf::from(d).join("qwalk"));
    }
    std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("qwalk"))
}

impl Cache {
    /// QWALK_CACHE, else the platform cache directory.
    pub fn from_env() -> Cache {
        let dir = std::env::var_os("QWALK_CACHE").map(PathBuf::from).or_else(default_dir);
        Cache { dir }
    }

    pub fn at(dir: &Path) -> Cache {
        Cache { dir: Some(dir.to_path_buf()) }
    }

    pub fn disabled() -> Cache {
        Cache { dir: None }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn key(parts: &[&str]) -> String {
        let mut k = format!("v{}", CODE_DATA_VERSION);
        for p in parts {
            k.push('|');
            k.push_str(p);
        }
        k
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{}.json", &sha(key)[..32])))
    }

    /// The stored payload, or None when absent, unreadable or corrupted.
    /// Corrupted entries are removed.
    pub fn get(&self, key: &str) -> Option<Value> {
        let path = self.path(key)?;
        let text = fs::read_to_string(&path).ok()?;
        let ok = (|| {
            let v: Value = serde_json::from_str(&text).ok()?;
            if v.get("key")?.as_str()? != key {
                return None;
            }
            let payload = v.get("payload")?.as_str()?;
            if v.get("checksum")?.as_str()? != sha(payload) {
                return None;
            }
            serde_json::from_str::<Value>(payload).ok()
        })();
        if ok.is_none() {
            let _ = fs::remove_file(&path);
        }
        ok
    }

    pub fn put(&self, key: &str, value: &Value) -> CliResult<()> {
        let (Some(dir), Some(path)) = (self.dir.as_ref(), self.path(key)) else {
            return Ok(());
        };
        fs::create_dir_all(dir)?;
        let payload = value.to_string();
        let entry = json!({ "key": key, "checksum": sha(&payload), "payload": payload });
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        tmp.write_all(entry.to_string().as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(&path).map_err(|e| e.error)?;
        Ok(())
    }

    /// Cached value for `key`, computing and storing it on a miss.
    pub fn get_or_put(&self, key: &str, compute: impl FnOnce() -> CliResult<Value>) -> CliResult<Value> {
        if let Some(v) = self.get(key) {
            return Ok(v);
        }
        let v = compute()?;
        self.put(key, &v)?;
        Ok(v)
    }
}
