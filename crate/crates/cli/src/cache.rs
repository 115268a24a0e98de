//! Content-addressed result cache.
//!
//! Each entry is `<dir>/<key>.json` holding `{"key", "digest", "value"}`,
//! where `digest` is the SHA-256 of the serialized value. Entries that fail
//! to parse, name another key or whose digest does not match are treated as
//! missing and overwritten.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Cache { dir }
    }

    pub fn key(parts: &[&str]) -> String {
        let mut h = Sha256::new();
        for p in parts {
            h.update((p.len() as u64).to_le_bytes());
            h.update(p.as_bytes());
        }
        hex::encode(h.finalize())
    }

    fn digest(value: &Value) -> String {
        hex::encode(Sha256::digest(value.to_string().as_bytes()))
    }

    fn path(dir: &Path, key: &str) -> PathBuf {
        dir.join(format!("{key}.json"))
    }

    pub fn get(&self, key: &str) -> Option<Value> {
        let dir = self.dir.as_ref()?;
        let text = fs::read_to_string(Self::path(dir, key)).ok()?;
        let mut v: Value = serde_json::from_str(&text).ok()?;
        if v.get("key")?.as_str()? != key {
            return None;
        }
        let digest = v.get("digest")?.as_str()?.to_string();
        let value = v.get_mut("value").map(Value::take).filter(Value::is_object)?;
        (digest == Self::digest(&value)).then_some(value)
    }

    /// Stores `value`; failures to write are ignored, the cache being an
    /// optimization only.
    pub fn put(&self, key: &str, value: &Value) {
        let Some(dir) = &self.dir else { return };
        if fs::create_dir_all(dir).is_err() {
            return;
        }
        let body = json!({ "key": key, "digest": Self::digest(value), "value": value });
        let tmp = dir.join(format!(".{key}.{}.tmp", std::process::id()));
        if fs::write(&tmp, body.to_string()).is_ok() && fs::rename(&tmp, Self::path(dir, key)).is_err() {
            let _ = fs::remove_file(&tmp);
        }
    }

    pub fn get_or_insert(&self, key: &str, compute: impl FnOnce() -> twisted_schur::Result<Value>) -> twisted_schur::Result<Value> {
        if let Some(v) = self.get(key) {
            return Ok(v);
        }
        let v = compute()?;
        self.put(key, &v);
        Ok(v)
    }
}
