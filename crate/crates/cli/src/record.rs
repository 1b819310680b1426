//! Result persistence: one JSON record per operation run, filed under
//! `results/<name>/<op>-<hash>.json` where the hash covers the canonicalized
//! parameters, so re-running with the same arguments lands on the same file.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::catalogs::sha256_hex;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ResultRecord {
    /// Inequality name (or file stem for file-scoped operations).
    pub name: String,
    pub op: String,
    /// Canonicalized parameters: every flag that influenced the run.
    pub params: BTreeMap<String, String>,
    pub outputs: serde_json::Value,
    pub tool_version: String,
    pub seed: u64,
    /// Seconds since the epoch; the only field allowed to differ between
    /// identical runs.
    pub timestamp: u64,
}

impl ResultRecord {
    pub fn new(
        name: &str,
        op: &str,
        params: BTreeMap<String, String>,
        outputs: serde_json::Value,
        seed: u64,
    ) -> Self {
        ResultRecord {
            name: name.to_string(),
            op: op.to_string(),
            params,
            outputs,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }

    /// Hash over the op and the sorted parameter list (the `BTreeMap` keeps
    /// them sorted); twelve hex characters is plenty for a per-name dir.
    pub fn args_hash(&self) -> String {
        let mut text = format!("{}\u{0}{}\u{0}", self.op, self.name);
        for (k, v) in &self.params {
            text.push_str(k);
            text.push('=');
            text.push_str(v);
            text.push('\n');
        }
        sha256_hex(&text)[..12].to_string()
    }

    /// Write under `dir`, creating parents; returns the path written.
    pub fn store(&self, dir: &Path) -> std::io::Result<PathBuf> {
        let safe_name: String = self
            .name
            .chars()
            .map(|c| if c == '/' || c == '\\' || c == ':' { '_' } else { c })
            .collect();
        let subdir = dir.join(safe_name);
        fs::create_dir_all(&subdir)?;
        let path = subdir.join(format!("{}-{}.json", self.op, self.args_hash()));
        fs::write(&path, serde_json::to_string_pretty(self).expect("record serializes"))?;
        Ok(path)
    }

    pub fn load(path: &Path) -> std::io::Result<ResultRecord> {
        let text = fs::read_to_string(path)?;
        serde_json::from_str(&text)
            .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))
    }
}

/// Results directory: `--results-dir` flag beats `BELLBOUND_RESULTS` beats
/// `./results`.
pub fn results_dir(flag: Option<&Path>) -> PathBuf {
    if let Some(p) = flag {
        return p.to_path_buf();
    }
    if let Ok(env) = std::env::var("BELLBOUND_RESULTS") {
        if !env.is_empty() {
            return PathBuf::from(env);
        }
    }
    PathBuf::from("results")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ResultRecord {
        let mut params = BTreeMap::new();
        params.insert("dim".to_string(), "2".to_string());
        params.insert("field".to_string(), "real".to_string());
        ResultRecord::new(
            "CHSH",
            "seesaw",
            params,
            serde_json::json!({"violation": 0.20710678118654752, "ranks": [1, 1]}),
            7,
        )
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let rec = sample();
        let path = rec.store(dir.path()).unwrap();
        let back = ResultRecord::load(&path).unwrap();
        assert_eq!(rec, back);
        // Same args → same file; the float survives exactly.
        assert_eq!(path, back.store(dir.path()).unwrap());
        assert_eq!(back.outputs["violation"].as_f64(), Some(0.20710678118654752));
    }

    #[test]
    fn hash_tracks_params_not_outputs() {
        let a = sample();
        let mut b = sample();
        b.outputs = serde_json::json!({"violation": 0.0});
        assert_eq!(a.args_hash(), b.args_hash());
        b.params.insert("dim".to_string(), "3".to_string());
        assert_ne!(a.args_hash(), b.args_hash());
    }

    #[test]
    fn env_var_and_flag_resolution() {
        assert_eq!(results_dir(Some(Path::new("/tmp/x"))), PathBuf::from("/tmp/x"));
        assert_eq!(results_dir(None), PathBuf::from("results"));
    }
}
