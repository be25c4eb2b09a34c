use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::HarnessError;

pub const MANIFEST_FILE: &str = "manifest.json";

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Provenance of one run. Everything except `wall_clock_seconds` is a pure
/// function of config, seed and code version.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub kind: String,
    pub name: String,
    pub software_version: String,
    pub config_sha256: String,
    pub master_seed: Option<u64>,
    /// Stream indices drawn under the master seed.
    pub sample_streams: Option<std::ops::Range<u64>>,
    pub workers: usize,
    pub wall_clock_seconds: f64,
    /// File name (relative to the output directory) to SHA-256.
    pub outputs: BTreeMap<String, String>,
}

impl RunManifest {
    pub fn write(&self, dir: &Path) -> Result<PathBuf, HarnessError> {
        let path = dir.join(MANIFEST_FILE);
        let text = serde_json::to_string_pretty(self).map_err(|e| HarnessError::Output(e.to_string()))?;
        std::fs::write(&path, text + "\n").map_err(|e| HarnessError::io(&path, e))?;
        Ok(path)
    }

    pub fn read(dir: &Path) -> Result<Self, HarnessError> {
        let path = dir.join(MANIFEST_FILE);
        let text = std::fs::read_to_string(&path).map_err(|e| HarnessError::io(&path, e))?;
        serde_json::from_str(&text).map_err(|e| HarnessError::Output(format!("{}: {e}", path.display())))
    }

    /// Files whose current checksum differs from the recorded one (or that are missing).
    pub fn verify(&self, dir: &Path) -> Vec<String> {
        self.outputs
            .iter()
            .filter(|(name, want)| match std::fs::read(dir.join(name)) {
                Ok(bytes) => sha256_hex(&bytes) != **want,
                Err(_) => true,
            })
            .map(|(name, _)| name.clone())
            .collect()
    }
}

/// Writes output files into one directory and records their checksums.
#[derive(Debug)]
pub struct OutputSink {
    dir: PathBuf,
    checksums: BTreeMap<String, String>,
}

impl OutputSink {
    pub fn create(dir: impl Into<PathBuf>) -> Result<Self, HarnessError> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir).map_err(|e| HarnessError::io(&dir, e))?;
        Ok(Self { dir, checksums: BTreeMap::new() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf, HarnessError> {
        let path = self.dir.join(name);
        std::fs::write(&path, bytes).map_err(|e| HarnessError::io(&path, e))?;
        self.checksums.insert(name.to_string(), sha256_hex(bytes));
        Ok(path)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<PathBuf, HarnessError> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| HarnessError::Output(e.to_string()))?;
        text.push('\n');
        self.write(name, text.as_bytes())
    }

    pub fn write_csv(&mut self, name: &str, header: &[String], rows: &[Vec<String>]) -> Result<PathBuf, HarnessError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| HarnessError::Output(e.to_string());
        w.write_record(header).map_err(err)?;
        for r in rows {
            w.write_record(r).map_err(err)?;
        }
        let bytes = w.into_inner().map_err(|e| HarnessError::Output(e.to_string()))?;
        self.write(name, &bytes)
    }

    pub fn into_checksums(self) -> BTreeMap<String, String> {
        self.checksums
    }
}
