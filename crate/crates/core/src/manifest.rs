//! Run manifests: what was run, on which bytes, producing which bytes.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

pub const MANIFEST_FILE: &str = "manifest.json";

pub fn sha256_bytes(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn sha256_file(path: &Path) -> io::Result<String> {
    Ok(sha256_bytes(&fs::read(path)?))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config: serde_json::Value,
    /// Input path as given on the command line -> sha256 of its contents.
    pub inputs: BTreeMap<String, String>,
    /// Output file name -> sha256 of its contents.
    pub outputs: BTreeMap<String, String>,
    pub version: String,
    pub timestamp: String,
    /// Hash of command, configuration, input contents and version. Paths and
    /// the timestamp are left out so identical runs share a digest.
    pub digest: String,
}

impl RunManifest {
    pub fn new(command: &str, config: serde_json::Value, inputs: &[PathBuf]) -> io::Result<Self> {
        let mut digests = BTreeMap::new();
        for p in inputs {
            let d = sha256_file(p).map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", p.display())))?;
            digests.insert(p.display().to_string(), d);
        }
        let mut contents: Vec<&String> = digests.values().collect();
        contents.sort();
        let version = env!("CARGO_PKG_VERSION").to_string();
        let key = serde_json::json!({
            "command": command,
            "config": config,
            "inputs": contents,
            "version": version,
        });
        let digest = sha256_bytes(key.to_string().as_bytes());
        Ok(Self {
            command: command.to_string(),
            config,
            inputs: digests,
            outputs: BTreeMap::new(),
            version,
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            digest,
        })
    }

    /// Short identifier stamped into every report row.
    pub fn run_id(&self) -> &str {
        &self.digest[..16]
    }

    pub fn record_output(&mut self, path: &Path) -> io::Result<()> {
        let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        self.outputs.insert(name, sha256_file(path)?);
        Ok(())
    }

    pub fn write(&self, dir: &Path) -> io::Result<PathBuf> {
        let path = dir.join(MANIFEST_FILE);
        let mut text = serde_json::to_string_pretty(self).map_err(io::Error::other)?;
        text.push('\n');
        fs::write(&path, text)?;
        Ok(path)
    }
}
