//! Run directory layout: `manifest.json` (the only file with a timestamp),
//! a deterministic `summary.json`, and optional `trajectories.csv` and
//! `sweep.csv` (plus `eigenstates.csv` for spectra).

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

pub const SUMMARY: &str = "summary.json";
pub const MANIFEST: &str = "manifest.json";
pub const TRAJECTORIES: &str = "trajectories.csv";
pub const SWEEP: &str = "sweep.csv";
pub const EIGENSTATES: &str = "eigenstates.csv";

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub config_path: Option<String>,
    pub seed: Option<u64>,
    pub threads: usize,
    pub tool_version: &'static str,
    /// SHA-256 of the canonical effective configuration.
    pub config_digest: String,
    pub config: serde_json::Value,
    pub outputs: Vec<String>,
    pub argv: Vec<String>,
    pub timestamp_unix: u64,
}

/// Hex SHA-256 of the compact JSON form of `config`. serde_json keeps
/// struct field order, so equal configs hash equally.
pub fn digest(config: &serde_json::Value) -> String {
    let text = serde_json::to_string(config).expect("json value serializes");
    hex::encode(Sha256::digest(text.as_bytes()))
}

pub struct RunDir {
    root: Option<PathBuf>,
    written: Vec<String>,
}

impl RunDir {
    pub fn new(out: Option<&Path>) -> Result<Self> {
        if let Some(dir) = out {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        }
        Ok(Self { root: out.map(Path::to_path_buf), written: Vec::new() })
    }

    pub fn is_active(&self) -> bool {
        self.root.is_some()
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        if let Some(root) = &self.root {
            let path = root.join(name);
            fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
            self.written.push(name.to_string());
        }
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write(name, &text)
    }

    pub fn finish(mut self, mut manifest: RunManifest) -> Result<()> {
        if self.root.is_none() {
            return Ok(());
        }
        manifest.outputs = std::mem::take(&mut self.written);
        manifest.timestamp_unix = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        self.write_json(MANIFEST, &manifest)
    }
}

/// Minimal CSV builder; every field we emit is numeric or a bare word.
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut text = header.join(",");
        text.push('\n');
        Self { text }
    }

    pub fn row(&mut self, fields: &[String]) {
        self.text.push_str(&fields.join(","));
        self.text.push('\n');
    }

    pub fn finish(self) -> String {
        self.text
    }
}

/// Shortest round-trip float formatting, so CSV output is exact.
pub fn num(v: f64) -> String {
    format!("{v:?}")
}
