//! Reproducibility records written next to generated images.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use vl_core::compositing::{ImageRecord, VlConfig};
use vl_core::export::write_atomic;

use crate::{CliError, CliResult};

pub const RUN_FILE: &str = "run.json";
pub const MANIFEST_FILE: &str = "manifest.jsonl";

/// Run-level metadata, stored in `run.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunInfo {
    pub tool: String,
    pub version: String,
    pub global_seed: u64,
    pub count: usize,
    pub preset: String,
    /// SHA-256 of the canonical JSON of `config` with the color folder
    /// removed, so the hash does not depend on where files live.
    pub config_hash: String,
    /// File names of the color source images, in sampling order.
    pub color_files: Vec<String>,
    pub config: VlConfig,
}

/// One line of `manifest.jsonl`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestRecord {
    pub index: usize,
    pub seed: u64,
    pub preset: String,
    pub sigma1: f64,
    pub sigma3: f64,
    pub color_source: String,
    pub leaves: [usize; 3],
    pub visible_leaves: [usize; 3],
    pub clipped_pixels: usize,
    /// Relative to the output directory.
    pub path: String,
    pub sha256: String,
}

impl ManifestRecord {
    pub fn new(index: usize, preset: &str, rec: &ImageRecord, clipped: usize, path: String, sha256: String) -> Self {
        Self {
            index,
            seed: rec.seed,
            preset: preset.to_string(),
            sigma1: rec.sigma1,
            sigma3: rec.sigma3,
            color_source: rec.color_source.clone(),
            leaves: rec.leaves,
            visible_leaves: rec.visible_leaves,
            clipped_pixels: clipped,
            path,
            sha256,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunManifest {
    pub run: RunInfo,
    /// Sorted by index.
    pub records: Vec<ManifestRecord>,
}

impl RunManifest {
    pub fn write(&self, dir: &Path) -> CliResult<()> {
        let run = serde_json::to_string_pretty(&self.run).expect("run info serializes") + "\n";
        write_atomic(&dir.join(RUN_FILE), run.as_bytes())?;
        let mut lines = String::new();
        for r in &self.records {
            lines.push_str(&serde_json::to_string(r).expect("record serializes"));
            lines.push('\n');
        }
        write_atomic(&dir.join(MANIFEST_FILE), lines.as_bytes())?;
        Ok(())
    }

    pub fn load(dir: &Path) -> CliResult<Self> {
        let read = |name: &str| -> CliResult<String> {
            let path = dir.join(name);
            fs::read_to_string(&path).map_err(|e| CliError::Io(path, e))
        };
        let run: RunInfo = serde_json::from_str(&read(RUN_FILE)?).map_err(|e| CliError::Manifest(e.to_string()))?;
        let records = read(MANIFEST_FILE)?
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| serde_json::from_str(l).map_err(|e| CliError::Manifest(e.to_string())))
            .collect::<CliResult<Vec<ManifestRecord>>>()?;
        Ok(Self { run, records })
    }

    pub fn image_path(&self, dir: &Path, index: usize) -> Option<PathBuf> {
        self.records.iter().find(|r| r.index == index).map(|r| dir.join(&r.path))
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn config_hash(cfg: &VlConfig) -> String {
    let mut c = cfg.clone();
    c.colors = None;
    sha256_hex(c.canonical_json().as_bytes())
}
