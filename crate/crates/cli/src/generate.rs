//! `generate`: renders a numbered set of images and their manifest.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use vl_core::color::ColorLibrary;
use vl_core::compositing::{Generator, Preset, VlConfig};
use vl_core::export::{png_bytes, write_atomic, Rgb8Image};
use vl_core::rng::derive_seed;

use crate::manifest::{config_hash, sha256_hex, ManifestRecord, RunInfo, RunManifest};
use crate::{CliError, CliResult};

#[derive(Clone, Debug, Default)]
pub struct GenerateOptions {
    pub config: Option<PathBuf>,
    pub colors: Option<PathBuf>,
    pub preset: Option<Preset>,
    pub count: usize,
    pub seed: u64,
    pub out: PathBuf,
    /// Worker threads; `None` uses every available core.
    pub threads: Option<usize>,
}

pub fn image_name(index: usize) -> String {
    format!("{index:06}.png")
}

/// Per-image seed; the mixing function is documented on [`derive_seed`].
pub fn image_seed(global_seed: u64, index: usize) -> u64 {
    derive_seed(global_seed, index as u64)
}

/// Loads the configuration file (or defaults) and applies the overrides.
pub fn resolve_config(opts: &GenerateOptions) -> CliResult<VlConfig> {
    let mut cfg = match &opts.config {
        Some(path) => VlConfig::from_path(path)?,
        None => VlConfig::default(),
    };
    if let Some(p) = opts.preset {
        cfg = cfg.with_preset(p);
    }
    if let Some(c) = &opts.colors {
        cfg.colors = Some(c.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Name of the preset whose toggles match, or `custom`.
pub fn preset_label(cfg: &VlConfig) -> String {
    Preset::ALL
        .iter()
        .find(|p| p.toggles() == cfg.toggles)
        .map(|p| p.name().to_string())
        .unwrap_or_else(|| "custom".into())
}

fn file_name(p: &Path) -> String {
    p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default()
}

pub struct Renderer {
    generator: Generator,
    preset: String,
    color_files: Vec<String>,
}

impl Renderer {
    pub fn new(cfg: VlConfig) -> CliResult<Self> {
        let preset = preset_label(&cfg);
        let dir = cfg.colors.clone().ok_or(CliError::NoColors)?;
        let library = ColorLibrary::open(&dir)?;
        let color_files = library.files().iter().map(|p| file_name(p)).collect();
        Ok(Self {
            generator: Generator::with_library(cfg, library)?,
            preset,
            color_files,
        })
    }

    pub fn config(&self) -> &VlConfig {
        self.generator.config()
    }

    /// Renders one image to PNG bytes.
    pub fn render(&self, global_seed: u64, index: usize) -> CliResult<(Vec<u8>, ManifestRecord)> {
        let img = self.generator.generate(image_seed(global_seed, index))?;
        let rgb: Rgb8Image = img.to_rgb8();
        let bytes = png_bytes(&rgb)?;
        let rec = ManifestRecord::new(
            index,
            &self.preset,
            &img.record,
            rgb.clipped,
            image_name(index),
            sha256_hex(&bytes),
        );
        Ok((bytes, rec))
    }
}

fn thread_pool(threads: Option<usize>) -> CliResult<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        b = b.num_threads(t);
    }
    b.build().map_err(|e| CliError::Usage(e.to_string()))
}

/// Writes `count` PNGs plus `run.json` and `manifest.jsonl` into `out`.
/// Images that fail are left out of the manifest and reported in the error.
pub fn cmd_generate(opts: &GenerateOptions) -> CliResult<RunManifest> {
    let cfg = resolve_config(opts)?;
    let renderer = Renderer::new(cfg.clone())?;
    fs::create_dir_all(&opts.out).map_err(|e| CliError::Io(opts.out.clone(), e))?;
    let pool = thread_pool(opts.threads)?;
    let results: Vec<CliResult<ManifestRecord>> = pool.install(|| {
        (0..opts.count)
            .into_par_iter()
            .map(|i| {
                let (bytes, rec) = renderer.render(opts.seed, i)?;
                write_atomic(&opts.out.join(&rec.path), &bytes)?;
                log::info!("wrote {} ({} leaves)", rec.path, rec.leaves.iter().sum::<usize>());
                Ok(rec)
            })
            .collect()
    });
    let mut records = Vec::with_capacity(opts.count);
    let mut failures = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(rec) => records.push(rec),
            Err(e) => {
                log::error!("image {i}: {e}");
                failures.push(i);
            }
        }
    }
    let manifest = RunManifest {
        run: RunInfo {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            global_seed: opts.seed,
            count: opts.count,
            preset: renderer.preset.clone(),
            config_hash: config_hash(&cfg),
            color_files: renderer.color_files.clone(),
            config: cfg,
        },
        records,
    };
    manifest.write(&opts.out)?;
    if failures.is_empty() {
        Ok(manifest)
    } else {
        Err(CliError::Partial {
            failed: failures.len(),
            total: opts.count,
        })
    }
}

/// Re-renders image `index` of the run stored in `dir`.
pub fn regenerate(dir: &Path, index: usize) -> CliResult<(Vec<u8>, ManifestRecord)> {
    let m = RunManifest::load(dir)?;
    let rec = m
        .records
        .iter()
        .find(|r| r.index == index)
        .ok_or_else(|| CliError::Manifest(format!("no record for index {index}")))?;
    if config_hash(&m.run.config) != m.run.config_hash {
        return Err(CliError::Manifest("config hash does not match run.json".into()));
    }
    let renderer = Renderer::new(m.run.config.clone())?;
    let out = renderer.render(m.run.global_seed, index)?;
    if out.1.seed != rec.seed {
        return Err(CliError::Manifest(format!("seed mismatch for index {index}")));
    }
    Ok(out)
}
