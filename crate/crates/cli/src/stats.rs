//! `stats`: naturalness statistics of an image folder against a reference.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use vl_core::color::list_images;
use vl_core::export::write_atomic;
use vl_core::stats::{load_gray, Gray, StatsReport, StatsSettings};

use crate::{CliError, CliResult};

#[derive(Clone, Debug, Default)]
pub struct StatsOptions {
    pub input: PathBuf,
    pub reference: Option<PathBuf>,
    pub out: PathBuf,
    /// Optional `freq,power,count` table of the input spectrum.
    pub csv: Option<PathBuf>,
    pub settings: StatsSettings,
}

/// A decoded folder.
#[derive(Clone, Debug)]
pub struct Corpus {
    pub dir: PathBuf,
    pub images: Vec<Gray>,
    /// Files that failed to decode.
    pub skipped: Vec<String>,
}

impl Corpus {
    /// Decodes every PNG/JPEG in `dir`, in file-name order.
    pub fn load(dir: &Path) -> CliResult<Self> {
        let files = list_images(dir)?;
        let decoded: Vec<_> = files.par_iter().map(|f| (f, load_gray(f))).collect();
        let mut images = Vec::new();
        let mut skipped = Vec::new();
        for (f, r) in decoded {
            match r {
                Ok(g) => images.push(g),
                Err(e) => {
                    log::warn!("skipping {}: {e}", f.display());
                    skipped.push(f.display().to_string());
                }
            }
        }
        if !skipped.is_empty() {
            log::warn!("{} undecodable files skipped in {}", skipped.len(), dir.display());
        }
        if images.is_empty() {
            return Err(CliError::EmptyFolder(dir.to_path_buf()));
        }
        Ok(Self {
            dir: dir.to_path_buf(),
            images,
            skipped,
        })
    }
}

/// The JSON document written by `stats`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsOutput {
    pub input_dir: String,
    pub reference_dir: Option<String>,
    pub skipped_input: usize,
    pub skipped_reference: usize,
    #[serde(flatten)]
    pub report: StatsReport,
}

pub fn compute_stats(input: &Corpus, reference: Option<&Corpus>, settings: StatsSettings) -> CliResult<StatsOutput> {
    let report = StatsReport::compute(&input.images, reference.map(|r| r.images.as_slice()), settings)?;
    Ok(StatsOutput {
        input_dir: input.dir.display().to_string(),
        reference_dir: reference.map(|r| r.dir.display().to_string()),
        skipped_input: input.skipped.len(),
        skipped_reference: reference.map_or(0, |r| r.skipped.len()),
        report,
    })
}

pub fn cmd_stats(opts: &StatsOptions) -> CliResult<StatsOutput> {
    let input = Corpus::load(&opts.input)?;
    let reference = opts.reference.as_deref().map(Corpus::load).transpose()?;
    let out = compute_stats(&input, reference.as_ref(), opts.settings.clone())?;
    let json = serde_json::to_string_pretty(&out).expect("stats serialize") + "\n";
    write_atomic(&opts.out, json.as_bytes())?;
    if let Some(csv) = &opts.csv {
        write_atomic(csv, out.report.input.spectrum_csv().as_bytes())?;
    }
    Ok(out)
}
