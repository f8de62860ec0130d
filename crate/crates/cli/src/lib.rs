//! The `vleaves` command-line tool: dataset generation, statistics and
//! preset inspection.

pub mod generate;
pub mod manifest;
pub mod preset;
pub mod stats;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use thiserror::Error;
use vl_core::compositing::Preset;
use vl_core::export::write_atomic;
use vl_core::stats::{StatsSettings, DEFAULT_PATCH, DEFAULT_PATCHES, FIT_HI, FIT_LO};

pub use generate::{cmd_generate, regenerate, GenerateOptions};
pub use manifest::{ManifestRecord, RunInfo, RunManifest};
pub use preset::{preset_list, preset_show};
pub use stats::{cmd_stats, Corpus, StatsOptions, StatsOutput};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] vl_core::Error),
    #[error("I/O error on {0}: {1}")]
    Io(PathBuf, #[source] std::io::Error),
    #[error("no color source folder: pass --colors or set `colors` in the config")]
    NoColors,
    #[error("no decodable images in {0}")]
    EmptyFolder(PathBuf),
    #[error("bad manifest: {0}")]
    Manifest(String),
    #[error("{failed} of {total} images failed")]
    Partial { failed: usize, total: usize },
    #[error("{0}")]
    Usage(String),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "vleaves", version, about = "Synthetic dead-leaves image datasets and naturalness statistics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Render COUNT images plus run.json and manifest.jsonl into OUT.
    Generate {
        /// TOML config (or JSON with a .json extension); defaults apply otherwise.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Folder of natural images to draw colors from; overrides the config.
        #[arg(long)]
        colors: Option<PathBuf>,
        /// Replace the config's toggles with a preset's.
        #[arg(long)]
        preset: Option<Preset>,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads (default: all cores). Output does not depend on it.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Re-render one image of a previous run from its manifest.
    Regenerate {
        /// Output directory of the original run.
        #[arg(long)]
        run: PathBuf,
        #[arg(long)]
        index: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Gradient histogram, KL divergence and spectrum slope of a folder.
    Stats {
        #[arg(long)]
        input: PathBuf,
        #[arg(long = "ref")]
        reference: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Also write the input's radial spectrum as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_PATCH)]
        patch: usize,
        #[arg(long, default_value_t = DEFAULT_PATCHES)]
        patches: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = FIT_LO)]
        f_lo: f64,
        #[arg(long, default_value_t = FIT_HI)]
        f_hi: f64,
    },
    /// List the built-in presets or print one as TOML.
    Preset {
        #[command(subcommand)]
        action: PresetAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum PresetAction {
    List,
    Show { name: String },
}

/// Runs a parsed command; returns what should go to stdout.
pub fn run(cli: Cli) -> CliResult<String> {
    match cli.command {
        Command::Generate {
            config,
            colors,
            preset,
            count,
            seed,
            out,
            threads,
        } => {
            let opts = GenerateOptions {
                config,
                colors,
                preset,
                count,
                seed,
                out,
                threads,
            };
            let m = cmd_generate(&opts)?;
            Ok(format!(
                "wrote {} images to {} (config {})\n",
                m.records.len(),
                opts.out.display(),
                &m.run.config_hash[..12]
            ))
        }
        Command::Regenerate { run, index, out } => {
            let (bytes, rec) = regenerate(&run, index)?;
            write_atomic(&out, &bytes)?;
            Ok(format!("{} {}\n", out.display(), rec.sha256))
        }
        Command::Stats {
            input,
            reference,
            out,
            csv,
            patch,
            patches,
            seed,
            f_lo,
            f_hi,
        } => {
            let settings = StatsSettings {
                patch_size: patch,
                n_patches: patches,
                seed,
                fit_lo: f_lo,
                fit_hi: f_hi,
                ..StatsSettings::default()
            };
            let opts = StatsOptions {
                input,
                reference,
                out,
                csv,
                settings,
            };
            let s = cmd_stats(&opts)?;
            let fit = &s.report.input.slope;
            let mut text = format!("gamma {:.4} r2 {:.4}", fit.gamma, fit.r2);
            if let Some(kl) = s.report.kl {
                text.push_str(&format!(" kl {kl:.6}"));
            }
            Ok(text + "\n")
        }
        Command::Preset { action } => match action {
            PresetAction::List => Ok(preset_list()),
            PresetAction::Show { name } => preset_show(&name),
        },
    }
}
