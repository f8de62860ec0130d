//! Natural-image color sourcing.
//!
//! A [`ColorSource`] is a pool of actual pixels drawn from a single natural
//! image, so colors keep their joint RGB statistics.

use std::path::{Path, PathBuf};
use std::sync::{Arc, OnceLock};

use image::RgbImage;
use rand::Rng;

use super::lab::{srgb_to_lab, LabColor};
use crate::error::{Error, Result};

pub const DEFAULT_POOL_SIZE: usize = 4096;

#[derive(Clone, Debug, PartialEq)]
pub struct ColorSource {
    pixels: Vec<LabColor>,
    source_id: String,
}

impl ColorSource {
    pub fn new(pixels: Vec<LabColor>, source_id: impl Into<String>) -> Result<Self> {
        if pixels.is_empty() {
            return Err(Error::Empty("color pool".into()));
        }
        Ok(Self {
            pixels,
            source_id: source_id.into(),
        })
    }

    /// Uniformly subsamples `pool_size` pixels (with replacement).
    pub fn from_rgb_image<R: Rng + ?Sized>(
        img: &RgbImage,
        source_id: impl Into<String>,
        pool_size: usize,
        rng: &mut R,
    ) -> Result<Self> {
        let (w, h) = img.dimensions();
        let n = w as usize * h as usize;
        if n == 0 {
            return Err(Error::Empty("color source image has no pixels".into()));
        }
        if pool_size == 0 {
            return Err(Error::InvalidParameter("pool size must be positive".into()));
        }
        let raw = img.as_raw();
        let pixels = (0..pool_size)
            .map(|_| {
                let i = rng.random_range(0..n) * 3;
                srgb_to_lab([raw[i], raw[i + 1], raw[i + 2]])
            })
            .collect();
        Self::new(pixels, source_id)
    }

    pub fn pixels(&self) -> &[LabColor] {
        &self.pixels
    }

    pub fn source_id(&self) -> &str {
        &self.source_id
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn draw_color<R: Rng + ?Sized>(&self, rng: &mut R) -> LabColor {
        self.pixels[rng.random_range(0..self.pixels.len())]
    }
}

pub fn decode_rgb(path: &Path) -> Result<RgbImage> {
    let img = image::open(path).map_err(|source| Error::Decode {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(img.to_rgb8())
}

pub fn load_color_source<R: Rng + ?Sized>(path: &Path, rng: &mut R) -> Result<ColorSource> {
    load_color_source_with_size(path, DEFAULT_POOL_SIZE, rng)
}

pub fn load_color_source_with_size<R: Rng + ?Sized>(
    path: &Path,
    pool_size: usize,
    rng: &mut R,
) -> Result<ColorSource> {
    let img = decode_rgb(path)?;
    ColorSource::from_rgb_image(&img, source_id_of(path), pool_size, rng)
}

fn source_id_of(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

pub fn is_image_file(path: &Path) -> bool {
    matches!(
        path.extension()
            .and_then(|e| e.to_str())
            .map(|e| e.to_ascii_lowercase())
            .as_deref(),
        Some("png" | "jpg" | "jpeg")
    )
}

/// Sorted list of PNG/JPEG files directly inside `dir`.
pub fn list_images(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut files = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if path.is_file() && is_image_file(&path) {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

/// A folder of natural images; decoded files are cached on first use and
/// shared between workers.
#[derive(Debug)]
pub struct ColorLibrary {
    files: Vec<PathBuf>,
    cache: Vec<OnceLock<Arc<RgbImage>>>,
    pool_size: usize,
}

impl ColorLibrary {
    pub fn open(dir: &Path) -> Result<Self> {
        let files = list_images(dir)?;
        if files.is_empty() {
            return Err(Error::Empty(format!(
                "no PNG/JPEG images in color source directory {}",
                dir.display()
            )));
        }
        Ok(Self::from_files(files))
    }

    pub fn from_files(files: Vec<PathBuf>) -> Self {
        let cache = files.iter().map(|_| OnceLock::new()).collect();
        Self {
            files,
            cache,
            pool_size: DEFAULT_POOL_SIZE,
        }
    }

    pub fn with_pool_size(mut self, pool_size: usize) -> Self {
        self.pool_size = pool_size;
        self
    }

    pub fn files(&self) -> &[PathBuf] {
        &self.files
    }

    fn image(&self, i: usize) -> Result<Arc<RgbImage>> {
        if let Some(img) = self.cache[i].get() {
            return Ok(img.clone());
        }
        let img = Arc::new(decode_rgb(&self.files[i])?);
        Ok(self.cache[i].get_or_init(|| img).clone())
    }

    /// Picks one image uniformly and builds its pixel pool.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<ColorSource> {
        let i = rng.random_range(0..self.files.len());
        let img = self.image(i)?;
        ColorSource::from_rgb_image(&img, source_id_of(&self.files[i]), self.pool_size, rng)
    }
}
