//! PNG output.

use std::io::Write;
use std::path::Path;

use tempfile::NamedTempFile;

use crate::color::lab_image_to_srgb8;
use crate::error::{Error, Result};
use crate::image::Image64;

/// Interleaved 8-bit sRGB pixels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rgb8Image {
    pub width: usize,
    pub height: usize,
    pub data: Vec<u8>,
    /// Pixels whose Lab value fell outside the sRGB gamut and were clamped.
    pub clipped: usize,
}

impl Rgb8Image {
    pub fn from_lab(img: &Image64) -> Self {
        let (data, clipped) = lab_image_to_srgb8(&img.to_raster());
        Self {
            width: img.width(),
            height: img.height(),
            data,
            clipped,
        }
    }
}

/// Encodes an 8-bit RGB PNG tagged with an sRGB chunk.
pub fn encode_png<W: Write>(out: W, img: &Rgb8Image, path: &Path) -> Result<()> {
    let enc_err = |source| Error::Encode {
        path: path.to_path_buf(),
        source,
    };
    let mut enc = png::Encoder::new(out, img.width as u32, img.height as u32);
    enc.set_color(png::ColorType::Rgb);
    enc.set_depth(png::BitDepth::Eight);
    enc.set_source_srgb(png::SrgbRenderingIntent::Perceptual);
    let mut writer = enc.write_header().map_err(enc_err)?;
    writer.write_image_data(&img.data).map_err(enc_err)?;
    writer.finish().map_err(enc_err)
}

/// The complete PNG file for `img`.
pub fn png_bytes(img: &Rgb8Image) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    encode_png(&mut out, img, Path::new("<memory>"))?;
    Ok(out)
}

/// Writes `bytes` to `path` through a temporary file in the same directory,
/// so readers never observe a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

pub fn write_png(path: &Path, img: &Rgb8Image) -> Result<()> {
    let mut bytes = Vec::new();
    encode_png(&mut bytes, img, path)?;
    write_atomic(path, &bytes)
}
