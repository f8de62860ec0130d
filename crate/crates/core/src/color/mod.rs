//! Color-space conversions, natural-image color pools and the power-law
//! scalar sampler shared by the size and blur laws.

mod lab;
mod power_law;
mod source;

pub use lab::{
    lab_image_to_srgb8, lab_to_linear_rgb, lab_to_srgb8, lightness_to_luminance,
    linear_rgb_to_lab, srgb8_luminance, srgb_decode, srgb_encode, srgb_to_lab, LabColor,
};
pub use power_law::{sample_power_law, sample_power_law_rng, sample_rising_power, PowerLawParams};
pub use source::{
    decode_rgb, is_image_file, list_images, load_color_source, load_color_source_with_size,
    ColorLibrary, ColorSource, DEFAULT_POOL_SIZE,
};
