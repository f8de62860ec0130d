//! Procedural leaf textures: pseudo-periodic patterns, colored power-law
//! noise, their two-scale blend, turbulence warps and perspective.

pub mod blend;
pub mod homography;
pub mod micro;
pub mod periodic;
pub mod sample;
pub mod warp;

pub use blend::two_scale_texture;
pub use homography::{is_convex_quad, perspective_warp, solve_homography, Homography, HomographyCorners};
pub use micro::{micro_texture, micro_texture_rect, rank_permutation, rank_remap, shape_spectrum, PROJECTION_ROUNDS, spectral_filter, MicroParams};
pub use periodic::{
    clip_rescale, interpolate_colors, period_sequence, periodic_field, periodic_field_with, render_periodic, sigmoid,
    PeriodicParams,
};
pub use sample::{
    render_texture, sample_periodic_params, sample_perspective, sample_texture, sample_texture_spec, TextureKind,
    TextureMix, TextureParams, TextureSpec,
};
pub use warp::{apply_displacement, bilinear, warp_field, Displacement, WarpParams};
