//! Leaf stacking, depth-of-field fusion, downscaling and the end-to-end
//! generator.

pub mod config;
pub mod dof;
pub mod downscale;
pub mod generate;
pub mod stack;

pub use config::{Preset, Toggles, VlConfig};
pub use dof::{dof_compose, fuse_three_planes, DofParams};
pub use downscale::{downscale, downscale2, DOWNSCALE_SIGMA};
pub use generate::{generate_vl, GeneratedImage, Generator, ImageRecord, Planes};
pub use stack::{leaves_stack, LeafRecord, SceneLayer, StackParams, MAX_LEAVES};
