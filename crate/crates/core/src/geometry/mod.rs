//! Random leaf shapes: uniform points in a disk, Delaunay triangulation,
//! concave hull, rasterization and curvature smoothing.

mod delaunay;
mod hull;
mod points;
mod raster;
mod shape;

pub use delaunay::{delaunay, orient, Triangulation};
pub use hull::{boundary_polygon, concave_hull, ring_signed_area, ConcaveHull, Polygon};
pub use points::{sample_points_in_disk, Point, PointSet};
pub use raster::{rasterize, rasterize_disk};
pub use shape::{
    disk_mask, polygon_mask, random_polygon, rectangle_polygon, sample_shape, sample_shape_of_kind,
    smooth_mask, ShapeKind, ShapeMask, ShapeMix, ShapeParams,
};
