use rand::Rng;

use crate::error::{Error, Result};

pub type Point = [f64; 2];

/// Points sampled inside the disk of radius `disk_radius` around the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    pub points: Vec<Point>,
    pub disk_radius: f64,
}

impl PointSet {
    pub fn rotated(&self, theta: f64) -> PointSet {
        let (s, c) = theta.sin_cos();
        PointSet {
            points: self
                .points
                .iter()
                .map(|p| [c * p[0] - s * p[1], s * p[0] + c * p[1]])
                .collect(),
            disk_radius: self.disk_radius,
        }
    }
}

/// `n` i.i.d. uniform points in the closed disk `D(0, r)` (polar sampling
/// with a square-root radius).
pub fn sample_points_in_disk<R: Rng + ?Sized>(n: usize, r: f64, rng: &mut R) -> Result<PointSet> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("need at least 3 points, got {n}")));
    }
    if !(r > 0.0) {
        return Err(Error::InvalidParameter(format!("disk radius must be positive, got {r}")));
    }
    let points = (0..n)
        .map(|_| {
            let rho = r * rng.random::<f64>().sqrt();
            let theta = std::f64::consts::TAU * rng.random::<f64>();
            [rho * theta.cos(), rho * theta.sin()]
        })
        .collect();
    Ok(PointSet {
        points,
        disk_radius: r,
    })
}
