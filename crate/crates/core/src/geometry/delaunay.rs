//! Delaunay triangulation of a point set, normalized to counter-clockwise
//! triangles with explicit edge adjacency.

use std::collections::HashMap;

use super::points::{Point, PointSet};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Triangulation {
    vertices: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    /// `neighbors[t][i]` is the triangle across edge `(t[i], t[(i + 1) % 3])`.
    neighbors: Vec<[Option<usize>; 3]>,
}

#[inline]
pub fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

impl Triangulation {
    /// Builds a triangulation from counter-clockwise or clockwise index
    /// triples; orientation is normalized and adjacency recomputed.
    pub fn from_triangles(vertices: Vec<Point>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        if triangles.is_empty() {
            return Err(Error::Degenerate("no triangles".into()));
        }
        let triangles: Vec<[usize; 3]> = triangles
            .into_iter()
            .map(|[a, b, c]| {
                if orient(vertices[a], vertices[b], vertices[c]) < 0.0 {
                    [a, c, b]
                } else {
                    [a, b, c]
                }
            })
            .collect();
        let mut edge_owner: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
        let mut neighbors = vec![[None; 3]; triangles.len()];
        for (t, tri) in triangles.iter().enumerate() {
            for i in 0..3 {
                let (a, b) = (tri[i], tri[(i + 1) % 3]);
                let key = (a.min(b), a.max(b));
                if let Some(&(u, j)) = edge_owner.get(&key) {
                    neighbors[t][i] = Some(u);
                    neighbors[u][j] = Some(t);
                } else {
                    edge_owner.insert(key, (t, i));
                }
            }
        }
        Ok(Self {
            vertices,
            triangles,
            neighbors,
        })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn neighbors(&self) -> &[[Option<usize>; 3]] {
        &self.neighbors
    }

    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn corner(&self, t: usize, i: usize) -> Point {
        self.vertices[self.triangles[t][i]]
    }

    pub fn area(&self, t: usize) -> f64 {
        0.5 * orient(self.corner(t, 0), self.corner(t, 1), self.corner(t, 2))
    }

    pub fn edge_length(&self, t: usize, i: usize) -> f64 {
        let a = self.corner(t, i);
        let b = self.corner(t, (i + 1) % 3);
        (a[0] - b[0]).hypot(a[1] - b[1])
    }

    pub fn longest_edge(&self, t: usize) -> f64 {
        (0..3).map(|i| self.edge_length(t, i)).fold(0.0, f64::max)
    }

    /// Shortest and longest edge over the whole triangulation.
    pub fn edge_range(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for t in 0..self.len() {
            for i in 0..3 {
                let e = self.edge_length(t, i);
                lo = lo.min(e);
                hi = hi.max(e);
            }
        }
        (lo, hi)
    }
}

/// Delaunay triangulation. Fails when all points are collinear (or fewer
/// than three distinct points exist).
pub fn delaunay(ps: &PointSet) -> Result<Triangulation> {
    if ps.points.len() < 3 {
        return Err(Error::Degenerate(format!(
            "need at least 3 points, got {}",
            ps.points.len()
        )));
    }
    let pts: Vec<delaunator::Point> = ps
        .points
        .iter()
        .map(|p| delaunator::Point { x: p[0], y: p[1] })
        .collect();
    let tri = delaunator::triangulate(&pts);
    if tri.triangles.is_empty() {
        return Err(Error::Degenerate("points are collinear".into()));
    }
    let triangles = tri
        .triangles
        .chunks_exact(3)
        .map(|c| [c[0], c[1], c[2]])
        .collect();
    Triangulation::from_triangles(ps.points.clone(), triangles)
}
