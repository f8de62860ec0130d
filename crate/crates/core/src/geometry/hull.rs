//! Concave hull by greedy triangle erosion.
//!
//! Triangles whose longest edge exceeds `e_min + α (e_max − e_min)` are
//! removed from the triangulation, largest first. A border triangle may go
//! only if it has exactly one border edge and its apex is not yet on a
//! border; when holes are allowed an interior triangle may also go if none
//! of its vertices touches a border. Both rules keep every input vertex in
//! the hull and keep the boundaries vertex-disjoint simple rings.
//!
//! Always removing the largest currently-removable triangle makes the
//! removal sequence for a larger threshold a prefix of the sequence for a
//! smaller one, so the hull grows monotonically with α.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use super::delaunay::Triangulation;
use super::points::Point;

/// Boundary rings of a polygon. The first ring is the outer boundary
/// (counter-clockwise); the remaining rings are holes (clockwise).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Polygon {
    pub rings: Vec<Vec<Point>>,
}

impl Polygon {
    pub fn from_outer(ring: Vec<Point>) -> Self {
        Self { rings: vec![ring] }
    }

    pub fn is_empty(&self) -> bool {
        self.rings.iter().all(|r| r.len() < 3)
    }

    pub fn outer(&self) -> &[Point] {
        self.rings.first().map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn holes(&self) -> &[Vec<Point>] {
        self.rings.get(1..).unwrap_or(&[])
    }

    /// Net enclosed area (holes subtracted).
    pub fn area(&self) -> f64 {
        self.rings.iter().map(|r| ring_signed_area(r)).sum()
    }

    pub fn vertex_count(&self) -> usize {
        self.rings.iter().map(Vec::len).sum()
    }

    pub fn map(&self, f: impl Fn(Point) -> Point) -> Polygon {
        Polygon {
            rings: self
                .rings
                .iter()
                .map(|r| r.iter().map(|&p| f(p)).collect())
                .collect(),
        }
    }

    /// Largest distance of any vertex from the origin.
    pub fn circumradius(&self) -> f64 {
        self.rings
            .iter()
            .flatten()
            .map(|p| p[0].hypot(p[1]))
            .fold(0.0, f64::max)
    }
}

pub fn ring_signed_area(ring: &[Point]) -> f64 {
    let n = ring.len();
    if n < 3 {
        return 0.0;
    }
    (0..n)
        .map(|i| {
            let (a, b) = (ring[i], ring[(i + 1) % n]);
            a[0] * b[1] - b[0] * a[1]
        })
        .sum::<f64>()
        / 2.0
}

#[derive(Clone, Debug)]
pub struct ConcaveHull {
    /// Per-triangle flag, aligned with `Triangulation::triangles`.
    pub retained: Vec<bool>,
    pub polygon: Polygon,
    pub threshold: f64,
}

impl ConcaveHull {
    pub fn retained_count(&self) -> usize {
        self.retained.iter().filter(|&&r| r).count()
    }
}

#[derive(PartialEq)]
struct Candidate {
    size: f64,
    tri: usize,
}

impl Eq for Candidate {}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size
            .total_cmp(&other.size)
            .then_with(|| other.tri.cmp(&self.tri))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Eroder<'a> {
    t: &'a Triangulation,
    retained: Vec<bool>,
    border_vertex: Vec<bool>,
    size: Vec<f64>,
    threshold: f64,
    holes: bool,
}

impl Eroder<'_> {
    fn is_border_edge(&self, tri: usize, i: usize) -> bool {
        match self.t.neighbors()[tri][i] {
            None => true,
            Some(n) => !self.retained[n],
        }
    }

    fn border_edges(&self, tri: usize) -> usize {
        (0..3).filter(|&i| self.is_border_edge(tri, i)).count()
    }

    fn removable(&self, tri: usize) -> bool {
        if !self.retained[tri] || self.size[tri] <= self.threshold {
            return false;
        }
        let verts = self.t.triangles()[tri];
        match self.border_edges(tri) {
            0 => self.holes && verts.iter().all(|&v| !self.border_vertex[v]),
            1 => {
                let edge = (0..3).find(|&i| self.is_border_edge(tri, i)).unwrap();
                let apex = verts[(edge + 2) % 3];
                !self.border_vertex[apex]
            }
            _ => false,
        }
    }

    fn remove(&mut self, tri: usize) {
        self.retained[tri] = false;
        for &v in &self.t.triangles()[tri] {
            self.border_vertex[v] = true;
        }
    }
}

/// Erodes `t` down to its concave hull for `alpha ∈ [0, 1]`.
pub fn concave_hull(t: &Triangulation, alpha: f64, holes: bool) -> ConcaveHull {
    let alpha = alpha.clamp(0.0, 1.0);
    let (e_min, e_max) = t.edge_range();
    // Exact endpoints: `e_min + (e_max - e_min)` can round below `e_max`.
    let threshold = if alpha >= 1.0 { e_max } else { e_min + alpha * (e_max - e_min) };
    let n = t.len();
    let mut er = Eroder {
        t,
        retained: vec![true; n],
        border_vertex: vec![false; t.vertices().len()],
        size: (0..n).map(|i| t.longest_edge(i)).collect(),
        threshold,
        holes,
    };
    for tri in 0..n {
        for i in 0..3 {
            if t.neighbors()[tri][i].is_none() {
                er.border_vertex[t.triangles()[tri][i]] = true;
                er.border_vertex[t.triangles()[tri][(i + 1) % 3]] = true;
            }
        }
    }

    let mut heap: BinaryHeap<Candidate> = (0..n)
        .filter(|&tri| er.size[tri] > threshold && (holes || er.border_edges(tri) > 0))
        .map(|tri| Candidate {
            size: er.size[tri],
            tri,
        })
        .collect();

    while let Some(Candidate { tri, .. }) = heap.pop() {
        if !er.removable(tri) {
            continue;
        }
        er.remove(tri);
        for nb in t.neighbors()[tri].iter().flatten() {
            if er.retained[*nb] && er.size[*nb] > threshold {
                heap.push(Candidate {
                    size: er.size[*nb],
                    tri: *nb,
                });
            }
        }
    }

    let polygon = boundary_polygon(t, &er.retained);
    ConcaveHull {
        retained: er.retained,
        polygon,
        threshold,
    }
}

/// Chains the border edges of the retained triangles into rings.
pub fn boundary_polygon(t: &Triangulation, retained: &[bool]) -> Polygon {
    let mut next: HashMap<usize, usize> = HashMap::new();
    for (tri, verts) in t.triangles().iter().enumerate() {
        if !retained[tri] {
            continue;
        }
        for i in 0..3 {
            let border = match t.neighbors()[tri][i] {
                None => true,
                Some(nb) => !retained[nb],
            };
            if border {
                next.insert(verts[i], verts[(i + 1) % 3]);
            }
        }
    }
    let mut starts: Vec<usize> = next.keys().copied().collect();
    starts.sort_unstable();
    let mut visited = vec![false; t.vertices().len()];
    let mut rings: Vec<Vec<Point>> = Vec::new();
    for s in starts {
        if visited[s] {
            continue;
        }
        let mut ring = Vec::new();
        let mut v = s;
        while !visited[v] {
            visited[v] = true;
            ring.push(t.vertices()[v]);
            match next.get(&v) {
                Some(&w) => v = w,
                None => break,
            }
        }
        if ring.len() >= 3 {
            rings.push(ring);
        }
    }
    // Outer ring first: the one with the largest positive area.
    rings.sort_by(|a, b| ring_signed_area(b).total_cmp(&ring_signed_area(a)));
    Polygon { rings }
}
