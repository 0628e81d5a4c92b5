//! Mesh data model and the generation pipeline stages.

mod audit;
mod boundary;
mod init;
pub mod io;
mod quality;
mod refine;

pub use audit::{audit_exhaustive, find_illegal_nodes};
pub use boundary::{build_boundary_segments, classify_node, BoundarySegment, NodeClass, SegmentKind};
pub use init::{mesh_init, mesh_init_explicit};
pub use quality::{quality, MeshQuality};
pub use refine::{refine_pass, repair_illegal};

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geometry::{degeneracy_epsilon, Point2, TriangleGeom};

/// Role of a node in the mesh.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    /// Initial polygon vertex. Never moves; always on the boundary.
    Constant,
    Boundary,
    Internal,
}

impl NodeKind {
    pub fn is_boundary(self) -> bool {
        matches!(self, NodeKind::Constant | NodeKind::Boundary)
    }
}

/// Prescribed element area for element size `h`: the equilateral triangle
/// with edge `h`.
pub fn prescribed_area(h: f64) -> f64 {
    3f64.sqrt() / 4.0 * h * h
}

/// Unstructured triangular mesh.
///
/// Triangles are stored counterclockwise. The constant nodes are the first
/// `rim_len` nodes and enumerate the polygon rim in order.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub points: Vec<Point2>,
    pub triangles: Vec<[usize; 3]>,
    pub kinds: Vec<NodeKind>,
    pub rim_len: usize,
    pub h: f64,
}

impl Mesh {
    /// Builds a mesh, reorienting triangles counterclockwise.
    pub fn new(points: Vec<Point2>, triangles: Vec<[usize; 3]>, kinds: Vec<NodeKind>, h: f64) -> Result<Self> {
        if points.len() != kinds.len() {
            return Err(Error::InvalidArgument(format!(
                "{} points but {} node kinds",
                points.len(),
                kinds.len()
            )));
        }
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidArgument(format!("element size h = {h}")));
        }
        if let Some(i) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::InvalidArgument(format!("node {i} is not finite")));
        }
        let rim_len = kinds.iter().take_while(|k| **k == NodeKind::Constant).count();
        if kinds[rim_len..].contains(&NodeKind::Constant) {
            return Err(Error::InvalidArgument("constant nodes must be numbered first".into()));
        }
        let mut mesh = Self {
            points,
            triangles,
            kinds,
            rim_len,
            h,
        };
        for t in 0..mesh.triangles.len() {
            let tri = mesh.triangles[t];
            if tri.iter().any(|&v| v >= mesh.points.len()) {
                return Err(Error::InvalidArgument(format!(
                    "triangle {t} references a missing node"
                )));
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(Error::InvalidArgument(format!("triangle {t} repeats a node")));
            }
            mesh.triangles[t] = mesh.ccw(tri);
        }
        Ok(mesh)
    }

    pub fn n_points(&self) -> usize {
        self.points.len()
    }

    pub fn n_elements(&self) -> usize {
        self.triangles.len()
    }

    pub fn prescribed_area(&self) -> f64 {
        prescribed_area(self.h)
    }

    pub fn is_boundary(&self, node: usize) -> bool {
        self.kinds[node].is_boundary()
    }

    pub fn is_constant(&self, node: usize) -> bool {
        self.kinds[node] == NodeKind::Constant
    }

    pub fn rim(&self) -> &[Point2] {
        &self.points[..self.rim_len]
    }

    /// Bounding rectangle of the rim, `(min, max)`.
    pub fn superdomain(&self) -> (Point2, Point2) {
        let pts = if self.rim_len > 0 { self.rim() } else { &self.points[..] };
        let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in pts {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
        (lo, hi)
    }

    pub fn diagonal(&self) -> f64 {
        let (lo, hi) = self.superdomain();
        lo.distance(hi)
    }

    /// Smallest admissible |signed area| of an element.
    pub fn eps_degen(&self) -> f64 {
        degeneracy_epsilon(self.diagonal())
    }

    /// Tolerance for "lies on a boundary segment".
    pub fn boundary_tol(&self) -> f64 {
        1e-5 * self.diagonal()
    }

    /// Tolerance for "lies on the interior of an edge".
    pub fn on_edge_tol(&self) -> f64 {
        1e-9 * self.diagonal()
    }

    pub fn geom(&self, t: usize) -> TriangleGeom {
        let [a, b, c] = self.triangles[t];
        TriangleGeom::new(self.points[a], self.points[b], self.points[c])
    }

    pub fn element_area(&self, t: usize) -> f64 {
        self.geom(t).signed_area
    }

    pub fn total_area(&self) -> f64 {
        (0..self.n_elements()).map(|t| self.element_area(t)).sum()
    }

    /// Shoelace area of the rim polygon (positive when counterclockwise).
    pub fn rim_area(&self) -> f64 {
        let rim = self.rim();
        let n = rim.len();
        0.5 * (0..n).map(|i| rim[i].cross(rim[(i + 1) % n])).sum::<f64>()
    }

    pub fn boundary_segments(&self) -> Vec<BoundarySegment> {
        build_boundary_segments(self)
    }

    pub(crate) fn ccw(&self, tri: [usize; 3]) -> [usize; 3] {
        let [a, b, c] = tri;
        if crate::geometry::signed_area(self.points[a], self.points[b], self.points[c]) < 0.0 {
            [a, c, b]
        } else {
            tri
        }
    }

    /// Map from undirected edge `(lo, hi)` to the triangles using it.
    pub fn edge_map(&self) -> HashMap<(usize, usize), Vec<usize>> {
        let mut map: HashMap<(usize, usize), Vec<usize>> = HashMap::with_capacity(self.n_elements() * 2);
        for (t, tri) in self.triangles.iter().enumerate() {
            for k in 0..3 {
                map.entry(edge_key(tri[k], tri[(k + 1) % 3])).or_default().push(t);
            }
        }
        map
    }

    /// Cheap structural check: valid indices, positive areas, every edge used
    /// at most twice with opposite directions, and every single-use edge
    /// joining two boundary nodes.
    pub fn check_conforming(&self) -> Result<()> {
        let eps = self.eps_degen();
        for (t, tri) in self.triangles.iter().enumerate() {
            if tri.iter().any(|&v| v >= self.n_points()) {
                return Err(Error::NonConforming(format!("triangle {t} references a missing node")));
            }
            let area = self.element_area(t);
            if area <= eps {
                return Err(Error::NonConforming(format!(
                    "triangle {t} is degenerate or inverted (area {area:e})"
                )));
            }
        }
        let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
        for (t, tri) in self.triangles.iter().enumerate() {
            for k in 0..3 {
                let e = (tri[k], tri[(k + 1) % 3]);
                if let Some(other) = directed.insert(e, t) {
                    return Err(Error::NonConforming(format!(
                        "triangles {other} and {t} overlap along edge {e:?}"
                    )));
                }
            }
        }
        for &(a, b) in directed.keys() {
            if !directed.contains_key(&(b, a)) && !(self.is_boundary(a) && self.is_boundary(b)) {
                return Err(Error::NonConforming(format!(
                    "edge ({a}, {b}) has one triangle but is not on the boundary"
                )));
            }
        }
        Ok(())
    }
}

pub(crate) fn edge_key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Per-node incidence: triangles containing the node and the nodes
/// joined to it by an edge (both ascending).
#[derive(Debug, Clone)]
pub struct MeshAdjacency {
    pub node_triangles: Vec<Vec<usize>>,
    pub node_neighbors: Vec<Vec<usize>>,
}

impl MeshAdjacency {
    pub fn new(mesh: &Mesh) -> Self {
        let n = mesh.n_points();
        let mut node_triangles = vec![Vec::new(); n];
        let mut node_neighbors: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (t, tri) in mesh.triangles.iter().enumerate() {
            for k in 0..3 {
                node_triangles[tri[k]].push(t);
                node_neighbors[tri[k]].push(tri[(k + 1) % 3]);
                node_neighbors[tri[k]].push(tri[(k + 2) % 3]);
            }
        }
        for list in &mut node_neighbors {
            list.sort_unstable();
            list.dedup();
        }
        Self {
            node_triangles,
            node_neighbors,
        }
    }
}
