//! Edge-flip optimization towards a Delaunay triangulation.
//!
//! Each pass walks the triangles in index order. For every edge shared with
//! a neighbour, the neighbour's opposite vertex is tested against the
//! triangle's circumcircle. When it lies strictly inside, the shared edge is
//! exchanged for the other diagonal of the quadrilateral, and the exchange is
//! kept only if the removed vertex scores a larger in-circle determinant
//! against the new triangle than the violating point did against the old one.
//! Node positions never change.

use std::collections::HashMap;

use crate::error::Result;
use crate::geometry::{in_circumcircle, TriangleGeom};
use crate::mesh::Mesh;

pub const DEFAULT_MAX_PASSES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FlipStats {
    pub passes: usize,
    pub flips_accepted: usize,
    pub flips_rejected: usize,
}

/// How violating points are looked up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScanMode {
    /// Only the opposite vertices of edge-adjacent triangles are tested.
    #[default]
    Adjacent,
    /// Every mesh node is tested against every triangle; a violating node
    /// is flipped only when it is the opposite vertex of a neighbour.
    FullScan,
}

/// In-circle tolerance for a domain with the given bounding-box diagonal.
pub fn incircle_epsilon(diagonal: f64) -> f64 {
    1e-10 * diagonal.powi(4)
}

pub fn delaunay_optimize(mesh: &Mesh, max_passes: usize) -> Result<(Mesh, FlipStats)> {
    delaunay_optimize_with(mesh, max_passes, ScanMode::Adjacent)
}

pub fn delaunay_optimize_with(mesh: &Mesh, max_passes: usize, mode: ScanMode) -> Result<(Mesh, FlipStats)> {
    mesh.check_conforming()?;
    let mut out = mesh.clone();
    let mut stats = FlipStats::default();
    let eps = incircle_epsilon(mesh.diagonal());
    let eps_area = mesh.eps_degen();

    while stats.passes < max_passes {
        stats.passes += 1;
        let mut flipper = Flipper::new(&mut out, eps, eps_area);
        let mut flipped = false;
        for t in 0..flipper.mesh.n_elements() {
            match mode {
                ScanMode::Adjacent => {
                    for k in 0..3 {
                        if flipper.try_edge(t, k, &mut stats) {
                            flipped = true;
                            break;
                        }
                    }
                }
                ScanMode::FullScan => {
                    for p in 0..flipper.mesh.n_points() {
                        if flipper.mesh.triangles[t].contains(&p) {
                            continue;
                        }
                        let geom = flipper.mesh.geom(t);
                        if in_circumcircle(&geom, flipper.mesh.points[p]) >= -eps {
                            continue;
                        }
                        let edge = (0..3).find(|&k| flipper.opposite(t, k) == Some(p));
                        if let Some(k) = edge {
                            if flipper.try_edge(t, k, &mut stats) {
                                flipped = true;
                                break;
                            }
                        }
                    }
                }
            }
        }
        if !flipped {
            break;
        }
    }
    Ok((out, stats))
}

struct Flipper<'a> {
    mesh: &'a mut Mesh,
    edges: HashMap<(usize, usize), usize>,
    eps: f64,
    eps_area: f64,
    min_height: f64,
}

impl<'a> Flipper<'a> {
    fn new(mesh: &'a mut Mesh, eps: f64, eps_area: f64) -> Self {
        let min_height = mesh.on_edge_tol();
        let mut edges = HashMap::with_capacity(mesh.n_elements() * 3);
        for (t, tri) in mesh.triangles.iter().enumerate() {
            for k in 0..3 {
                edges.insert((tri[k], tri[(k + 1) % 3]), t);
            }
        }
        Self {
            mesh,
            edges,
            eps,
            eps_area,
            min_height,
        }
    }

    /// Opposite vertex across edge `k` of triangle `t`, if that edge is shared.
    fn opposite(&self, t: usize, k: usize) -> Option<usize> {
        let tri = self.mesh.triangles[t];
        let (a, c) = (tri[k], tri[(k + 1) % 3]);
        let u = *self.edges.get(&(c, a))?;
        let ut = self.mesh.triangles[u];
        ut.iter().copied().find(|&v| v != a && v != c)
    }

    /// Tests edge `k` of triangle `t` and flips it when that is accepted.
    fn try_edge(&mut self, t: usize, k: usize, stats: &mut FlipStats) -> bool {
        let tri = self.mesh.triangles[t];
        let (a, c, b) = (tri[k], tri[(k + 1) % 3], tri[(k + 2) % 3]);
        // rim edges have no neighbour and are never flipped
        let Some(&u) = self.edges.get(&(c, a)) else {
            return false;
        };
        let d = self.mesh.triangles[u]
            .iter()
            .copied()
            .find(|&v| v != a && v != c)
            .expect("neighbour shares exactly one edge");
        let pts = &self.mesh.points;
        let before = in_circumcircle(&TriangleGeom::new(pts[a], pts[c], pts[b]), pts[d]);
        if before >= -self.eps {
            return false;
        }
        // quadrilateral a, d, c, b is counterclockwise; new diagonal b-d
        let first = [a, d, b];
        let second = [d, c, b];
        let g1 = TriangleGeom::new(pts[first[0]], pts[first[1]], pts[first[2]]);
        let g2 = TriangleGeom::new(pts[second[0]], pts[second[1]], pts[second[2]]);
        let thin = |g: &TriangleGeom| 2.0 * g.signed_area / g.longest_edge() <= self.min_height;
        if g1.signed_area <= self.eps_area || g2.signed_area <= self.eps_area || thin(&g1) || thin(&g2) {
            stats.flips_rejected += 1;
            return false;
        }
        let after = in_circumcircle(&g2, pts[a]);
        if after <= before {
            stats.flips_rejected += 1;
            return false;
        }
        for tri in [self.mesh.triangles[t], self.mesh.triangles[u]] {
            for k in 0..3 {
                self.edges.remove(&(tri[k], tri[(k + 1) % 3]));
            }
        }
        self.mesh.triangles[t] = first;
        self.mesh.triangles[u] = second;
        for (idx, tri) in [(t, first), (u, second)] {
            for k in 0..3 {
                self.edges.insert((tri[k], tri[(k + 1) % 3]), idx);
            }
        }
        stats.flips_accepted += 1;
        true
    }
}

/// Interior edges whose opposite vertex lies strictly inside the
/// neighbouring triangle's circumcircle, as `(triangle, vertex)` pairs.
pub fn delaunay_violations(mesh: &Mesh) -> Vec<(usize, usize)> {
    let eps = incircle_epsilon(mesh.diagonal());
    let mut directed = HashMap::new();
    for (t, tri) in mesh.triangles.iter().enumerate() {
        for k in 0..3 {
            directed.insert((tri[k], tri[(k + 1) % 3]), t);
        }
    }
    let mut bad = Vec::new();
    for (t, tri) in mesh.triangles.iter().enumerate() {
        for k in 0..3 {
            let (a, c) = (tri[k], tri[(k + 1) % 3]);
            if let Some(&u) = directed.get(&(c, a)) {
                let d = mesh.triangles[u].iter().copied().find(|&v| v != a && v != c).unwrap();
                if in_circumcircle(&mesh.geom(t), mesh.points[d]) < -eps {
                    bad.push((t, d));
                }
            }
        }
    }
    bad
}
