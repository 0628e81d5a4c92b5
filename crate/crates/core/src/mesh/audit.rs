//! Geometric audits of a triangulation.

use super::Mesh;
use crate::error::{Error, Result};
use crate::geometry::{segment_distance, signed_area, Point2};

/// Uniform bucket grid over the mesh nodes.
pub(crate) struct PointGrid {
    origin: Point2,
    cell: f64,
    nx: usize,
    ny: usize,
    buckets: Vec<Vec<usize>>,
}

impl PointGrid {
    pub(crate) fn new(points: &[Point2]) -> Self {
        let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in points {
            lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let span = (hi.x - lo.x).max(hi.y - lo.y).max(f64::MIN_POSITIVE);
        let per_side = ((points.len() as f64).sqrt().ceil() as usize).max(1);
        let cell = span / per_side as f64;
        let nx = ((hi.x - lo.x) / cell).floor() as usize + 1;
        let ny = ((hi.y - lo.y) / cell).floor() as usize + 1;
        let mut grid = Self {
            origin: lo,
            cell,
            nx,
            ny,
            buckets: vec![Vec::new(); nx * ny],
        };
        for (i, &p) in points.iter().enumerate() {
            let (cx, cy) = grid.cell_of(p);
            grid.buckets[cy * nx + cx].push(i);
        }
        grid
    }

    fn cell_of(&self, p: Point2) -> (usize, usize) {
        let cx = ((p.x - self.origin.x) / self.cell).floor().max(0.0) as usize;
        let cy = ((p.y - self.origin.y) / self.cell).floor().max(0.0) as usize;
        (cx.min(self.nx - 1), cy.min(self.ny - 1))
    }

    /// Nodes whose cell overlaps the box spanned by `a`, `b` grown by `pad`.
    pub(crate) fn candidates(&self, a: Point2, b: Point2, pad: f64) -> impl Iterator<Item = usize> + '_ {
        let lo = Point2::new(a.x.min(b.x) - pad, a.y.min(b.y) - pad);
        let hi = Point2::new(a.x.max(b.x) + pad, a.y.max(b.y) + pad);
        let (x0, y0) = self.cell_of(lo);
        let (x1, y1) = self.cell_of(hi);
        (y0..=y1).flat_map(move |cy| (x0..=x1).flat_map(move |cx| self.buckets[cy * self.nx + cx].iter().copied()))
    }
}

/// Node lying strictly inside edge `a`-`b`, the one closest to `a` if several.
pub(crate) fn node_on_edge(mesh: &Mesh, grid: &PointGrid, a: usize, b: usize, tol: f64) -> Option<usize> {
    let (pa, pb) = (mesh.points[a], mesh.points[b]);
    let len = pa.distance(pb);
    let margin = tol / len;
    let mut best: Option<(f64, usize)> = None;
    for v in grid.candidates(pa, pb, tol) {
        if v == a || v == b {
            continue;
        }
        let (dist, t) = segment_distance(mesh.points[v], pa, pb);
        if dist <= tol && t > margin && t < 1.0 - margin && best.is_none_or(|(bt, _)| t < bt) {
            best = Some((t, v));
        }
    }
    best.map(|(_, v)| v)
}

/// `(triangle, edge index, node)` for every triangle edge with a node in
/// its interior.
pub fn find_illegal_nodes(mesh: &Mesh) -> Vec<(usize, usize, usize)> {
    let grid = PointGrid::new(&mesh.points);
    let tol = mesh.on_edge_tol();
    let mut found = Vec::new();
    for (t, tri) in mesh.triangles.iter().enumerate() {
        for k in 0..3 {
            if let Some(v) = node_on_edge(mesh, &grid, tri[k], tri[(k + 1) % 3], tol) {
                found.push((t, k, v));
            }
        }
    }
    found
}

fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    signed_area(a, b, c)
}

fn segments_cross(p1: Point2, p2: Point2, q1: Point2, q2: Point2, eps: f64) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    ((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps)) && ((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps))
}

fn strictly_inside(p: Point2, tri: [Point2; 3], eps: f64) -> bool {
    (0..3).all(|k| orient(tri[k], tri[(k + 1) % 3], p) > eps)
}

/// Exhaustive O(M²) conformity audit plus area and illegal-node checks.
///
/// Every pair of triangles must share nothing, one node, or one full edge
/// with the opposite vertices on opposite sides; no edges may cross; no
/// vertex may sit inside another triangle or on another triangle's edge;
/// the elements must tile the rim polygon.
pub fn audit_exhaustive(mesh: &Mesh) -> Result<()> {
    mesh.check_conforming()?;
    let eps = mesh.eps_degen();
    let tris: Vec<[Point2; 3]> = mesh
        .triangles
        .iter()
        .map(|t| [mesh.points[t[0]], mesh.points[t[1]], mesh.points[t[2]]])
        .collect();
    for i in 0..tris.len() {
        for j in (i + 1)..tris.len() {
            let (ti, tj) = (mesh.triangles[i], mesh.triangles[j]);
            let shared: Vec<usize> = ti.iter().copied().filter(|v| tj.contains(v)).collect();
            if shared.len() == 3 {
                return Err(Error::NonConforming(format!("triangles {i} and {j} coincide")));
            }
            if shared.len() == 2 {
                let oi = ti.iter().copied().find(|v| !shared.contains(v)).unwrap();
                let oj = tj.iter().copied().find(|v| !shared.contains(v)).unwrap();
                let (a, b) = (mesh.points[shared[0]], mesh.points[shared[1]]);
                let si = orient(a, b, mesh.points[oi]);
                let sj = orient(a, b, mesh.points[oj]);
                if si * sj >= 0.0 {
                    return Err(Error::NonConforming(format!(
                        "triangles {i} and {j} fold over their shared edge"
                    )));
                }
            }
            for ei in 0..3 {
                for ej in 0..3 {
                    let (a, b) = (tris[i][ei], tris[i][(ei + 1) % 3]);
                    let (c, d) = (tris[j][ej], tris[j][(ej + 1) % 3]);
                    if segments_cross(a, b, c, d, eps) {
                        return Err(Error::NonConforming(format!("edges of triangles {i} and {j} cross")));
                    }
                }
            }
            for k in 0..3 {
                if !shared.contains(&tj[k]) && strictly_inside(tris[j][k], tris[i], eps) {
                    return Err(Error::NonConforming(format!("node {} lies inside triangle {i}", tj[k])));
                }
                if !shared.contains(&ti[k]) && strictly_inside(tris[i][k], tris[j], eps) {
                    return Err(Error::NonConforming(format!("node {} lies inside triangle {j}", ti[k])));
                }
            }
        }
    }
    if let Some(&(t, k, v)) = find_illegal_nodes(mesh).first() {
        return Err(Error::NonConforming(format!(
            "node {v} lies on edge {k} of triangle {t}"
        )));
    }
    let rim = mesh.rim_area().abs();
    let total = mesh.total_area();
    if (total - rim).abs() > 1e-10 * rim {
        return Err(Error::NonConforming(format!(
            "elements cover area {total} but the rim encloses {rim}"
        )));
    }
    Ok(())
}
