use std::collections::HashMap;

use super::audit::{node_on_edge, PointGrid};
use super::boundary::{classify_node, NodeClass};
use super::{edge_key, Mesh, NodeKind};

/// Ratio of element area to prescribed area above which an element is split.
pub const SPLIT_RATIO: f64 = 1.5;

/// One division: every element with area above `1.5 A` is bisected at the
/// midpoint of its longest edge. A midpoint shared by two split neighbours
/// is inserted once. Returns the number of elements split.
pub fn refine_pass(mesh: &Mesh) -> (Mesh, usize) {
    let limit = SPLIT_RATIO * mesh.prescribed_area();
    let segments = mesh.boundary_segments();
    let tol = mesh.boundary_tol();

    let mut out = mesh.clone();
    out.triangles.clear();
    let mut midpoints: HashMap<(usize, usize), usize> = HashMap::new();
    let mut count = 0;

    for (t, &tri) in mesh.triangles.iter().enumerate() {
        if mesh.element_area(t) <= limit {
            out.triangles.push(tri);
            continue;
        }
        count += 1;
        let k = longest_edge(mesh, tri);
        let (a, b, opp) = (tri[k], tri[(k + 1) % 3], tri[(k + 2) % 3]);
        let mid = *midpoints.entry(edge_key(a, b)).or_insert_with(|| {
            let p = mesh.points[a].midpoint(mesh.points[b]);
            let kind = match classify_node(p, &segments, tol) {
                NodeClass::Boundary => NodeKind::Boundary,
                NodeClass::Internal => NodeKind::Internal,
            };
            out.points.push(p);
            out.kinds.push(kind);
            out.points.len() - 1
        });
        out.triangles.push([a, mid, opp]);
        out.triangles.push([mid, b, opp]);
    }
    (out, count)
}

/// Index of the longest edge `(tri[k], tri[k+1])`; ties go to the lowest `k`.
fn longest_edge(mesh: &Mesh, tri: [usize; 3]) -> usize {
    let mut best = 0;
    let mut best_len = -1.0;
    for k in 0..3 {
        let len = mesh.points[tri[k]].distance(mesh.points[tri[(k + 1) % 3]]);
        if len > best_len {
            best = k;
            best_len = len;
        }
    }
    best
}

/// Splits every triangle that has a node in the interior of one of its
/// edges by joining that node to the opposite vertex, until none is left.
/// Returns the number of splits.
pub fn repair_illegal(mesh: &Mesh) -> (Mesh, usize) {
    let mut current = mesh.clone();
    let grid = PointGrid::new(&current.points);
    let tol = current.on_edge_tol();
    let mut total = 0;
    loop {
        let mut next = Vec::with_capacity(current.triangles.len());
        let mut repaired = 0;
        for &tri in &current.triangles {
            let hit = (0..3).find_map(|k| node_on_edge(&current, &grid, tri[k], tri[(k + 1) % 3], tol).map(|v| (k, v)));
            match hit {
                Some((k, v)) => {
                    let (a, b, opp) = (tri[k], tri[(k + 1) % 3], tri[(k + 2) % 3]);
                    next.push([a, v, opp]);
                    next.push([v, b, opp]);
                    repaired += 1;
                }
                None => next.push(tri),
            }
        }
        current.triangles = next;
        total += repaired;
        if repaired == 0 {
            return (current, total);
        }
    }
}
