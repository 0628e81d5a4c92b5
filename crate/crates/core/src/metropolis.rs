//! Force-directed node relocation with Metropolis acceptance.
//!
//! Every movable node is pushed by springs of rest length `h` towards its
//! edge neighbours. The move is scored by the change of
//! `Σ (A_k - A)²` over the node's incident triangles and accepted when the
//! energy drops, or otherwise with probability `exp(-δE / T)`. Boundary
//! nodes only feel their two aligned rim neighbours and slide along their
//! rim segment; constant nodes never move.

use rand::distributions::{Distribution, Open01};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{signed_area, Point2};
use crate::mesh::{BoundarySegment, Mesh, MeshAdjacency};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetropolisParams {
    /// Step gain applied to every spring force.
    pub force: f64,
    /// Temperature, in units of area².
    pub temperature: f64,
    /// A sweep whose accepted `Σ|δE|` falls below this stops the run.
    /// `None` selects `1e-8 A² n_nodes`.
    pub tolerance: Option<f64>,
    pub max_sweeps: usize,
    pub seed: u64,
}

impl Default for MetropolisParams {
    fn default() -> Self {
        Self {
            force: 0.1,
            temperature: 0.01,
            tolerance: None,
            max_sweeps: 10_000,
            seed: 0,
        }
    }
}

impl MetropolisParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.force > 0.0 && self.force.is_finite()) {
            return Err(Error::InvalidArgument(format!("force F = {}", self.force)));
        }
        if !(self.temperature > 0.0 && self.temperature.is_finite()) {
            return Err(Error::InvalidArgument(format!("temperature T = {}", self.temperature)));
        }
        if self.max_sweeps == 0 {
            return Err(Error::InvalidArgument("max_sweeps must be at least 1".into()));
        }
        Ok(())
    }

    fn tolerance_for(&self, mesh: &Mesh) -> f64 {
        self.tolerance.unwrap_or_else(|| {
            let a = mesh.prescribed_area();
            1e-8 * a * a * mesh.n_points() as f64
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SweepReport {
    pub sweeps_run: usize,
    pub moves_proposed: usize,
    pub moves_accepted_downhill: usize,
    pub moves_accepted_metropolis: usize,
    /// Moves that would invert an incident triangle or squash it below the
    /// on-edge tolerance.
    pub moves_rejected_inverting: usize,
    pub initial_energy: f64,
    pub final_energy: f64,
}

impl SweepReport {
    pub fn moves_accepted(&self) -> usize {
        self.moves_accepted_downhill + self.moves_accepted_metropolis
    }
}

/// `Σ (A_k - A)²` over all elements.
pub fn mesh_energy(mesh: &Mesh) -> f64 {
    let target = mesh.prescribed_area();
    (0..mesh.n_elements())
        .map(|t| {
            let d = mesh.element_area(t) - target;
            d * d
        })
        .sum()
}

/// `Σ (A_k - A)²` over the triangles containing `node`.
pub fn node_energy(mesh: &Mesh, adjacency: &MeshAdjacency, node: usize) -> f64 {
    let target = mesh.prescribed_area();
    adjacency.node_triangles[node]
        .iter()
        .map(|&t| {
            let d = mesh.element_area(t) - target;
            d * d
        })
        .sum()
}

/// Spring displacement `-Σ_j F (|r_j| - h) r_j / |r_j|` with `r_j = p - p_j`.
fn spring_displacement(mesh: &Mesh, node: usize, neighbours: &[usize], force: f64) -> Result<Point2> {
    let p = mesh.points[node];
    let mut shift = Point2::default();
    for &j in neighbours {
        let r = p - mesh.points[j];
        let len = r.norm();
        if len == 0.0 {
            return Err(Error::CoincidentNodes(node, j));
        }
        shift = shift - r * (force * (len - mesh.h) / len);
    }
    Ok(shift)
}

/// Proposed position of an internal node.
pub fn propose_internal(
    mesh: &Mesh,
    adjacency: &MeshAdjacency,
    node: usize,
    params: &MetropolisParams,
) -> Result<Point2> {
    if mesh.is_boundary(node) {
        return Err(Error::InvalidArgument(format!("node {node} is on the boundary")));
    }
    let shift = spring_displacement(mesh, node, &adjacency.node_neighbors[node], params.force)?;
    Ok(mesh.points[node] + shift)
}

/// The segment carrying a boundary node and its nearest boundary
/// neighbours on that segment on either side.
fn aligned_pair(
    mesh: &Mesh,
    adjacency: &MeshAdjacency,
    node: usize,
    segments: &[BoundarySegment],
) -> Option<(usize, [usize; 2])> {
    let tol = mesh.boundary_tol();
    let p = mesh.points[node];
    let boundary_neighbours: Vec<usize> = adjacency.node_neighbors[node]
        .iter()
        .copied()
        .filter(|&j| mesh.is_boundary(j))
        .collect();
    for (s, seg) in segments.iter().enumerate() {
        if !seg.contains(p, tol) {
            continue;
        }
        let sp = seg.parameter(p);
        let mut below: Option<(f64, usize)> = None;
        let mut above: Option<(f64, usize)> = None;
        for &j in &boundary_neighbours {
            let q = mesh.points[j];
            if !seg.contains(q, tol) {
                continue;
            }
            let d = seg.parameter(q) - sp;
            if d < 0.0 && below.is_none_or(|(bd, _)| d > bd) {
                below = Some((d, j));
            } else if d > 0.0 && above.is_none_or(|(ad, _)| d < ad) {
                above = Some((d, j));
            }
        }
        if let (Some((_, lo)), Some((_, hi))) = (below, above) {
            return Some((s, [lo, hi]));
        }
    }
    None
}

/// Proposed position of a non-constant boundary node, kept on its segment.
pub fn propose_boundary(
    mesh: &Mesh,
    adjacency: &MeshAdjacency,
    node: usize,
    segments: &[BoundarySegment],
    params: &MetropolisParams,
) -> Result<Point2> {
    if !mesh.is_boundary(node) || mesh.is_constant(node) {
        return Err(Error::InvalidArgument(format!(
            "node {node} is not a movable boundary node"
        )));
    }
    let (s, pair) = aligned_pair(mesh, adjacency, node, segments).ok_or(Error::BoundaryAdjacency(node))?;
    let seg = &segments[s];
    let shift = spring_displacement(mesh, node, &pair, params.force)?;
    let along = seg.parameter(mesh.points[node]) + shift.dot(seg.direction());
    Ok(seg.point_at(along.clamp(0.0, seg.length())))
}

/// Metropolis test for an uphill (or flat) move.
pub fn metropolis_accept<R: Rng + ?Sized>(delta_e: f64, temperature: f64, rng: &mut R) -> bool {
    let r: f64 = Open01.sample(rng);
    (-delta_e / temperature).exp() > r
}

enum Outcome {
    Downhill(f64),
    Metropolis(f64),
    Rejected,
    Inverting,
}

struct Sweeper<'a> {
    mesh: Mesh,
    adjacency: MeshAdjacency,
    segments: &'a [BoundarySegment],
    params: MetropolisParams,
    rng: ChaCha8Rng,
    eps: f64,
    min_height: f64,
    target: f64,
}

fn min_height(pts: &[Point2; 3], area: f64) -> f64 {
    let longest = pts[0]
        .distance(pts[1])
        .max(pts[1].distance(pts[2]))
        .max(pts[2].distance(pts[0]));
    2.0 * area / longest
}

impl Sweeper<'_> {
    fn try_move(&mut self, node: usize, new_pos: Point2) -> Outcome {
        let mut delta = 0.0;
        for &t in &self.adjacency.node_triangles[node] {
            let tri = self.mesh.triangles[t];
            let pts: [Point2; 3] = std::array::from_fn(|k| {
                if tri[k] == node {
                    new_pos
                } else {
                    self.mesh.points[tri[k]]
                }
            });
            let new_area = signed_area(pts[0], pts[1], pts[2]);
            if new_area <= self.eps || min_height(&pts, new_area) <= self.min_height {
                return Outcome::Inverting;
            }
            let old_area = self.mesh.element_area(t);
            delta += (new_area - self.target).powi(2) - (old_area - self.target).powi(2);
        }
        if delta < 0.0 {
            self.mesh.points[node] = new_pos;
            Outcome::Downhill(delta)
        } else if metropolis_accept(delta, self.params.temperature, &mut self.rng) {
            self.mesh.points[node] = new_pos;
            Outcome::Metropolis(delta)
        } else {
            Outcome::Rejected
        }
    }
}

/// Runs sweeps over the movable nodes (internal nodes, then non-constant
/// boundary nodes, each in ascending index) until a sweep's accepted `Σ|δE|`
/// drops below the tolerance or `max_sweeps` is reached.
///
/// Nodes whose proposal cannot be formed (coincident neighbour, broken rim
/// adjacency) are skipped for that sweep.
pub fn metropolis_sweeps(
    mesh: &Mesh,
    params: &MetropolisParams,
    segments: &[BoundarySegment],
) -> Result<(Mesh, SweepReport)> {
    params.validate()?;
    let internal: Vec<usize> = (0..mesh.n_points()).filter(|&i| !mesh.is_boundary(i)).collect();
    let sliding: Vec<usize> = (0..mesh.n_points())
        .filter(|&i| mesh.is_boundary(i) && !mesh.is_constant(i))
        .collect();
    let tolerance = params.tolerance_for(mesh);
    let mut sweeper = Sweeper {
        adjacency: MeshAdjacency::new(mesh),
        eps: mesh.eps_degen(),
        min_height: mesh.on_edge_tol(),
        target: mesh.prescribed_area(),
        mesh: mesh.clone(),
        segments,
        params: *params,
        rng: ChaCha8Rng::seed_from_u64(params.seed),
    };
    let mut report = SweepReport {
        initial_energy: mesh_energy(mesh),
        ..SweepReport::default()
    };

    while report.sweeps_run < params.max_sweeps {
        report.sweeps_run += 1;
        let mut moved = 0.0;
        for (&node, on_boundary) in internal
            .iter()
            .map(|n| (n, false))
            .chain(sliding.iter().map(|n| (n, true)))
        {
            let proposal = if on_boundary {
                propose_boundary(&sweeper.mesh, &sweeper.adjacency, node, sweeper.segments, params)
            } else {
                propose_internal(&sweeper.mesh, &sweeper.adjacency, node, params)
            };
            let Ok(new_pos) = proposal else { continue };
            if new_pos == sweeper.mesh.points[node] {
                continue;
            }
            report.moves_proposed += 1;
            match sweeper.try_move(node, new_pos) {
                Outcome::Downhill(d) => {
                    report.moves_accepted_downhill += 1;
                    moved += d.abs();
                }
                Outcome::Metropolis(d) => {
                    report.moves_accepted_metropolis += 1;
                    moved += d.abs();
                }
                Outcome::Rejected => {}
                Outcome::Inverting => report.moves_rejected_inverting += 1,
            }
        }
        if moved < tolerance {
            break;
        }
    }
    report.final_energy = mesh_energy(&sweeper.mesh);
    Ok((sweeper.mesh, report))
}
