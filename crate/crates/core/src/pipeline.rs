//! The generation pipeline: divisions with illegal-triangle repair, each
//! followed by the optional Delaunay and Metropolis optimizations.

use crate::delaunay::{delaunay_optimize, FlipStats, DEFAULT_MAX_PASSES};
use crate::error::Result;
use crate::mesh::{quality, refine_pass, repair_illegal, Mesh, MeshQuality};
use crate::metropolis::{metropolis_sweeps, MetropolisParams, SweepReport};

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOptions {
    /// Upper bound on the number of divisions.
    pub divisions_cap: usize,
    pub delaunay: bool,
    /// Metropolis parameters, or `None` to skip node relocation.
    pub metropolis: Option<MetropolisParams>,
    /// One more Delaunay pass after the last Metropolis run.
    pub post_delaunay: bool,
    pub delaunay_max_passes: usize,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self {
            divisions_cap: 50,
            delaunay: true,
            metropolis: Some(MetropolisParams::default()),
            post_delaunay: false,
            delaunay_max_passes: DEFAULT_MAX_PASSES,
        }
    }
}

impl PipelineOptions {
    /// Refinement and repair only.
    pub fn plain() -> Self {
        Self {
            delaunay: false,
            metropolis: None,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PipelineReport {
    pub divisions: usize,
    pub splits: usize,
    pub repairs: usize,
    pub flips: FlipStats,
    pub sweeps: Vec<SweepReport>,
    pub post_flips: Option<FlipStats>,
    /// Quality just before the post-Metropolis Delaunay pass, when one ran.
    pub quality_before_post: Option<MeshQuality>,
    pub quality: Option<MeshQuality>,
}

/// Pipeline stage just completed, passed to the observer of
/// [`generate_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Refined { division: usize },
    Repaired { division: usize },
    Delaunay { division: usize },
    Metropolis { division: usize },
    PostDelaunay,
}

fn add_flips(total: &mut FlipStats, more: FlipStats) {
    total.passes += more.passes;
    total.flips_accepted += more.flips_accepted;
    total.flips_rejected += more.flips_rejected;
}

/// Runs divisions until no element exceeds the split threshold or the cap
/// is hit. After every division that split something, the mesh is repaired
/// and then optimized (Delaunay first, then Metropolis).
pub fn generate(initial: &Mesh, options: &PipelineOptions) -> Result<(Mesh, PipelineReport)> {
    generate_with(initial, options, |_, _| {})
}

/// [`generate`], calling `observer` with the mesh after every stage.
pub fn generate_with<F>(initial: &Mesh, options: &PipelineOptions, mut observer: F) -> Result<(Mesh, PipelineReport)>
where
    F: FnMut(Stage, &Mesh),
{
    let mut mesh = initial.clone();
    let mut report = PipelineReport::default();
    let segments = mesh.boundary_segments();
    let mut seed_offset = 0u64;

    while report.divisions < options.divisions_cap {
        let (refined, splits) = refine_pass(&mesh);
        if splits == 0 {
            break;
        }
        report.divisions += 1;
        let division = report.divisions;
        report.splits += splits;
        observer(Stage::Refined { division }, &refined);
        let (repaired, repairs) = repair_illegal(&refined);
        report.repairs += repairs;
        mesh = repaired;
        observer(Stage::Repaired { division }, &mesh);

        if options.delaunay {
            let (flipped, stats) = delaunay_optimize(&mesh, options.delaunay_max_passes)?;
            add_flips(&mut report.flips, stats);
            mesh = flipped;
            observer(Stage::Delaunay { division }, &mesh);
        }
        if let Some(params) = &options.metropolis {
            let params = MetropolisParams {
                seed: params.seed.wrapping_add(seed_offset),
                ..*params
            };
            seed_offset += 1;
            let (moved, sweep) = metropolis_sweeps(&mesh, &params, &segments)?;
            report.sweeps.push(sweep);
            mesh = moved;
            observer(Stage::Metropolis { division }, &mesh);
        }
    }

    if options.post_delaunay {
        report.quality_before_post = Some(quality(&mesh));
        let (flipped, stats) = delaunay_optimize(&mesh, options.delaunay_max_passes)?;
        report.post_flips = Some(stats);
        mesh = flipped;
        observer(Stage::PostDelaunay, &mesh);
    }
    report.quality = Some(quality(&mesh));
    Ok((mesh, report))
}
