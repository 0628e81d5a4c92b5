//! Inputs shared by the criterion benchmarks in `benches/`.

use metromesh_core::mesh::{mesh_init, refine_pass, repair_illegal};
use metromesh_core::pipeline::{generate, PipelineOptions};
use metromesh_core::Mesh;

/// Fan mesh of the unit 16-gon.
pub fn circle(h: f64) -> Mesh {
    mesh_init(16, 1.0, h).expect("regular polygon")
}

/// Plain refinement of the 16-gon, repaired after every division.
pub fn refined_circle(h: f64) -> Mesh {
    let mut mesh = circle(h);
    loop {
        let (refined, splits) = refine_pass(&mesh);
        if splits == 0 {
            return mesh;
        }
        mesh = repair_illegal(&refined).0;
    }
}

/// Fully optimized 16-gon mesh.
pub fn optimized_circle(h: f64) -> Mesh {
    generate(&circle(h), &PipelineOptions::default()).expect("pipeline").0
}
