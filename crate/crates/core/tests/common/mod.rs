#![allow(dead_code)]

pub mod props;

use metromesh_core::mesh::{mesh_init, mesh_init_explicit, Mesh};
use metromesh_core::metropolis::MetropolisParams;
use metromesh_core::pipeline::PipelineOptions;
use metromesh_core::problems::RectLaplaceSpec;
use metromesh_core::Point2;

pub fn points(v: &[(f64, f64)]) -> Vec<Point2> {
    v.iter().map(|&(x, y)| Point2::new(x, y)).collect()
}

/// Square of area 2 (rotated, circumradius 1) at `h = 0.1`.
pub fn square() -> Mesh {
    mesh_init(4, 1.0, 0.1).unwrap()
}

/// L-shaped hexagon, meshed from its plain vertex mean.
pub const L_HEXAGON: [(f64, f64); 6] = [
    (-1.2, -0.8),
    (1.2, -0.8),
    (1.2, 0.3),
    (0.2, 0.3),
    (0.0, 1.0),
    (-1.2, 1.0),
];

/// Pentagon with a reflex vertex at (-0.1, 0.3); needs the weighted center.
pub const NOTCHED_PENTAGON: [(f64, f64); 5] = [(-1.2, -0.7), (0.9, -1.0), (1.2, 0.8), (-0.1, 0.3), (-0.8, 1.1)];

pub const CENTER_WEIGHT: (f64, f64) = (0.25, 0.75);

/// The two non-regular fixtures used for the `S_var` comparison.
pub fn irregular_fixtures() -> Vec<(&'static str, Mesh)> {
    vec![
        (
            "L-hexagon h=0.13",
            mesh_init_explicit(points(&L_HEXAGON), None, 0.13).unwrap(),
        ),
        (
            "notched pentagon h=0.15",
            mesh_init_explicit(points(&NOTCHED_PENTAGON), Some(CENTER_WEIGHT), 0.15).unwrap(),
        ),
    ]
}

pub fn metropolis_only(seed: u64) -> PipelineOptions {
    PipelineOptions {
        delaunay: false,
        metropolis: Some(MetropolisParams {
            seed,
            ..MetropolisParams::default()
        }),
        ..PipelineOptions::default()
    }
}

pub fn full(seed: u64) -> PipelineOptions {
    PipelineOptions {
        metropolis: Some(MetropolisParams {
            seed,
            ..MetropolisParams::default()
        }),
        ..PipelineOptions::default()
    }
}

/// A spread of domains and pipeline settings, each small enough for the
/// exhaustive audits.
pub fn corpus() -> Vec<(String, Mesh, PipelineOptions)> {
    let mut out = Vec::new();
    let domains: Vec<(&str, Mesh)> = vec![
        ("square", mesh_init(4, 1.0, 0.15).unwrap()),
        ("triangle", mesh_init(3, 1.0, 0.2).unwrap()),
        ("16-gon", mesh_init(16, 1.0, 0.2).unwrap()),
        (
            "rectangle",
            mesh_init_explicit(RectLaplaceSpec::vertices(), None, 0.15).unwrap(),
        ),
        ("L-hexagon", mesh_init_explicit(points(&L_HEXAGON), None, 0.2).unwrap()),
        (
            "notched pentagon",
            mesh_init_explicit(points(&NOTCHED_PENTAGON), Some(CENTER_WEIGHT), 0.2).unwrap(),
        ),
    ];
    for (name, mesh) in domains {
        out.push((format!("{name} plain"), mesh.clone(), PipelineOptions::plain()));
        out.push((format!("{name} metropolis"), mesh.clone(), metropolis_only(7)));
        let mut post = full(7);
        post.post_delaunay = true;
        out.push((format!("{name} full+post"), mesh, post));
    }
    out
}
