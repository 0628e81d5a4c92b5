mod common;

use common::props;
use metromesh_core::mesh::{audit_exhaustive, Mesh, NodeKind};
use metromesh_core::metropolis::{mesh_energy, metropolis_sweeps, MetropolisParams};
use metromesh_core::Point2;

fn check(result: props::Check) {
    if let Err(e) = result {
        panic!("{e}");
    }
}

#[test]
fn stiffness_matches_closed_form() {
    check(props::stiffness_matches_closed_form());
}

#[test]
fn quadrature_is_exact_up_to_its_degree() {
    check(props::quadrature_exactness());
}

#[test]
fn global_stiffness_is_symmetric_with_constant_null_space() {
    check(props::global_stiffness(&props::generated()));
}

#[test]
fn patch_test_on_generated_meshes() {
    check(props::patch_test(&props::generated()));
}

#[test]
fn delaunay_post_condition_holds() {
    check(props::delaunay_post_condition(&props::generated()));
}

#[test]
fn every_stage_is_conforming() {
    check(props::every_stage_conforming());
}

#[test]
fn boundary_nodes_stay_on_their_segments() {
    check(props::boundary_nodes_on_segments(&props::generated()));
}

#[test]
fn cold_metropolis_is_energy_monotone() {
    check(props::cold_metropolis_monotone(&props::generated()));
}

#[test]
fn acceptance_rate_matches_boltzmann_factor() {
    check(props::acceptance_rate());
}

#[test]
fn pipeline_is_byte_deterministic() {
    check(props::pipeline_deterministic());
}

/// Hexagon with seven hand-placed internal nodes.
fn hexagon_with_interior() -> Mesh {
    let mut pts: Vec<Point2> = (0..6)
        .map(|k| {
            let t = std::f64::consts::PI / 3.0 * k as f64;
            Point2::new(t.cos(), t.sin())
        })
        .collect();
    pts.push(Point2::new(0.12, -0.07));
    let inner = [
        (0.55, 0.1),
        (0.2, 0.42),
        (-0.3, 0.5),
        (-0.45, -0.05),
        (-0.2, -0.4),
        (0.35, -0.45),
    ];
    pts.extend(inner.iter().map(|&(x, y)| Point2::new(x, y)));
    let mut tris = Vec::new();
    for k in 0..6 {
        let (i, j) = (7 + k, 7 + (k + 1) % 6);
        tris.push([6, i, j]);
        tris.push([k, (k + 1) % 6, i]);
        tris.push([(k + 1) % 6, j, i]);
    }
    let mut kinds = vec![NodeKind::Constant; 6];
    kinds.extend([NodeKind::Internal; 7]);
    Mesh::new(pts, tris, kinds, 0.6).unwrap()
}

#[test]
fn metropolis_lowers_energy_on_hexagon() {
    let mesh = hexagon_with_interior();
    audit_exhaustive(&mesh).unwrap();
    let (out, report) = metropolis_sweeps(&mesh, &MetropolisParams::default(), &mesh.boundary_segments()).unwrap();
    assert!(report.final_energy < report.initial_energy);
    assert!(mesh_energy(&out) < mesh_energy(&mesh));
    assert_eq!(out.points[..6], mesh.points[..6]);
    audit_exhaustive(&out).unwrap();
}
