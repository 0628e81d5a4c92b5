//! Property suites shared by the `properties` and `acceptance` targets.
//! Every check returns `Err` with a description of the first violation.

use metromesh_core::delaunay::{delaunay_optimize, delaunay_violations, DEFAULT_MAX_PASSES};
use metromesh_core::fem::{
    apply_dirichlet, assemble, element_matrices, monomial_integral, solve, CoefficientFields, QuadratureRule,
};
use metromesh_core::geometry::TriangleGeom;
use metromesh_core::mesh::io::write_mesh;
use metromesh_core::mesh::{audit_exhaustive, find_illegal_nodes, Mesh, NodeKind};
use metromesh_core::metropolis::{mesh_energy, metropolis_accept, metropolis_sweeps, MetropolisParams};
use metromesh_core::pipeline::{generate, generate_with, Stage};
use metromesh_core::Point2;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if $cond {
        } else {
            return Err(format!($($msg)+));
        }
    };
}

pub fn generated() -> Vec<(String, Mesh)> {
    super::corpus()
        .into_iter()
        .map(|(name, mesh, options)| (name, generate(&mesh, &options).unwrap().0))
        .collect()
}

fn triangle_strategy(span: f64) -> impl Strategy<Value = TriangleGeom> {
    (prop::array::uniform3(-span..span), prop::array::uniform3(-span..span)).prop_map(|(x, y)| {
        TriangleGeom::new(
            Point2::new(x[0], y[0]),
            Point2::new(x[1], y[1]),
            Point2::new(x[2], y[2]),
        )
    })
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(
        Config {
            cases,
            failure_persistence: None,
            ..Config::default()
        },
        proptest::test_runner::TestRng::deterministic_rng(proptest::test_runner::RngAlgorithm::ChaCha),
    )
}

pub fn stiffness_matches_closed_form() -> Check {
    let strategy = (triangle_strategy(10.0), 0.1f64..10.0).prop_filter("non-degenerate", |(t, _)| t.area() > 1e-3);
    runner(1000)
        .run(&strategy, |(tri, eps)| {
            let fields = CoefficientFields::constant(eps, 0.0, 0.0);
            for order in [1, 3] {
                let e = element_matrices(&tri, [0, 1, 2], &fields, &QuadratureRule::new(order).unwrap()).unwrap();
                for l in 0..3 {
                    for m in 0..3 {
                        let exact = eps * (tri.a[l] * tri.a[m] + tri.b[l] * tri.b[m]) / (4.0 * tri.area());
                        let scale = exact
                            .abs()
                            .max(eps * (tri.a[l].hypot(tri.b[l]) * tri.a[m].hypot(tri.b[m])) / (4.0 * tri.area()));
                        prop_assert!(
                            (e.k[l][m] - exact).abs() <= 1e-10 * scale,
                            "K[{l}][{m}] {} vs {}",
                            e.k[l][m],
                            exact
                        );
                    }
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn quadrature_exactness() -> Check {
    let strategy = triangle_strategy(5.0).prop_filter("non-degenerate", |t| t.area() > 1e-3);
    runner(200)
        .run(&strategy, |tri| {
            for (order, degree) in [(1usize, 1u32), (3, 2)] {
                let rule = QuadratureRule::new(order).unwrap();
                for a in 0..=degree {
                    for b in 0..=degree - a {
                        for c in 0..=degree - a - b {
                            let q = rule.integrate(&tri, |l, _| {
                                let [l1, l2, l3] = l.as_array();
                                l1.powi(a as i32) * l2.powi(b as i32) * l3.powi(c as i32)
                            });
                            let exact = monomial_integral(tri.area(), a, b, c);
                            prop_assert!((q - exact).abs() <= 1e-12 * tri.area(), "order {order} L^({a},{b},{c})");
                        }
                    }
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn global_stiffness(meshes: &[(String, Mesh)]) -> Check {
    for (name, mesh) in meshes {
        let sys = assemble(
            mesh,
            &CoefficientFields::constant(1.0, 1.0, 0.0),
            &QuadratureRule::new(3).unwrap(),
        )
        .map_err(|e| e.to_string())?;
        let asym = sys.matrix.asymmetry();
        ensure!(asym <= 1e-12, "{name}: asymmetry {asym:e}");
        let k1 = sys.matrix.matvec(&vec![1.0; mesh.n_points()]);
        let scale = sys.matrix.diagonal().iter().fold(0.0f64, |m, v| m.max(*v));
        let worst = k1.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        ensure!(worst <= 1e-10 * scale, "{name}: |K 1| = {worst:e}");
    }
    Ok(())
}

pub fn patch_test(meshes: &[(String, Mesh)]) -> Check {
    let linear = |p: Point2| 0.7 - 1.3 * p.x + 2.1 * p.y;
    for (name, mesh) in meshes {
        let fields = CoefficientFields::new(|_| 1.0, |_| 0.0, linear);
        let sys = assemble(mesh, &fields, &QuadratureRule::new(1).unwrap()).map_err(|e| e.to_string())?;
        let sol = solve(&apply_dirichlet(&sys, mesh, &linear)).map_err(|e| format!("{name}: {e}"))?;
        for (i, &p) in mesh.points.iter().enumerate() {
            let err = (sol.phi[i] - linear(p)).abs();
            ensure!(err <= 1e-9, "{name}: node {i} off by {err:e}");
        }
    }
    Ok(())
}

pub fn delaunay_post_condition(meshes: &[(String, Mesh)]) -> Check {
    for (name, mesh) in meshes {
        ensure!(mesh.n_elements() <= 2000, "{name}: {} elements", mesh.n_elements());
        let (flipped, stats) = delaunay_optimize(mesh, DEFAULT_MAX_PASSES).map_err(|e| e.to_string())?;
        ensure!(stats.passes < DEFAULT_MAX_PASSES, "{name}: flip loop hit the pass cap");
        let bad = delaunay_violations(&flipped);
        ensure!(bad.is_empty(), "{name}: {} violating edges", bad.len());
        audit_exhaustive(&flipped).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(())
}

pub fn every_stage_conforming() -> Check {
    for (name, mesh, options) in super::corpus() {
        let mut failure = None;
        generate_with(&mesh, &options, |stage, m| {
            if failure.is_some() || matches!(stage, Stage::Refined { .. }) {
                return;
            }
            if let Err(e) = audit_exhaustive(m) {
                failure = Some(format!("{name} after {stage:?}: {e}"));
            } else if !find_illegal_nodes(m).is_empty() {
                failure = Some(format!("{name} after {stage:?}: illegal node"));
            }
        })
        .map_err(|e| e.to_string())?;
        if let Some(f) = failure {
            return Err(f);
        }
    }
    Ok(())
}

pub fn boundary_nodes_on_segments(meshes: &[(String, Mesh)]) -> Check {
    for (name, mesh) in meshes {
        let segments = mesh.boundary_segments();
        let tol = mesh.boundary_tol();
        for (i, &p) in mesh.points.iter().enumerate() {
            if mesh.kinds[i] == NodeKind::Boundary {
                ensure!(
                    segments.iter().any(|s| s.contains(p, tol)),
                    "{name}: node {i} at {p:?} left the rim"
                );
            }
        }
    }
    Ok(())
}

pub fn cold_metropolis_monotone(meshes: &[(String, Mesh)]) -> Check {
    let params = MetropolisParams {
        temperature: 1e-300,
        max_sweeps: 1,
        ..MetropolisParams::default()
    };
    for (name, mesh) in meshes {
        let segments = mesh.boundary_segments();
        let mut current = mesh.clone();
        let mut energy = mesh_energy(&current);
        for sweep in 0..20 {
            let (next, _) = metropolis_sweeps(&current, &MetropolisParams { seed: sweep, ..params }, &segments)
                .map_err(|e| e.to_string())?;
            let e = mesh_energy(&next);
            ensure!(
                e <= energy * (1.0 + 1e-12),
                "{name}: energy rose from {energy:e} to {e:e}"
            );
            energy = e;
            current = next;
        }
    }
    Ok(())
}

pub fn acceptance_rate() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let trials = 10_000;
    for (delta_e, temperature) in [(std::f64::consts::LN_2, 1.0), (0.3, 0.1), (1e-6, 1e-5)] {
        let p = (-delta_e / temperature).exp();
        let accepted = (0..trials)
            .filter(|_| metropolis_accept(delta_e, temperature, &mut rng))
            .count();
        let mean = p * trials as f64;
        let sigma = (trials as f64 * p * (1.0 - p)).sqrt();
        ensure!(
            (accepted as f64 - mean).abs() <= 3.0 * sigma,
            "{accepted} accepted, expected {mean:.0} ± {:.0}",
            3.0 * sigma
        );
    }
    Ok(())
}

pub fn pipeline_deterministic() -> Check {
    for (name, mesh, options) in super::corpus() {
        let a = write_mesh(&generate(&mesh, &options).unwrap().0);
        let b = write_mesh(&generate(&mesh, &options).unwrap().0);
        ensure!(a == b, "{name}: two runs differ");
    }
    Ok(())
}

/// Every suite with its name.
pub fn all() -> Vec<(&'static str, Check)> {
    let meshes = generated();
    vec![
        ("element stiffness closed form", stiffness_matches_closed_form()),
        ("global K symmetric, K·1 = 0", global_stiffness(&meshes)),
        ("patch test", patch_test(&meshes)),
        ("quadrature exactness", quadrature_exactness()),
        ("Delaunay post-condition", delaunay_post_condition(&meshes)),
        ("conformity after every stage", every_stage_conforming()),
        ("Metropolis T=1e-300 monotone", cold_metropolis_monotone(&meshes)),
        ("acceptance rate within 3σ", acceptance_rate()),
        ("boundary nodes on segments", boundary_nodes_on_segments(&meshes)),
        ("pipeline determinism", pipeline_deterministic()),
    ]
}
