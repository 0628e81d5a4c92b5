use std::f64::consts::PI;

use super::{Mesh, NodeKind};
use crate::error::{Error, Result};
use crate::geometry::{signed_area, Point2};

/// Fan mesh of the regular `n_vertices`-gon inscribed in a circle of the
/// given radius, with one center node.
pub fn mesh_init(n_vertices: usize, radius: f64, h: f64) -> Result<Mesh> {
    if n_vertices < 3 {
        return Err(Error::InvalidArgument(format!(
            "a polygon needs at least 3 vertices, got {n_vertices}"
        )));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidArgument(format!("radius = {radius}")));
    }
    let step = 2.0 * PI / n_vertices as f64;
    let vertices = (0..n_vertices)
        .map(|k| {
            let phi = step * k as f64;
            Point2::new(radius * phi.cos(), radius * phi.sin())
        })
        .collect();
    mesh_init_explicit(vertices, None, h)
}

/// Fan mesh from an explicit polygon (assumed simple).
///
/// Without a weight the center is the vertex mean. With `weight = (w1, w2)`
/// the vertices are split by whether `|p|² >= |mean|²` (measured from the
/// superdomain center at the origin) and the center becomes
/// `(w1 Σ p_far + w2 Σ p_near) / n`.
pub fn mesh_init_explicit(vertices: Vec<Point2>, weight: Option<(f64, f64)>, h: f64) -> Result<Mesh> {
    let n = vertices.len();
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "a polygon needs at least 3 vertices, got {n}"
        )));
    }
    for i in 0..n {
        if vertices[i] == vertices[(i + 1) % n] {
            return Err(Error::InvalidArgument(format!(
                "vertices {i} and {} coincide",
                (i + 1) % n
            )));
        }
    }
    let center = fan_center(&vertices, weight);

    let mut points = vertices;
    points.push(center);
    let mut kinds = vec![NodeKind::Constant; n];
    kinds.push(NodeKind::Internal);

    let orientation = {
        let area2: f64 = (0..n).map(|i| points[i].cross(points[(i + 1) % n])).sum();
        area2.signum()
    };
    let mut triangles = Vec::with_capacity(n);
    for i in 0..n {
        triangles.push([i, (i + 1) % n, n]);
    }

    let mesh = Mesh::new(points, triangles.clone(), kinds, h)?;
    let eps = mesh.eps_degen();
    for (t, &[a, b, c]) in triangles.iter().enumerate() {
        let area = signed_area(mesh.points[a], mesh.points[b], mesh.points[c]) * orientation;
        if area <= eps {
            return Err(Error::CenterPlacement { triangle: t });
        }
    }
    Ok(mesh)
}

fn fan_center(vertices: &[Point2], weight: Option<(f64, f64)>) -> Point2 {
    let n = vertices.len() as f64;
    let sum = vertices.iter().fold(Point2::default(), |acc, &p| acc + p);
    let mean = sum * (1.0 / n);
    let Some((w_far, w_near)) = weight else {
        return mean;
    };
    let threshold = mean.norm_sq();
    let (mut far, mut near) = (Point2::default(), Point2::default());
    for &p in vertices {
        if p.norm_sq() - threshold >= 0.0 {
            far = far + p;
        } else {
            near = near + p;
        }
    }
    (far * w_far + near * w_near) * (1.0 / n)
}
