use std::fmt;

use super::quadrature::QuadratureRule;
use crate::error::{Error, Result};
use crate::geometry::{Point2, TriangleGeom};

type Field = Box<dyn Fn(Point2) -> f64 + Send + Sync>;

/// Permittivity `ε`, source `ρ` and Dirichlet data `γ` of the problem
/// `-∇·(ε∇φ) + ρ = 0`.
pub struct CoefficientFields {
    pub epsilon: Field,
    pub rho: Field,
    pub gamma: Field,
}

impl CoefficientFields {
    pub fn new(
        epsilon: impl Fn(Point2) -> f64 + Send + Sync + 'static,
        rho: impl Fn(Point2) -> f64 + Send + Sync + 'static,
        gamma: impl Fn(Point2) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            epsilon: Box::new(epsilon),
            rho: Box::new(rho),
            gamma: Box::new(gamma),
        }
    }

    pub fn constant(epsilon: f64, rho: f64, gamma: f64) -> Self {
        Self::new(move |_| epsilon, move |_| rho, move |_| gamma)
    }
}

impl fmt::Debug for CoefficientFields {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoefficientFields").finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementMatrices {
    pub k: [[f64; 3]; 3],
    pub f: [f64; 3],
    pub node_ids: [usize; 3],
}

/// Local stiffness and load of one linear element.
pub fn element_matrices(
    tri: &TriangleGeom,
    node_ids: [usize; 3],
    fields: &CoefficientFields,
    rule: &QuadratureRule,
) -> Result<ElementMatrices> {
    if tri.signed_area == 0.0 || !tri.signed_area.is_finite() {
        return Err(Error::SingularTransform(tri.signed_area));
    }
    let grad = tri.gradient_transform()?;
    let area = tri.area();
    let mut k = [[0.0; 3]; 3];
    let mut f = [0.0; 3];
    for (l, &w) in rule.points.iter().zip(&rule.weights) {
        let x = tri.to_cartesian(*l);
        let scale = w * area;
        let eps = (fields.epsilon)(x);
        let rho = (fields.rho)(x);
        let shape = l.as_array();
        for i in 0..3 {
            for j in 0..3 {
                k[i][j] += scale * eps * (grad[i][0] * grad[j][0] + grad[i][1] * grad[j][1]);
            }
            f[i] += scale * rho * shape[i];
        }
    }
    Ok(ElementMatrices { k, f, node_ids })
}
