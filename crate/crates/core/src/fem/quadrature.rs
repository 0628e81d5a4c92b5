use crate::error::{Error, Result};
use crate::geometry::{AreaCoords, TriangleGeom};

/// Gauss points on the reference triangle. Weights sum to 1, so the
/// physical integral of `f` is `Δ · Σ W_q f(x_q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub points: Vec<AreaCoords>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    /// Order 1 is the centroid rule, order 3 the edge-midpoint rule.
    pub fn new(order: usize) -> Result<Self> {
        match order {
            1 => Ok(Self {
                points: vec![AreaCoords::new(1.0 / 3.0, 1.0 / 3.0)],
                weights: vec![1.0],
            }),
            3 => Ok(Self {
                points: vec![
                    AreaCoords::new(0.5, 0.5),
                    AreaCoords::new(0.0, 0.5),
                    AreaCoords::new(0.5, 0.0),
                ],
                weights: vec![1.0 / 3.0; 3],
            }),
            other => Err(Error::InvalidArgument(format!(
                "unsupported quadrature order {other}; expected 1 or 3"
            ))),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Integrates `f(L, x)` over `tri`, where `L` are the area coordinates of
    /// the Gauss point and `x` its cartesian image.
    pub fn integrate<F>(&self, tri: &TriangleGeom, mut f: F) -> f64
    where
        F: FnMut(AreaCoords, crate::geometry::Point2) -> f64,
    {
        let area = tri.area();
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&l, &w)| w * area * f(l, tri.to_cartesian(l)))
            .sum()
    }
}

/// Exact `∫ L1^a L2^b L3^c dΩ = 2Δ a! b! c! / (a+b+c+2)!`.
pub fn monomial_integral(area: f64, a: u32, b: u32, c: u32) -> f64 {
    let fact = |n: u32| (1..=n).map(f64::from).product::<f64>();
    2.0 * area * fact(a) * fact(b) * fact(c) / fact(a + b + c + 2)
}
