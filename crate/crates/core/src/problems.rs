//! The two benchmark problems and nodal error reports.
//!
//! * Laplace on `[-1, 1] × [0, 1]` with `φ = φ0` on `x = ±1` and `φ = 0`
//!   elsewhere, referenced against its Fourier series.
//! * Poisson `∇²φ = -1` on the unit disk (meshed as a regular 16-gon) with
//!   `φ = 0` on the rim and exact solution `0.25 (1 - x² - y²)`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::fem::CoefficientFields;
use crate::geometry::Point2;
use crate::mesh::io::fmt_real;
use crate::mesh::{mesh_init, mesh_init_explicit, Mesh};

/// Compensated (Neumaier) running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.compensation += (self.sum - t) + v;
        } else {
            self.compensation += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// How the two rectangle corners at each end of `x = ±1` take their
/// Dirichlet value, where `φ0` meets `0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CornerValue {
    /// `φ0`: the vertical sides own their end points.
    Phi0,
    Zero,
    /// `φ0 / 2`, the value a Fourier series takes at a jump.
    #[default]
    Average,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RectLaplaceSpec {
    pub phi0: f64,
    /// Odd terms `n ≤ series_terms` enter the reference series.
    pub series_terms: usize,
    pub corner_value: CornerValue,
    /// Leave the four corner nodes out of the error maximum.
    pub exclude_corners: bool,
}

impl Default for RectLaplaceSpec {
    fn default() -> Self {
        Self {
            phi0: 1.0,
            series_terms: 200,
            corner_value: CornerValue::default(),
            exclude_corners: true,
        }
    }
}

impl RectLaplaceSpec {
    pub fn validate(&self) -> Result<()> {
        if self.series_terms < 1 {
            return Err(Error::InvalidArgument("series_terms must be at least 1".into()));
        }
        if !self.phi0.is_finite() {
            return Err(Error::InvalidArgument("phi0 must be finite".into()));
        }
        Ok(())
    }

    pub fn vertices() -> Vec<Point2> {
        vec![
            Point2::new(-1.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(-1.0, 1.0),
        ]
    }

    pub fn gamma(&self, p: Point2) -> f64 {
        const TOL: f64 = 1e-9;
        let side = (p.x.abs() - 1.0).abs() <= TOL;
        let lid = p.y.abs() <= TOL || (p.y - 1.0).abs() <= TOL;
        match (side, lid) {
            (true, false) => self.phi0,
            (true, true) => match self.corner_value {
                CornerValue::Phi0 => self.phi0,
                CornerValue::Zero => 0.0,
                CornerValue::Average => 0.5 * self.phi0,
            },
            _ => 0.0,
        }
    }

    pub fn fields(&self) -> CoefficientFields {
        let spec = *self;
        CoefficientFields::new(|_| 1.0, |_| 0.0, move |p| spec.gamma(p))
    }
}

/// Partial sum of `(4φ0/π) Σ_{n odd} cosh(nπx)/cosh(nπ) sin(nπy) / n`.
pub fn rect_series(p: Point2, spec: &RectLaplaceSpec) -> f64 {
    let ax = p.x.abs();
    let mut acc = NeumaierSum::default();
    for n in (1..=spec.series_terms).step_by(2) {
        let k = n as f64 * PI;
        let ratio = (k * (ax - 1.0)).exp() * (1.0 + (-2.0 * k * ax).exp()) / (1.0 + (-2.0 * k).exp());
        acc.add(ratio * (k * p.y).sin() / n as f64);
    }
    4.0 * spec.phi0 / PI * acc.value()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CirclePoissonSpec {
    pub radius: f64,
    /// Value of `∇²φ`.
    pub rhs_constant: f64,
}

impl Default for CirclePoissonSpec {
    fn default() -> Self {
        Self {
            radius: 1.0,
            rhs_constant: -1.0,
        }
    }
}

impl CirclePoissonSpec {
    /// With `ε = 1` the strong form `-∇²φ + ρ = 0` gives `ρ = ∇²φ`.
    pub fn fields(&self) -> CoefficientFields {
        let s = self.rhs_constant;
        CoefficientFields::new(|_| 1.0, move |_| s, |_| 0.0)
    }
}

/// `0.25 (1 - x² - y²)`.
pub fn circle_exact(p: Point2) -> f64 {
    0.25 * (1.0 - p.x * p.x - p.y * p.y)
}

/// A benchmark problem ready to be meshed and solved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Problem {
    RectLaplace(RectLaplaceSpec),
    CirclePoisson(CirclePoissonSpec),
}

impl Problem {
    pub fn name(&self) -> &'static str {
        match self {
            Problem::RectLaplace(_) => "rect-laplace",
            Problem::CirclePoisson(_) => "circle-poisson",
        }
    }

    /// Initial fan mesh of the problem's domain.
    pub fn initial_mesh(&self, h: f64) -> Result<Mesh> {
        match self {
            Problem::RectLaplace(_) => mesh_init_explicit(RectLaplaceSpec::vertices(), None, h),
            Problem::CirclePoisson(c) => mesh_init(16, c.radius, h),
        }
    }

    pub fn fields(&self) -> CoefficientFields {
        match self {
            Problem::RectLaplace(r) => r.fields(),
            Problem::CirclePoisson(c) => c.fields(),
        }
    }

    pub fn reference(&self, p: Point2) -> f64 {
        match self {
            Problem::RectLaplace(r) => rect_series(p, r),
            Problem::CirclePoisson(c) => {
                let r2 = c.radius * c.radius;
                -0.25 * c.rhs_constant * (r2 - p.x * p.x - p.y * p.y)
            }
        }
    }

    /// Nodes left out of the error maximum.
    pub fn excluded_nodes(&self, mesh: &Mesh) -> Vec<usize> {
        match self {
            Problem::RectLaplace(r) if r.exclude_corners => (0..mesh.n_points())
                .filter(|&i| {
                    let p = mesh.points[i];
                    (p.x.abs() - 1.0).abs() <= 1e-9 && (p.y.abs() <= 1e-9 || (p.y - 1.0).abs() <= 1e-9)
                })
                .collect(),
            _ => Vec::new(),
        }
    }

    /// Compares a nodal solution with the reference.
    pub fn compare(&self, mesh: &Mesh, numeric: &[f64]) -> Result<ErrorReport> {
        compare_excluding(mesh, numeric, |p| self.reference(p), &self.excluded_nodes(mesh))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub max_abs_error: f64,
    /// Node attaining the maximum, if any node was counted.
    pub argmax: Option<usize>,
    pub nodewise_errors: Vec<f64>,
    pub reference_values: Vec<f64>,
    pub excluded: Vec<usize>,
    pub h_used: f64,
}

impl ErrorReport {
    pub fn summary(&self) -> String {
        let at = match self.argmax {
            Some(i) => format!(" at node {i}"),
            None => String::new(),
        };
        format!(
            "max|dphi| = {:.6e}{at} (h = {}, nodes = {}, excluded = {})",
            self.max_abs_error,
            self.h_used,
            self.nodewise_errors.len(),
            self.excluded.len()
        )
    }

    /// CSV `node_id,x,y,numeric,reference,abs_error,excluded`.
    pub fn to_csv(&self, mesh: &Mesh, numeric: &[f64]) -> String {
        let mut s = String::from("node_id,x,y,numeric,reference,abs_error,excluded\n");
        for (i, p) in mesh.points.iter().enumerate() {
            let _ = writeln!(
                s,
                "{i},{},{},{},{},{},{}",
                fmt_real(p.x),
                fmt_real(p.y),
                fmt_real(numeric[i]),
                fmt_real(self.reference_values[i]),
                fmt_real(self.nodewise_errors[i]),
                u8::from(self.excluded.contains(&i))
            );
        }
        s
    }
}

pub fn compare(mesh: &Mesh, numeric: &[f64], reference: impl Fn(Point2) -> f64) -> Result<ErrorReport> {
    compare_excluding(mesh, numeric, reference, &[])
}

/// Like [`compare`], with the listed nodes reported but not counted in the
/// maximum.
pub fn compare_excluding(
    mesh: &Mesh,
    numeric: &[f64],
    reference: impl Fn(Point2) -> f64,
    excluded: &[usize],
) -> Result<ErrorReport> {
    if numeric.len() != mesh.n_points() {
        return Err(Error::InvalidArgument(format!(
            "{} values for {} nodes",
            numeric.len(),
            mesh.n_points()
        )));
    }
    let reference_values: Vec<f64> = mesh.points.iter().map(|&p| reference(p)).collect();
    let nodewise_errors: Vec<f64> = numeric
        .iter()
        .zip(&reference_values)
        .map(|(a, b)| (a - b).abs())
        .collect();
    let mut max_abs_error = 0.0;
    let mut argmax = None;
    for (i, &e) in nodewise_errors.iter().enumerate() {
        if excluded.contains(&i) {
            continue;
        }
        if argmax.is_none() || e > max_abs_error {
            max_abs_error = e;
            argmax = Some(i);
        }
    }
    let mut excluded = excluded.to_vec();
    excluded.sort_unstable();
    Ok(ErrorReport {
        max_abs_error,
        argmax,
        nodewise_errors,
        reference_values,
        excluded,
        h_used: mesh.h,
    })
}
