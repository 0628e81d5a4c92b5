//! Linear-triangle finite elements for `-∇·(ε∇φ) + ρ = 0` with Dirichlet
//! data on every rim node.
//!
//! The assembled system is `K φ = -f` with
//! `K_lm = Σ_i ∫ ε ∇L_l·∇L_m dΩ` and `f_m = Σ_i ∫ ρ L_m dΩ`. Dirichlet values
//! are imposed by symmetric elimination, which keeps the constrained matrix
//! symmetric positive definite, and the system is solved by conjugate
//! gradients with a Jacobi preconditioner.

mod element;
mod quadrature;
mod sparse;

use std::collections::BTreeMap;
use std::fmt::Write as _;

pub use element::{element_matrices, CoefficientFields, ElementMatrices};
pub use quadrature::{monomial_integral, QuadratureRule};
pub use sparse::{CooMatrix, CsrMatrix};

use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::mesh::io::fmt_real;
use crate::mesh::Mesh;

/// Required relative residual `‖Kφ + f‖ / ‖f‖` of an accepted solve.
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    pub matrix: CsrMatrix,
    /// The load vector `f`; the equations read `K φ = -f`.
    pub rhs: Vec<f64>,
    pub dirichlet: BTreeMap<usize, f64>,
}

/// Scatter-adds all element contributions in element order.
pub fn assemble(mesh: &Mesh, fields: &CoefficientFields, rule: &QuadratureRule) -> Result<LinearSystem> {
    let n = mesh.n_points();
    let mut coo = CooMatrix::new(n);
    coo.entries.reserve(9 * mesh.n_elements());
    let mut rhs = vec![0.0; n];
    for (t, &ids) in mesh.triangles.iter().enumerate() {
        let e = element_matrices(&mesh.geom(t), ids, fields, rule)?;
        for i in 0..3 {
            for j in 0..3 {
                coo.push(ids[i], ids[j], e.k[i][j]);
            }
            rhs[ids[i]] += e.f[i];
        }
    }
    Ok(LinearSystem {
        matrix: coo.to_csr(),
        rhs,
        dirichlet: BTreeMap::new(),
    })
}

/// Fixes `φ = gamma` on every constant and boundary node.
pub fn apply_dirichlet(system: &LinearSystem, mesh: &Mesh, gamma: &dyn Fn(Point2) -> f64) -> LinearSystem {
    let values: BTreeMap<usize, f64> = (0..mesh.n_points())
        .filter(|&i| mesh.is_boundary(i))
        .map(|i| (i, gamma(mesh.points[i])))
        .collect();
    constrain(system, values)
}

/// Symmetric elimination of the given node values.
pub fn constrain(system: &LinearSystem, values: BTreeMap<usize, f64>) -> LinearSystem {
    let mut matrix = system.matrix.clone();
    let mut rhs = system.rhs.clone();
    let mut dirichlet = system.dirichlet.clone();
    dirichlet.extend(values);
    for (i, rhs_i) in rhs.iter_mut().enumerate() {
        let fixed_row = dirichlet.get(&i).copied();
        for k in matrix.row_ptr[i]..matrix.row_ptr[i + 1] {
            let j = matrix.col_idx[k];
            if fixed_row.is_some() {
                matrix.values[k] = if i == j { 1.0 } else { 0.0 };
            } else if let Some(&g) = dirichlet.get(&j) {
                // K_ij g moves to the right-hand side of K φ = -f
                *rhs_i += matrix.values[k] * g;
                matrix.values[k] = 0.0;
            }
        }
        if let Some(g) = fixed_row {
            *rhs_i = -g;
        }
    }
    LinearSystem { matrix, rhs, dirichlet }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub phi: Vec<f64>,
    pub iterations: usize,
    /// `‖Kφ + f‖ / ‖f‖`, or the absolute residual when `f = 0`.
    pub relative_residual: f64,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn residual_of(system: &LinearSystem, phi: &[f64]) -> f64 {
    let kphi = system.matrix.matvec(phi);
    let r: Vec<f64> = kphi.iter().zip(&system.rhs).map(|(a, f)| a + f).collect();
    let fnorm = norm(&system.rhs);
    if fnorm == 0.0 {
        norm(&r)
    } else {
        norm(&r) / fnorm
    }
}

const MAX_RESTARTS: usize = 5;

/// Runs preconditioned CG on `K dx = r`, adding `dx` to `x`. Returns the
/// iteration count.
fn pcg(k: &CsrMatrix, diag: &[f64], mut r: Vec<f64>, x: &mut [f64], target: f64, max_iter: usize) -> Result<usize> {
    let n = k.n;
    let mut z: Vec<f64> = r.iter().zip(diag).map(|(r, d)| r / d).collect();
    let mut p = z.clone();
    let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
    let mut ap = vec![0.0; n];
    let mut iterations = 0;
    while iterations < max_iter && norm(&r) > target {
        iterations += 1;
        k.matvec_into(&p, &mut ap);
        let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
        if pap <= 0.0 || !pap.is_finite() {
            return Err(Error::SolveFailed(format!(
                "matrix not positive definite (pᵀKp = {pap:e} at iteration {iterations})"
            )));
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
            z[i] = r[i] / diag[i];
        }
        let rz_new: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Ok(iterations)
}

/// Solves `K φ = -f` by Jacobi-preconditioned conjugate gradients.
pub fn solve(system: &LinearSystem) -> Result<Solution> {
    let n = system.matrix.n;
    let diag = system.matrix.diagonal();
    if let Some((i, d)) = diag.iter().enumerate().find(|(_, d)| **d <= 0.0 || !d.is_finite()) {
        return Err(Error::SolveFailed(format!("non-positive pivot {d:e} at row {i}")));
    }
    let b: Vec<f64> = system.rhs.iter().map(|f| -f).collect();
    let bnorm = norm(&b);
    let mut x = vec![0.0; n];
    if bnorm == 0.0 {
        return Ok(Solution {
            phi: x,
            iterations: 0,
            relative_residual: 0.0,
        });
    }
    let max_iter = 10 * n + 1000;
    let target = 1e-2 * RESIDUAL_TOLERANCE * bnorm;
    let mut iterations = 0;
    for _ in 0..MAX_RESTARTS {
        let kx = system.matrix.matvec(&x);
        let r: Vec<f64> = b.iter().zip(&kx).map(|(b, k)| b - k).collect();
        if norm(&r) <= target {
            break;
        }
        iterations += pcg(&system.matrix, &diag, r, &mut x, target, max_iter)?;
    }
    let relative_residual = residual_of(system, &x);
    if relative_residual > RESIDUAL_TOLERANCE {
        return Err(Error::SolveFailed(format!(
            "no convergence after {iterations} iterations (relative residual {relative_residual:e})"
        )));
    }
    Ok(Solution {
        phi: x,
        iterations,
        relative_residual,
    })
}

/// Assembles, constrains with `fields.gamma` and solves.
pub fn solve_problem(mesh: &Mesh, fields: &CoefficientFields, rule: &QuadratureRule) -> Result<Solution> {
    let system = assemble(mesh, fields, rule)?;
    let constrained = apply_dirichlet(&system, mesh, &*fields.gamma);
    solve(&constrained)
}

/// CSV `node_id,x,y,phi` with 17 significant digits.
pub fn write_solution(mesh: &Mesh, phi: &[f64]) -> Result<String> {
    if phi.len() != mesh.n_points() {
        return Err(Error::InvalidArgument(format!(
            "solution has {} values for {} nodes",
            phi.len(),
            mesh.n_points()
        )));
    }
    let mut s = String::from("node_id,x,y,phi\n");
    for (i, (p, v)) in mesh.points.iter().zip(phi).enumerate() {
        let _ = writeln!(s, "{i},{},{},{}", fmt_real(p.x), fmt_real(p.y), fmt_real(*v));
    }
    Ok(s)
}

/// Reads the `phi` column of a solution CSV, checking the node ids.
pub fn read_solution(text: &str) -> Result<Vec<f64>> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, header)) if header.trim() == "node_id,x,y,phi" => {}
        Some((i, _)) => {
            return Err(Error::Parse {
                line: i + 1,
                message: "expected header 'node_id,x,y,phi'".into(),
            })
        }
        None => {
            return Err(Error::Parse {
                line: 0,
                message: "empty solution file".into(),
            })
        }
    }
    let mut phi = Vec::new();
    for (i, line) in lines {
        let bad = |message: String| Error::Parse { line: i + 1, message };
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 4 {
            return Err(bad(format!("expected 4 fields, found {}", fields.len())));
        }
        let id: usize = fields[0]
            .parse()
            .map_err(|_| bad(format!("bad node id '{}'", fields[0])))?;
        if id != phi.len() {
            return Err(bad(format!("expected node {}, found {id}", phi.len())));
        }
        phi.push(
            fields[3]
                .parse()
                .map_err(|_| bad(format!("bad value '{}'", fields[3])))?,
        );
    }
    Ok(phi)
}
