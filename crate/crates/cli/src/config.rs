//! Run settings from flags and an optional TOML key-value file.
//!
//! Every setting resolves as flag, then file, then built-in default. The
//! seed additionally falls back to `METROMESH_SEED` before the default.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use metromesh_core::metropolis::MetropolisParams;
use metromesh_core::pipeline::PipelineOptions;
use metromesh_core::problems::{CirclePoissonSpec, Problem, RectLaplaceSpec};
use serde::Deserialize;

pub const SEED_ENV: &str = "METROMESH_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    RegularPolygon,
    ExplicitVertices,
    Rectangle,
    Circle16,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemKind {
    RectLaplace,
    CirclePoisson,
}

/// Keys accepted in the `--config` file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub shape: Option<Shape>,
    pub sides: Option<usize>,
    pub radius: Option<f64>,
    pub vertices_file: Option<PathBuf>,
    pub h: Option<f64>,
    pub divisions: Option<usize>,
    pub delaunay: Option<bool>,
    pub metropolis: Option<bool>,
    pub force: Option<f64>,
    pub temperature: Option<f64>,
    pub seed: Option<u64>,
    pub weight: Option<[f64; 2]>,
    pub post_delaunay: Option<bool>,
    pub problem: Option<ProblemKind>,
    pub phi0: Option<f64>,
    pub series_terms: Option<usize>,
    pub quadrature: Option<usize>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}

fn parse_weight(s: &str) -> Result<[f64; 2], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(format!("expected 'w1,w2', got '{s}'"));
    }
    let w1 = parts[0].parse().map_err(|_| format!("bad weight '{}'", parts[0]))?;
    let w2 = parts[1].parse().map_err(|_| format!("bad weight '{}'", parts[1]))?;
    Ok([w1, w2])
}

#[derive(Debug, Args, Default)]
pub struct MeshArgs {
    /// Domain shape
    #[arg(long, value_enum)]
    pub shape: Option<Shape>,
    /// Number of sides of a regular polygon [default: 4]
    #[arg(long)]
    pub sides: Option<usize>,
    /// Circumradius of a regular polygon [default: 1]
    #[arg(long)]
    pub radius: Option<f64>,
    /// File with one `x y` vertex per line, counterclockwise
    #[arg(long)]
    pub vertices_file: Option<PathBuf>,
    /// Element size
    #[arg(long)]
    pub h: Option<f64>,
    /// Maximum number of divisions [default: 50]
    #[arg(long)]
    pub divisions: Option<usize>,
    #[arg(long)]
    pub no_delaunay: bool,
    #[arg(long)]
    pub no_metropolis: bool,
    /// Spring gain F [default: 0.1]
    #[arg(long)]
    pub force: Option<f64>,
    /// Metropolis temperature T [default: 0.01]
    #[arg(long)]
    pub temperature: Option<f64>,
    /// Random seed; falls back to METROMESH_SEED, then 0
    #[arg(long)]
    pub seed: Option<u64>,
    /// Center weights `w1,w2` for non-convex domains
    #[arg(long, value_parser = parse_weight)]
    pub weight: Option<[f64; 2]>,
    /// Extra Delaunay pass after the last Metropolis run
    #[arg(long)]
    pub post_delaunay: bool,
}

#[derive(Debug, Args, Default)]
pub struct ProblemArgs {
    /// Benchmark problem
    #[arg(long, value_enum)]
    pub problem: Option<ProblemKind>,
    /// Boundary value on x = ±1 for rect-laplace [default: 1]
    #[arg(long)]
    pub phi0: Option<f64>,
    /// Highest odd term of the reference series [default: 200]
    #[arg(long)]
    pub series_terms: Option<usize>,
}

/// Fully resolved mesh settings.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshSettings {
    pub shape: Shape,
    pub sides: usize,
    pub radius: f64,
    pub vertices_file: Option<PathBuf>,
    pub h: f64,
    pub weight: Option<(f64, f64)>,
    pub options: PipelineOptions,
}

fn seed_from_env() -> Result<Option<u64>> {
    match std::env::var(SEED_ENV) {
        Ok(v) => Ok(Some(
            v.trim()
                .parse()
                .with_context(|| format!("{SEED_ENV}='{v}' is not a u64"))?,
        )),
        Err(_) => Ok(None),
    }
}

impl MeshArgs {
    pub fn resolve(&self, file: &FileConfig) -> Result<MeshSettings> {
        let shape = self.shape.or(file.shape).unwrap_or(Shape::RegularPolygon);
        let Some(h) = self.h.or(file.h) else {
            bail!("--h is required (flag or config key 'h')");
        };
        if !(h > 0.0 && h.is_finite()) {
            bail!("h must be positive, got {h}");
        }
        let vertices_file = self.vertices_file.clone().or_else(|| file.vertices_file.clone());
        if shape == Shape::ExplicitVertices && vertices_file.is_none() {
            bail!("--shape explicit-vertices needs --vertices-file");
        }
        let delaunay = !self.no_delaunay && file.delaunay.unwrap_or(true);
        let metropolis = !self.no_metropolis && file.metropolis.unwrap_or(true);
        let seed = match self.seed.or(file.seed) {
            Some(s) => s,
            None => seed_from_env()?.unwrap_or(0),
        };
        let defaults = MetropolisParams::default();
        let params = MetropolisParams {
            force: self.force.or(file.force).unwrap_or(defaults.force),
            temperature: self.temperature.or(file.temperature).unwrap_or(defaults.temperature),
            seed,
            ..defaults
        };
        params.validate()?;
        let options = PipelineOptions {
            divisions_cap: self
                .divisions
                .or(file.divisions)
                .unwrap_or(PipelineOptions::default().divisions_cap),
            delaunay,
            metropolis: metropolis.then_some(params),
            post_delaunay: self.post_delaunay || file.post_delaunay.unwrap_or(false),
            ..PipelineOptions::default()
        };
        Ok(MeshSettings {
            shape,
            sides: self.sides.or(file.sides).unwrap_or(4),
            radius: self.radius.or(file.radius).unwrap_or(1.0),
            vertices_file,
            h,
            weight: self.weight.or(file.weight).map(|[a, b]| (a, b)),
            options,
        })
    }
}

impl ProblemArgs {
    pub fn resolve(&self, file: &FileConfig) -> Result<Problem> {
        let Some(kind) = self.problem.or(file.problem) else {
            bail!("--problem is required (flag or config key 'problem')");
        };
        Ok(match kind {
            ProblemKind::RectLaplace => {
                let spec = RectLaplaceSpec {
                    phi0: self.phi0.or(file.phi0).unwrap_or(1.0),
                    series_terms: self.series_terms.or(file.series_terms).unwrap_or(200),
                    ..RectLaplaceSpec::default()
                };
                spec.validate()?;
                Problem::RectLaplace(spec)
            }
            ProblemKind::CirclePoisson => Problem::CirclePoisson(CirclePoissonSpec::default()),
        })
    }
}

/// Reads `x y` (or `x,y`) pairs, skipping blank lines and `#` comments.
pub fn read_vertices(path: &Path) -> Result<Vec<metromesh_core::Point2>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let nums: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .collect();
        if nums.len() != 2 {
            bail!("{}:{}: expected two coordinates", path.display(), i + 1);
        }
        let x: f64 = nums[0]
            .parse()
            .with_context(|| format!("{}:{}", path.display(), i + 1))?;
        let y: f64 = nums[1]
            .parse()
            .with_context(|| format!("{}:{}", path.display(), i + 1))?;
        out.push(metromesh_core::Point2::new(x, y));
    }
    Ok(out)
}
