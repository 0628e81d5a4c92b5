mod config;
mod svg;

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use metromesh_core::fem::{read_solution, solve_problem, write_solution, QuadratureRule};
use metromesh_core::mesh::io::{read_mesh, write_mesh};
use metromesh_core::mesh::{mesh_init, mesh_init_explicit, quality};
use metromesh_core::pipeline::generate;
use metromesh_core::problems::RectLaplaceSpec;
use metromesh_core::Mesh;

use config::{read_vertices, FileConfig, MeshArgs, MeshSettings, ProblemArgs, Shape};

/// Metropolis-optimized triangular meshes and a linear FEM Poisson solver.
#[derive(Debug, Parser)]
#[command(name = "metromesh", version)]
struct Cli {
    /// TOML file with default settings; flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a mesh and print its statistics
    Generate {
        #[command(flatten)]
        mesh: MeshArgs,
        /// Mesh file to write [default: standard output]
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve a benchmark problem on a mesh and write `node_id,x,y,phi`
    Solve {
        #[command(flatten)]
        input: MeshInput,
        #[command(flatten)]
        problem: ProblemArgs,
        /// Gauss rule order, 1 or 3 [default: 3]
        #[arg(long)]
        quadrature: Option<usize>,
        /// Solution CSV to write [default: standard output]
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare a solution with the problem's analytical reference
    Validate {
        #[command(flatten)]
        input: MeshInput,
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long)]
        solution: PathBuf,
        /// Exit with an error when max|dphi| exceeds this value
        #[arg(long)]
        max_error: Option<f64>,
        /// Nodewise error CSV to write
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a mesh, optionally coloured by a solution or its error, as SVG
    Render {
        #[command(flatten)]
        input: MeshInput,
        #[arg(long)]
        solution: Option<PathBuf>,
        /// Colour by the error against this problem instead of the solution
        #[arg(long, value_enum)]
        problem: Option<config::ProblemKind>,
        /// SVG file to write [default: standard output]
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct MeshInput {
    /// Mesh file in `meshfmt 1` format
    #[arg(long)]
    mesh: PathBuf,
}

impl MeshInput {
    fn load(&self) -> Result<Mesh> {
        let text = fs::read_to_string(&self.mesh).with_context(|| format!("reading {}", self.mesh.display()))?;
        read_mesh(&text).with_context(|| format!("parsing {}", self.mesh.display()))
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

/// Prints a report line on stdout when data went to a file, else on stderr.
fn report(to_file: bool, line: &str) {
    if to_file {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

fn initial_mesh(settings: &MeshSettings) -> Result<Mesh> {
    let mesh = match settings.shape {
        Shape::RegularPolygon => mesh_init(settings.sides, settings.radius, settings.h)?,
        Shape::Circle16 => mesh_init(16, settings.radius, settings.h)?,
        Shape::Rectangle => mesh_init_explicit(RectLaplaceSpec::vertices(), settings.weight, settings.h)?,
        Shape::ExplicitVertices => {
            let path = settings.vertices_file.as_deref().expect("checked during resolution");
            mesh_init_explicit(read_vertices(path)?, settings.weight, settings.h)?
        }
    };
    Ok(mesh)
}

fn cmd_generate(file: &FileConfig, args: &MeshArgs, out: Option<&Path>) -> Result<()> {
    let settings = args.resolve(file)?;
    let initial = initial_mesh(&settings)?;
    let (mesh, pipeline) = generate(&initial, &settings.options)?;
    emit(out, &write_mesh(&mesh))?;
    let q = quality(&mesh);
    report(
        out.is_some(),
        &format!(
            "n_points={} n_elements={} S_N={:.6} S_var={:.6} divisions={}",
            q.n_points, q.n_elements, q.s_n_mean, q.s_var, pipeline.divisions
        ),
    );
    Ok(())
}

fn cmd_solve(
    file: &FileConfig,
    input: &MeshInput,
    problem: &ProblemArgs,
    order: Option<usize>,
    out: Option<&Path>,
) -> Result<()> {
    let mesh = input.load()?;
    let problem = problem.resolve(file)?;
    let rule = QuadratureRule::new(order.or(file.quadrature).unwrap_or(3))?;
    let solution = solve_problem(&mesh, &problem.fields(), &rule)?;
    emit(out, &write_solution(&mesh, &solution.phi)?)?;
    report(
        out.is_some(),
        &format!(
            "problem={} nodes={} iterations={} relative_residual={:.3e}",
            problem.name(),
            mesh.n_points(),
            solution.iterations,
            solution.relative_residual
        ),
    );
    Ok(())
}

fn load_solution(path: &Path, mesh: &Mesh) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let phi = read_solution(&text).with_context(|| format!("parsing {}", path.display()))?;
    if phi.len() != mesh.n_points() {
        bail!(
            "solution has {} values but the mesh has {} nodes",
            phi.len(),
            mesh.n_points()
        );
    }
    Ok(phi)
}

fn cmd_validate(
    file: &FileConfig,
    input: &MeshInput,
    problem: &ProblemArgs,
    solution: &Path,
    max_error: Option<f64>,
    out: Option<&Path>,
) -> Result<()> {
    let mesh = input.load()?;
    let problem = problem.resolve(file)?;
    let phi = load_solution(solution, &mesh)?;
    let errors = problem.compare(&mesh, &phi)?;
    if let Some(path) = out {
        emit(Some(path), &errors.to_csv(&mesh, &phi))?;
    }
    println!("{}", errors.summary());
    if let Some(limit) = max_error {
        if errors.max_abs_error > limit {
            bail!("max|dphi| = {:.6e} exceeds {limit}", errors.max_abs_error);
        }
    }
    Ok(())
}

fn cmd_render(
    file: &FileConfig,
    input: &MeshInput,
    solution: Option<&Path>,
    problem: Option<config::ProblemKind>,
    out: Option<&Path>,
) -> Result<()> {
    let mesh = input.load()?;
    let text = match solution {
        None => {
            if problem.is_some() {
                bail!("--problem needs --solution");
            }
            svg::render(&mesh, None)
        }
        Some(path) => {
            let phi = load_solution(path, &mesh)?;
            match problem {
                None => svg::render(
                    &mesh,
                    Some(svg::Field {
                        label: "phi",
                        values: &phi,
                    }),
                ),
                Some(kind) => {
                    let args = ProblemArgs {
                        problem: Some(kind),
                        ..ProblemArgs::default()
                    };
                    let errors = args.resolve(file)?.compare(&mesh, &phi)?;
                    svg::render(
                        &mesh,
                        Some(svg::Field {
                            label: "|dphi|",
                            values: &errors.nodewise_errors,
                        }),
                    )
                }
            }
        }
    };
    emit(out, &text)
}

fn run(cli: &Cli) -> Result<()> {
    let file = FileConfig::load(cli.config.as_deref())?;
    match &cli.command {
        Command::Generate { mesh, out } => cmd_generate(&file, mesh, out.as_deref()),
        Command::Solve {
            input,
            problem,
            quadrature,
            out,
        } => cmd_solve(&file, input, problem, *quadrature, out.as_deref()),
        Command::Validate {
            input,
            problem,
            solution,
            max_error,
            out,
        } => cmd_validate(&file, input, problem, solution, *max_error, out.as_deref()),
        Command::Render {
            input,
            solution,
            problem,
            out,
        } => cmd_render(&file, input, solution.as_deref(), *problem, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
