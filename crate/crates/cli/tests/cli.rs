use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn metromesh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_metromesh"))
        .args(args)
        .env_remove("METROMESH_SEED")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = metromesh(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn field(summary: &str, key: &str) -> f64 {
    summary
        .split_whitespace()
        .find_map(|kv| kv.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no {key} in {summary}"))
        .parse()
        .unwrap()
}

#[test]
fn plain_square_has_512_elements() {
    let dir = TempDir::new().unwrap();
    let mesh = path(&dir, "square.mesh");
    let out = ok(&[
        "generate",
        "--shape",
        "regular-polygon",
        "--sides",
        "4",
        "--h",
        "0.1",
        "--no-delaunay",
        "--no-metropolis",
        "--out",
        s(&mesh),
    ]);
    assert_eq!(field(&out, "n_elements"), 512.0);
    assert!((field(&out, "S_N") - 0.902).abs() < 0.01);
    assert!(fs::read_to_string(&mesh).unwrap().starts_with("meshfmt 1\n"));
}

#[test]
fn mesh_goes_to_stdout_without_out() {
    let out = metromesh(&["generate", "--sides", "3", "--h", "0.5", "--no-metropolis"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("meshfmt 1\n"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("n_elements="));
}

#[test]
fn notch_without_weight_fails_center_placement() {
    let dir = TempDir::new().unwrap();
    let verts = path(&dir, "notch.txt");
    fs::write(
        &verts,
        "# reflex vertex at (0.15, 0.05)\n-1 -0.9\n1 -0.9\n1 0.9\n0.15 0.05\n-1 0.9\n",
    )
    .unwrap();
    let out = metromesh(&[
        "generate",
        "--shape",
        "explicit-vertices",
        "--vertices-file",
        s(&verts),
        "--h",
        "0.2",
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("center placement"));
}

#[test]
fn circle_pipeline_meets_tolerance() {
    let dir = TempDir::new().unwrap();
    let (mesh, sol, err) = (path(&dir, "c.mesh"), path(&dir, "c.csv"), path(&dir, "err.csv"));
    ok(&["generate", "--shape", "circle16", "--h", "0.1", "--out", s(&mesh)]);
    let solve = ok(&[
        "solve",
        "--mesh",
        s(&mesh),
        "--problem",
        "circle-poisson",
        "--out",
        s(&sol),
    ]);
    assert!(field(&solve, "relative_residual") <= 1e-10);
    let summary = ok(&[
        "validate",
        "--mesh",
        s(&mesh),
        "--solution",
        s(&sol),
        "--problem",
        "circle-poisson",
        "--max-error",
        "0.012",
        "--out",
        s(&err),
    ]);
    assert!(summary.starts_with("max|dphi| = "));
    assert!(fs::read_to_string(&err)
        .unwrap()
        .starts_with("node_id,x,y,numeric,reference,abs_error,excluded\n"));
    let strict = metromesh(&[
        "validate",
        "--mesh",
        s(&mesh),
        "--solution",
        s(&sol),
        "--problem",
        "circle-poisson",
        "--max-error",
        "1e-6",
    ]);
    assert!(!strict.status.success());
}

#[test]
fn rectangle_pipeline_meets_tolerance() {
    let dir = TempDir::new().unwrap();
    let (mesh, sol) = (path(&dir, "r.mesh"), path(&dir, "r.csv"));
    ok(&["generate", "--shape", "rectangle", "--h", "0.1", "--out", s(&mesh)]);
    ok(&[
        "solve",
        "--mesh",
        s(&mesh),
        "--problem",
        "rect-laplace",
        "--out",
        s(&sol),
    ]);
    ok(&[
        "validate",
        "--mesh",
        s(&mesh),
        "--solution",
        s(&sol),
        "--problem",
        "rect-laplace",
        "--max-error",
        "0.15",
    ]);
}

#[test]
fn zero_data_gives_zero_solution() {
    let dir = TempDir::new().unwrap();
    let mesh = path(&dir, "r.mesh");
    ok(&["generate", "--shape", "rectangle", "--h", "0.3", "--out", s(&mesh)]);
    let csv = ok(&["solve", "--mesh", s(&mesh), "--problem", "rect-laplace", "--phi0", "0"]);
    for line in csv.lines().skip(1) {
        let phi: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert_eq!(phi, 0.0);
    }
}

#[test]
fn mismatched_solution_is_rejected() {
    let dir = TempDir::new().unwrap();
    let (a, b, sol) = (path(&dir, "a.mesh"), path(&dir, "b.mesh"), path(&dir, "a.csv"));
    ok(&["generate", "--shape", "circle16", "--h", "0.3", "--out", s(&a)]);
    ok(&["generate", "--shape", "circle16", "--h", "0.15", "--out", s(&b)]);
    ok(&[
        "solve",
        "--mesh",
        s(&a),
        "--problem",
        "circle-poisson",
        "--out",
        s(&sol),
    ]);
    let out = metromesh(&[
        "validate",
        "--mesh",
        s(&b),
        "--solution",
        s(&sol),
        "--problem",
        "circle-poisson",
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("nodes"));
}

#[test]
fn render_is_well_formed_and_deterministic() {
    let dir = TempDir::new().unwrap();
    let (mesh, sol) = (path(&dir, "c.mesh"), path(&dir, "c.csv"));
    ok(&["generate", "--shape", "circle16", "--h", "0.2", "--out", s(&mesh)]);
    ok(&[
        "solve",
        "--mesh",
        s(&mesh),
        "--problem",
        "circle-poisson",
        "--out",
        s(&sol),
    ]);
    let n_tri: usize = fs::read_to_string(&mesh)
        .unwrap()
        .lines()
        .find_map(|l| l.strip_prefix("triangles "))
        .unwrap()
        .parse()
        .unwrap();

    let wire = ok(&["render", "--mesh", s(&mesh)]);
    let doc = roxmltree::Document::parse(&wire).unwrap();
    assert_eq!(doc.descendants().filter(|n| n.has_tag_name("polygon")).count(), n_tri);
    assert!(doc.descendants().all(|n| n.attribute("id") != Some("legend")));

    for problem in [None, Some("circle-poisson")] {
        let mut args = vec!["render", "--mesh", s(&mesh), "--solution", s(&sol)];
        if let Some(p) = problem {
            args.extend(["--problem", p]);
        }
        let a = ok(&args);
        let b = ok(&args);
        assert_eq!(a, b);
        let doc = roxmltree::Document::parse(&a).unwrap();
        assert_eq!(doc.descendants().filter(|n| n.has_tag_name("polygon")).count(), n_tri);
        let legend = doc.descendants().find(|n| n.attribute("id") == Some("legend")).unwrap();
        assert!(legend.has_tag_name("g"));
    }
}

#[test]
fn end_to_end_is_byte_reproducible_with_env_seed() {
    let run = |dir: &TempDir| {
        let (mesh, sol) = (path(dir, "m"), path(dir, "s"));
        let gen = Command::new(env!("CARGO_BIN_EXE_metromesh"))
            .args([
                "generate",
                "--shape",
                "regular-polygon",
                "--sides",
                "5",
                "--h",
                "0.2",
                "--out",
                s(&mesh),
            ])
            .env("METROMESH_SEED", "42")
            .output()
            .unwrap();
        assert!(gen.status.success());
        ok(&[
            "solve",
            "--mesh",
            s(&mesh),
            "--problem",
            "circle-poisson",
            "--out",
            s(&sol),
        ]);
        (fs::read(&mesh).unwrap(), fs::read(&sol).unwrap())
    };
    let (d1, d2) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    assert_eq!(run(&d1), run(&d2));
}

#[test]
fn flags_override_config_file() {
    let dir = TempDir::new().unwrap();
    let cfg = path(&dir, "run.toml");
    fs::write(
        &cfg,
        "shape = \"regular-polygon\"\nsides = 4\nh = 0.5\ndelaunay = false\nmetropolis = false\n",
    )
    .unwrap();
    let from_file = ok(&["generate", "--config", s(&cfg), "--out", s(&path(&dir, "a"))]);
    let overridden = ok(&[
        "generate",
        "--config",
        s(&cfg),
        "--h",
        "0.1",
        "--out",
        s(&path(&dir, "b")),
    ]);
    assert!(field(&overridden, "n_elements") > field(&from_file, "n_elements"));
    assert_eq!(field(&overridden, "n_elements"), 512.0);

    fs::write(&cfg, "hh = 1\n").unwrap();
    assert!(!metromesh(&["generate", "--config", s(&cfg), "--h", "0.1"])
        .status
        .success());
}
