use std::path::Path;
use std::process::{Command, Output};

use hgda_cli::output::read_csv;

fn hgda(dir: &Path, config: &str, args: &[&str]) -> Output {
    let path = dir.join("config.toml");
    std::fs::write(&path, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_hgda"))
        .args(args)
        .arg("--config")
        .arg(&path)
        .arg("--out")
        .arg(dir.join("out"))
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn value(out: &str, key: &str) -> String {
    out.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}: ")))
        .unwrap_or_else(|| panic!("no {key} in {out}"))
        .to_string()
}

const SCALAR: &str = "[game]\nmatrix = [[1.0]]\n";

#[test]
fn analyze_at_the_optimal_rate() {
    let dir = tempfile::tempdir().unwrap();
    let o = hgda(dir.path(), &format!("{SCALAR}[eta]\nvalue = 0.5\n"), &["analyze"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(value(&out, "verdict"), "stable");
    assert_eq!(value(&out, "spectral_radius"), "0.707107");
    assert_eq!(value(&out, "eta_opt"), "0.500000");
    let roots = read_csv(&dir.path().join("out/roots.csv")).unwrap();
    assert_eq!(roots.header, ["re", "im", "modulus", "source"]);
    assert_eq!(roots.rows.len(), 4);
    for m in roots.floats("modulus").unwrap() {
        assert!((m.unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-7);
    }
}

#[test]
fn analyze_past_the_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let o = hgda(dir.path(), &format!("{SCALAR}[eta]\nvalue = 0.6\n"), &["analyze"]);
    assert!(o.status.success());
    assert_eq!(value(&stdout(&o), "verdict"), "unstable");
}

#[test]
fn singular_game_exits_with_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = hgda(dir.path(), "[game]\nmatrix = [[1.0, 1.0], [1.0, 1.0]]\n[eta]\nvalue = 0.5\n", &["analyze"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unsupported: singular matrix"), "{}", stderr(&o));
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = hgda(dir.path(), "[game]\nmatrix = [[1.0]]\n[eta]\nsweep = { lo = 1.0, hi = 0.5, count = 3 }\n", &["sweep"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    let o = hgda(dir.path(), SCALAR, &["analyze", "--format", "png"]);
    assert_eq!(o.status.code(), Some(2));

    let o = hgda(dir.path(), "[game]\nrandom = { dim = 3 }\n[eta]\nvalue = 0.1\n", &["analyze"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("seed"), "{}", stderr(&o));

    let o = Command::new(env!("CARGO_BIN_EXE_hgda")).arg("analyze").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn uncertified_scheme_needs_the_bypass() {
    let dir = tempfile::tempdir().unwrap();
    let scheme = "[scheme]\np = [0.5, 0.4]\nq = [1.0, 0.0]\n[eta]\nvalue = 0.1\n";
    let o = hgda(dir.path(), &format!("{SCALAR}{scheme}"), &["analyze"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("S(1)"));

    let scheme = "[scheme]\np = [0.5, 0.4]\nq = [1.0, 0.0]\nallow_uncertified = true\n[eta]\nvalue = 0.1\n";
    let o = hgda(dir.path(), &format!("{SCALAR}{scheme}"), &["analyze"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(value(&stdout(&o), "note").contains("not certified"));
}

#[test]
fn sweep_finds_optimum_and_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let o = hgda(
        dir.path(),
        &format!("{SCALAR}[eta]\nsweep = {{ lo = 0.05, hi = 0.7, count = 66 }}\n"),
        &["sweep", "--threads", "3"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let data = read_csv(&dir.path().join("out/sweep.csv")).unwrap();
    assert_eq!(data.header, ["eta", "verdict", "predicted_radius", "empirical_rate"]);
    let etas: Vec<f64> = data.floats("eta").unwrap().into_iter().map(Option::unwrap).collect();
    assert!(etas.windows(2).all(|w| w[0] < w[1]));
    let radii: Vec<f64> = data.floats("predicted_radius").unwrap().into_iter().map(Option::unwrap).collect();
    let best = (0..radii.len()).min_by(|&a, &b| radii[a].total_cmp(&radii[b])).unwrap();
    assert!((etas[best] - 0.5).abs() <= 0.01 + 1e-12);

    let verdict = data.column("verdict").unwrap();
    let rate = data.floats("empirical_rate").unwrap();
    for (i, row) in data.rows.iter().enumerate() {
        let stable = etas[i] < 1.0 / 3f64.sqrt();
        assert_eq!(row[verdict], if stable { "stable" } else { "unstable" }, "eta {}", etas[i]);
        assert_eq!(rate[i].is_some(), stable);
    }
}

#[test]
fn simulate_spiral_into_the_origin() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = format!("{SCALAR}[eta]\nvalue = 0.5\n[sim]\nsteps = 300\ninit_x = [1.0]\ninit_y = [1.0]\n");
    let o = hgda(dir.path(), &cfg, &["simulate", "--format", "csv+svg"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let data = read_csv(&dir.path().join("out/trajectory.csv")).unwrap();
    assert_eq!(data.header, ["t", "x1", "y1", "norm"]);
    assert_eq!(data.rows.len(), 301);
    let norm = data.floats("norm").unwrap();
    assert!(norm[300].unwrap() < 1e-20);
    let svg = std::fs::read_to_string(dir.path().join("out/phase.svg")).unwrap();
    assert!(svg.contains("<polyline") && svg.contains("<circle"));
}

#[test]
fn simulate_outward_spiral() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = format!("{SCALAR}[eta]\nvalue = 0.58\n[sim]\nsteps = 5000\n");
    let o = hgda(dir.path(), &cfg, &["simulate"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let at: usize = value(&stdout(&o), "diverged_at").parse().unwrap();
    assert!(at > 300 && at < 5000);
}

#[test]
fn zero_start_stays_at_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = format!("{SCALAR}[eta]\nvalue = 0.3\n[sim]\nsteps = 50\ninit_x = [0.0]\ninit_y = [0.0]\n");
    let o = hgda(dir.path(), &cfg, &["simulate"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let data = read_csv(&dir.path().join("out/trajectory.csv")).unwrap();
    for col in ["x1", "y1", "norm"] {
        assert!(data.floats(col).unwrap().iter().all(|v| *v == Some(0.0)));
    }
}

#[test]
fn boundary_of_the_scalar_game() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = format!("{SCALAR}[boundary]\nlo = 0.1\nhi = 1.0\nmethods = [\"analytic\", \"simulation\"]\n");
    let o = hgda(dir.path(), &cfg, &["boundary"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let data = read_csv(&dir.path().join("out/boundary.csv")).unwrap();
    for v in data.floats("eta_star").unwrap() {
        assert!((v.unwrap() - 1.0 / 3f64.sqrt()).abs() < 1e-4);
    }
}

#[test]
fn seed_flag_selects_the_random_game() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "[game]\nrandom = { dim = 3, cond_guard = 10.0 }\n[eta]\nvalue = 0.2\n";
    let a = stdout(&hgda(dir.path(), cfg, &["analyze", "--seed", "1"]));
    let b = stdout(&hgda(dir.path(), cfg, &["analyze", "--seed", "1"]));
    let c = stdout(&hgda(dir.path(), cfg, &["analyze", "--seed", "2"]));
    assert_eq!(a, b);
    assert_ne!(value(&a, "eta_threshold"), value(&c, "eta_threshold"));
}

#[test]
fn sweep_output_ignores_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "[game]\nrandom = { dim = 3, cond_guard = 10.0 }\n[eta]\nsweep = { lo = -0.3, hi = 0.3, count = 24 }\n[sim]\nsteps = 200\n";
    let mut outputs = Vec::new();
    for threads in ["1", "3", "8"] {
        let o = hgda(dir.path(), cfg, &["sweep", "--seed", "11", "--threads", threads]);
        assert!(o.status.success(), "{}", stderr(&o));
        outputs.push(std::fs::read(dir.path().join("out/sweep.csv")).unwrap());
    }
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
}
