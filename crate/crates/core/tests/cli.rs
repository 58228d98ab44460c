//! End-to-end checks of the `hpnewton` binary and its output files.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use hpnewton::cli::{parse_cli, RunConfig};

fn hpnewton(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hpnewton")).args(args).output().unwrap()
}

fn run_into(dir: &Path, args: &[&str]) -> Output {
    let out = dir.to_str().unwrap();
    let mut all = args.to_vec();
    all.extend(["--out", out]);
    let output = hpnewton(&all);
    assert!(
        output.status.success(),
        "{}",
        String::from_utf8_lossy(&output.stderr)
    );
    output
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn missing_problem_is_a_usage_error() {
    let output = hpnewton(&[]);
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("--problem"));
}

#[test]
fn help_succeeds() {
    let output = hpnewton(&["--help"]);
    assert!(output.status.success());
    assert!(String::from_utf8_lossy(&output.stdout).contains("--epsilon"));
}

#[test]
fn invalid_parameters_fail_without_panicking() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    for args in [
        vec!["--problem", "gl", "--epsilon", "-1"],
        vec!["--problem", "gl", "--epsilon", "0.01", "--dorfler", "1.5"],
        vec!["--problem", "nope"],
        vec!["--problem", "gl", "--guess", "spikes:x"],
    ] {
        let mut all = args.clone();
        all.extend(["--out", out]);
        let output = hpnewton(&all);
        assert!(!output.status.success(), "{args:?}");
        assert!(!String::from_utf8_lossy(&output.stderr).contains("panicked"), "{args:?}");
    }
}

#[test]
fn outputs_are_consistent() {
    let dir = tempfile::tempdir().unwrap();
    let output = run_into(
        dir.path(),
        &["--problem", "gl", "--epsilon", "1e-3", "--guess", "shock", "--tol", "1e-6", "--svg"],
    );
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("Converged"), "{stdout}");

    let log = read(dir.path(), "run.jsonl");
    let records: Vec<serde_json::Value> = log.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let estimator = read(dir.path(), "estimator.csv");
    assert_eq!(estimator.lines().count(), records.len() + 1);
    for (i, r) in records.iter().enumerate() {
        assert_eq!(r["step"].as_u64(), Some(i as u64));
        let dt = r["dt"].as_f64().unwrap();
        assert!(dt > 0.0 && dt <= 1.0);
        assert!(["newton", "refine", "stop"].contains(&r["action"].as_str().unwrap().to_lowercase().as_str()));
    }
    let last = records.last().unwrap();
    assert!(last["total"].as_f64().unwrap() <= 1e-6);

    let mesh = read(dir.path(), "mesh.csv");
    let rows: Vec<Vec<f64>> = mesh
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.first().unwrap()[1], 0.0);
    assert_eq!(rows.last().unwrap()[2], 1.0);
    for w in rows.windows(2) {
        assert_eq!(w[0][2], w[1][1], "elements must tile the domain");
    }
    let n_dof = rows.len() - 1 + rows.iter().map(|r| r[3] as usize - 1).sum::<usize>();
    assert_eq!(Some(n_dof as u64), last["n_dof"].as_u64());

    let solution = read(dir.path(), "solution.csv");
    let points: Vec<(f64, f64)> = solution
        .lines()
        .skip(1)
        .map(|l| {
            let (x, u) = l.split_once(',').unwrap();
            (x.parse().unwrap(), u.parse().unwrap())
        })
        .collect();
    assert_eq!(points.len() % rows.len(), 0);
    let per = points.len() / rows.len();
    assert_eq!(points.first().unwrap().1, 0.0);
    assert_eq!(points.last().unwrap().1, 0.0);
    for j in 1..rows.len() {
        let (end, start) = (points[j * per - 1], points[j * per]);
        assert_eq!(end.0, start.0);
        assert!((end.1 - start.1).abs() <= 1e-12, "continuity at {}", end.0);
    }
    assert!(points.windows(2).all(|w| w[0].0 <= w[1].0));

    for name in ["residual.svg", "mesh.svg"] {
        let svg = read(dir.path(), name);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"), "{name}");
    }
    assert_eq!(read(dir.path(), "mesh.svg").matches("<rect").count(), rows.len() + 1);
}

#[test]
fn config_file_reproduces_run() {
    let first = tempfile::tempdir().unwrap();
    run_into(
        first.path(),
        &["--problem", "bratu", "--guess", "bump", "--elements", "6", "--degree", "2"],
    );
    let second = tempfile::tempdir().unwrap();
    let config = first.path().join("config.json");
    run_into(second.path(), &["--config", config.to_str().unwrap()]);
    for name in ["run.jsonl", "mesh.csv", "solution.csv", "estimator.csv"] {
        assert_eq!(read(first.path(), name), read(second.path(), name), "{name}");
    }
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("config.json");
    let mut config = RunConfig::new(hpnewton::problem::Builtin::GinzburgLandau, 1e-3);
    config.elements = 7;
    config.save(&path).unwrap();
    let parsed = parse_cli(["hpnewton", "--config", path.to_str().unwrap(), "--degree", "3"]).unwrap();
    assert_eq!(parsed.elements, 7);
    assert_eq!(parsed.degree, 3);
    assert_eq!(parsed.epsilon, 1e-3);
}

#[test]
fn bratu_residual_plot_decreases() {
    let dir = tempfile::tempdir().unwrap();
    run_into(dir.path(), &["--problem", "bratu", "--svg"]);
    let svg = read(dir.path(), "residual.svg");
    let start = svg.find("points=\"").unwrap() + 8;
    let end = start + svg[start..].find('"').unwrap();
    let pts: Vec<(f64, f64)> = svg[start..end]
        .split_whitespace()
        .map(|p| {
            let (x, y) = p.split_once(',').unwrap();
            (x.parse().unwrap(), y.parse().unwrap())
        })
        .collect();
    assert!(pts.len() >= 2);
    assert!(pts.windows(2).all(|w| w[1].0 > w[0].0));
    // SVG y grows downwards, so a falling estimate has growing y
    assert!(pts.last().unwrap().1 > pts.first().unwrap().1);
}
