use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_wiener-chaos"))
}

fn scenario(name: &str) -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "scenarios", &format!("{name}.json")].iter().collect()
}

fn run(sub: &str, config: &Path, out: &Path, extra: &[&str]) -> Output {
    bin()
        .arg(sub)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .args(extra)
        .output()
        .expect("binary runs")
}

fn edited(name: &str, dir: &Path, edit: impl FnOnce(&mut serde_json::Map<String, Value>)) -> PathBuf {
    let text = std::fs::read_to_string(scenario(name)).unwrap();
    let mut v: Value = serde_json::from_str(&text).unwrap();
    edit(v.as_object_mut().unwrap());
    let path = dir.join(format!("{name}_edited.json"));
    std::fs::write(&path, v.to_string()).unwrap();
    path
}

#[test]
fn solve_writes_the_wick_ode_mean() {
    let dir = tempfile::tempdir().unwrap();
    let out = run("solve", &scenario("wick_ode"), dir.path(), &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stats = std::fs::read_to_string(dir.path().join("stats.csv")).unwrap();
    let mut lines = stats.lines();
    assert_eq!(lines.next(), Some("t,mean_norm,second_moment_norm,weighted_norm"));
    let mut rows = 0;
    for line in lines {
        let cols: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert!((cols[1] - cols[0].exp()).abs() <= 1e-6 * cols[0].exp(), "{line}");
        rows += 1;
    }
    assert!(rows > 2);
    assert!(!stats.contains('\r'));
    for file in ["coeffs.csv", "weights.csv"] {
        assert!(dir.path().join(file).exists(), "{file}");
    }
}

#[test]
fn boundary_regime_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let out = run("solve", &scenario("heat_sigma_sqrt2"), dir.path(), &["--order", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let summary = String::from_utf8_lossy(&out.stdout);
    assert!(summary.contains("regime=boundary"), "{summary}");
}

#[test]
fn missing_key_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = edited("wick_ode", dir.path(), |m| {
        m.remove("T");
    });
    let out = run("solve", &config, dir.path(), &[]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("T"), "{err}");
}

#[test]
fn oversized_box_hits_the_cap() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        "solve",
        &scenario("heat_time_white"),
        dir.path(),
        &["--order", "30", "--modes", "40"],
    );
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn coarse_time_grid_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let config = edited("wick_ode", dir.path(), |m| {
        m.insert("nt".into(), Value::from(8));
    });
    let out = run("verify", &config, dir.path(), &[]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stdout));
    let report = std::fs::read_to_string(dir.path().join("report.csv")).unwrap();
    assert!(report.contains("false"));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [a.path(), b.path()] {
        let out = run("solve", &scenario("kv_space_time"), dir, &["--seed", "11"]);
        assert_eq!(out.status.code(), Some(0));
        let out = run("kv", &scenario("kv_space_time"), dir, &["--levels", "3"]);
        assert_eq!(out.status.code(), Some(0));
    }
    for file in ["coeffs.csv", "stats.csv", "weights.csv", "kv.csv"] {
        let x = std::fs::read(a.path().join(file)).unwrap();
        let y = std::fs::read(b.path().join(file)).unwrap();
        assert_eq!(x, y, "{file}");
    }
}

#[test]
fn norms_sweep_covers_every_exponent() {
    let dir = tempfile::tempdir().unwrap();
    let out = run("norms", &scenario("wick_heat_gradient"), dir.path(), &["--order", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let norms = std::fs::read_to_string(dir.path().join("norms.csv")).unwrap();
    assert_eq!(norms.lines().count(), 7);
}
