use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ballnls(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ballnls"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("BALLNLS_THREADS")
        .output()
        .expect("binary runs")
}

fn summary(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap()
}

fn csv(dir: &Path, file: &str) -> Vec<Vec<String>> {
    std::fs::read_to_string(dir.join(file))
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn zeros_table_and_scaled_residuals() {
    let dir = tempfile::tempdir().unwrap();
    let o = ballnls(&["zeros", "--nu-max", "200"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv(dir.path(), "zeros.csv");
    assert_eq!(
        rows[0],
        ["nu", "zero", "prediction", "residual", "scaled_residual"]
    );
    assert_eq!(rows.len(), 201);
    let first: f64 = rows[1][1].parse().unwrap();
    assert!((first - std::f64::consts::PI).abs() < 1e-12);
    for r in &rows[1..] {
        let nu: f64 = r[0].parse().unwrap();
        if nu >= 10.0 {
            assert!(r[4].parse::<f64>().unwrap().abs() < 0.01, "{r:?}");
        }
    }
    let s = summary(dir.path());
    assert_eq!(s["experiment"], "zeros");
    assert!(s["results"]["alpha_error"].as_f64().unwrap() < 1e-3);
}

#[test]
fn gamma_profile_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let o = ballnls(
        &["lattice", "--mode", "gamma", "--n", "500", "--delta", "1.2"],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv(dir.path(), "lattice_profile.csv");
    assert_eq!(rows[0], ["tau", "count"]);
    let s = summary(dir.path());
    let r = &s["results"];
    assert_eq!(r["max_count"], 4);
    let ratio = r["exponent_ratio"].as_f64().unwrap();
    assert!((ratio - 4.0 / 500f64.powf(2.0 / 3.0)).abs() < 1e-15);
    let listed: u64 = rows[1..].iter().map(|r| r[1].parse::<u64>().unwrap()).sum();
    assert_eq!(listed, r["total"].as_u64().unwrap());
    assert_eq!(s["effective_config"]["params"]["delta"], 1.2);
    assert_eq!(s["outputs"], serde_json::json!(["lattice_profile.csv"]));
}

#[test]
fn simulation_trajectory_and_drifts() {
    let dir = tempfile::tempdir().unwrap();
    let o = ballnls(
        &["simulate", "--k", "64", "--dt", "1e-3", "--t-final", "1"],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv(dir.path(), "trajectory.csv");
    assert_eq!(
        rows[0],
        ["time", "mass", "energy", "h1_norm", "abs_c1", "abs_c2", "abs_c3", "abs_c4"]
    );
    assert_eq!(rows.len(), 1002);
    assert_eq!(rows[1001][0].parse::<f64>().unwrap(), 1.0);
    let r = &summary(dir.path())["results"];
    assert!(r["mass_drift"].as_f64().unwrap() < 1e-10);
    assert!(r["energy_drift"].as_f64().unwrap() < 1e-5);
    assert_eq!(r["steps"], 1000);
}

#[test]
fn identical_runs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = [
        "bilinear",
        "--kind",
        "flow",
        "--trials",
        "3",
        "--seed",
        "7",
        "--sizes",
        "16,24,32,48",
    ];
    assert_eq!(code(&ballnls(&args, a.path())), 0);
    assert_eq!(code(&ballnls(&args, b.path())), 0);
    for f in ["bilinear_flow.csv", "bilinear_flow_random.csv"] {
        assert_eq!(
            std::fs::read(a.path().join(f)).unwrap(),
            std::fs::read(b.path().join(f)).unwrap()
        );
    }
}

#[test]
fn different_seeds_change_random_trials() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let base = [
        "bilinear",
        "--kind",
        "flow",
        "--trials",
        "2",
        "--sizes",
        "16,24,32,48",
        "--seed",
    ];
    assert_eq!(code(&ballnls(&[&base[..], &["1"]].concat(), a.path())), 0);
    assert_eq!(code(&ballnls(&[&base[..], &["2"]].concat(), b.path())), 0);
    let f = "bilinear_flow_random.csv";
    assert_ne!(
        std::fs::read(a.path().join(f)).unwrap(),
        std::fs::read(b.path().join(f)).unwrap()
    );
}

#[test]
fn monte_carlo_runs_record_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let o = ballnls(
        &[
            "bilinear",
            "--kind",
            "flow",
            "--trials",
            "1",
            "--sizes",
            "16,24,32,48",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 0);
    assert!(summary(dir.path())["effective_config"]["params"]["seed"].is_u64());
}

#[test]
fn config_document_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"experiment": "zeros", "params": {"nu_max": 50, "fit_min": 5}}"#,
    )
    .unwrap();
    let out = dir.path().join("out");
    let o = ballnls(
        &["zeros", "--config", cfg.to_str().unwrap(), "--nu-max", "20"],
        &out,
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let p = &summary(&out)["effective_config"]["params"];
    assert_eq!(
        (p["nu_max"].as_f64(), p["fit_min"].as_f64()),
        (Some(20.0), Some(5.0))
    );
    assert_eq!(csv(&out, "zeros.csv").len(), 21);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&ballnls(&["frobnicate"], d)), 64);
    assert_eq!(code(&ballnls(&["zeros", "--no-such-flag"], d)), 64);
    assert_eq!(code(&ballnls(&["lattice", "--delta", "1.3"], d)), 2);
    assert_eq!(code(&ballnls(&["zeros", "--nu-max", "x"], d)), 2);
    assert_eq!(
        code(&ballnls(&["simulate", "--k", "16", "--grid", "10"], d)),
        3
    );
    assert_eq!(code(&ballnls(&["report-zn1"], &d.join("empty"))), 2);

    let bad = d.join("bad.json");
    std::fs::write(&bad, "{\"experiment\": \"zeros\", ").unwrap();
    assert_eq!(
        code(&ballnls(&["zeros", "--config", bad.to_str().unwrap()], d)),
        2
    );
    let other = d.join("other.json");
    std::fs::write(&other, r#"{"experiment": "lattice"}"#).unwrap();
    assert_eq!(
        code(&ballnls(&["zeros", "--config", other.to_str().unwrap()], d)),
        2
    );
}

#[test]
fn thread_variable_is_validated() {
    let dir = tempfile::tempdir().unwrap();
    let run = |v: &str| {
        Command::new(env!("CARGO_BIN_EXE_ballnls"))
            .args(["zeros", "--nu-max", "5", "--out"])
            .arg(dir.path())
            .env("BALLNLS_THREADS", v)
            .status()
            .unwrap()
            .code()
    };
    assert_eq!(run("2"), Some(0));
    assert_eq!(run("zero"), Some(2));
}

#[test]
fn sweeps_feed_the_exponent_report() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let sweep = [
        "lattice",
        "--mode",
        "gamma",
        "--n",
        "250",
        "--sizes",
        "250,500,1000,2000",
    ];
    assert_eq!(code(&ballnls(&sweep, d)), 0);
    assert_eq!(csv(d, "lattice_sweep.csv")[0], ["n", "max_count", "ratio"]);
    assert_eq!(code(&ballnls(&["bilinear", "--kind", "bessel"], d)), 0);
    let o = ballnls(&["report-zn1"], d);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv(d, "zn1.csv");
    assert_eq!(rows[0], ["component", "exponent", "half_width"]);
    let names: Vec<&str> = rows[1..].iter().map(|r| r[0].as_str()).collect();
    assert_eq!(names, ["gamma", "bessel", "cited", "total", "half_total"]);
    let r = &summary(d)["results"];
    let total =
        r["gamma_exponent"].as_f64().unwrap() + r["bessel_exponent"].as_f64().unwrap() + 0.5;
    assert!((r["total"].as_f64().unwrap() - total).abs() < 1e-15);

    let z = ballnls(&["report-zn1", "--bessel-mode", "zeroed"], d);
    assert_eq!(code(&z), 0);
    assert_eq!(summary(d)["results"]["bessel_exponent"], 0.0);
}
