use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn nuv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nuv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "exit {:?}, stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn linear_walk_length() {
    let v = json(&nuv(&[
        "walk", "--model", "linear", "--n", "4", "--start", "0",
    ]));
    // (1 - 1/16) + (1 - 2/16) + (1 - 3/16)
    assert_eq!(v["total_length"].as_f64().unwrap(), 2.625);
    assert_eq!(v["order"], serde_json::json!([0, 1, 2, 3]));
}

#[test]
fn walk_tour_and_paths() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let v = json(&nuv(&[
        "walk",
        "--model",
        "linear",
        "--n",
        "4",
        "--start",
        "1",
        "--tour",
        "--keep-paths",
        "--out-dir",
        out,
    ]));
    assert!(v["step_paths"].is_array());
    let total = v["total_length"].as_f64().unwrap();
    let tour = v["tour_length"].as_f64().unwrap();
    assert!(tour > total);
    let steps = fs::read_to_string(dir.path().join("steps.csv")).unwrap();
    assert!(steps.starts_with("step,from,to,distance,cumulative\n"));
    assert_eq!(steps.lines().count(), 4);
}

#[test]
fn verify_prop1_on_small_grid_passes() {
    let v = json(&nuv(&[
        "verify-prop1",
        "--model",
        "grid",
        "--m",
        "3",
        "--seed",
        "1",
        "--start",
        "0",
    ]));
    for flag in [
        "pass",
        "pass_upper_cover_bound",
        "pass_length_bound",
        "pass_ball_steps",
    ] {
        assert_eq!(v[flag], Value::Bool(true), "{flag}");
    }
    assert_eq!(v["profile_method"], "exact");
}

#[test]
fn random_models_require_a_seed() {
    let out = nuv(&["walk", "--model", "mean_field", "--n", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--seed"));
    assert!(out.stdout.is_empty());
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["walk", "--model", "linear", "--n", "4", "--bogus"][..],
        &["walk", "--model", "grid", "--n", "4", "--seed", "1"],
        &["walk", "--model", "linear", "--n", "4", "--start", "9"],
        &["walk", "--model", "plane", "--n", "4"],
        &["cover", "--model", "linear", "--n", "4", "--radii", "-1"],
        &[
            "figure",
            "--model",
            "linear",
            "--n",
            "4",
            "--kind",
            "walk_polyline",
            "--out-dir",
            "x",
        ],
        &[],
    ] {
        let out = nuv(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn graph_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let v = json(&nuv(&[
        "gen",
        "--model",
        "square",
        "--n",
        "12",
        "--seed",
        "5",
        "--out-dir",
        out,
    ]));
    assert_eq!(v["n"], 12);
    let points = fs::read_to_string(dir.path().join("points.csv")).unwrap();
    assert_eq!(points.lines().count(), 13);
    let graph = dir.path().join("graph.txt");
    let from_model = json(&nuv(&[
        "walk", "--model", "square", "--n", "12", "--seed", "5", "--start", "3",
    ]));
    let from_file = json(&nuv(&[
        "walk",
        "--graph-file",
        graph.to_str().unwrap(),
        "--start",
        "3",
    ]));
    assert_eq!(from_model["order"], from_file["order"]);
    let (a, b) = (
        from_model["total_length"].as_f64().unwrap(),
        from_file["total_length"].as_f64().unwrap(),
    );
    assert!((a - b).abs() <= 1e-12 * a, "{a} vs {b}");
}

#[test]
fn malformed_graph_file_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.txt");
    fs::write(&p, "3 2\n0 1 1.0\n1 x 2.0\n").unwrap();
    let out = nuv(&["walk", "--graph-file", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn baseline_small_and_large() {
    let v = json(&nuv(&[
        "baseline", "--model", "linear", "--n", "5", "--start", "0",
    ]));
    let mst = v["mst_length"].as_f64().unwrap();
    // from an end the shortest covering walk is the path itself
    assert!((v["tsp_length"].as_f64().unwrap() - mst).abs() < 1e-12);
    let v = json(&nuv(&[
        "baseline", "--model", "grid", "--m", "5", "--seed", "2",
    ]));
    assert!(v.get("tsp_length").is_none());
}

#[test]
fn cover_profile_is_nonincreasing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let v = json(&nuv(&[
        "cover",
        "--model",
        "grid",
        "--m",
        "3",
        "--seed",
        "4",
        "--out-dir",
        out,
    ]));
    let counts: Vec<u64> = v["counts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_u64().unwrap())
        .collect();
    assert_eq!(counts[0], 9);
    assert_eq!(*counts.last().unwrap(), 1);
    assert!(counts.windows(2).all(|w| w[1] <= w[0]));
    assert!(dir.path().join("cover_profile.csv").exists());
}

fn write_config(dir: &Path, body: &str) -> std::path::PathBuf {
    let p = dir.join("run.cfg");
    fs::write(&p, body).unwrap();
    p
}

#[test]
fn experiment_from_config_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "model = mean_field\nn = 20\nseed = 9\nreplicates = 4\nstarts = 2\n\
         statistics = length, sd, variance_decomposition, mst\nout_dir = out\n",
    );
    let v = json(&nuv(&["experiment", "--config", cfg.to_str().unwrap()]));
    assert_eq!(v["walks"], 8);
    assert!(v.get("replicates").is_none());
    assert!(v["variance_decomposition"].is_object());
    let records = fs::read_to_string(dir.path().join("out/records.csv")).unwrap();
    assert_eq!(
        records.lines().next().unwrap(),
        "replicate,seed,start,L,normalized_L"
    );
    assert_eq!(records.lines().count(), 9);
    let summary: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("out/summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary["replicates"].as_array().unwrap().len(), 4);
}

#[test]
fn experiment_records_do_not_depend_on_workers() {
    let dir = tempfile::tempdir().unwrap();
    let mut csvs = Vec::new();
    for workers in ["1", "3"] {
        let out = dir.path().join(workers);
        json(&nuv(&[
            "experiment",
            "--model",
            "square",
            "--n",
            "30",
            "--seed",
            "11",
            "--replicates",
            "6",
            "--starts",
            "2",
            "--workers",
            workers,
            "--out-dir",
            out.to_str().unwrap(),
        ]));
        csvs.push(fs::read(out.join("records.csv")).unwrap());
    }
    assert_eq!(csvs[0], csvs[1]);
}

#[test]
fn failed_statistic_exits_nonzero() {
    let out = nuv(&[
        "experiment",
        "--model",
        "grid",
        "--m",
        "5",
        "--seed",
        "1",
        "--replicates",
        "2",
        "--statistics",
        "length,tsp",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["failed_statistics"][0]["statistic"], "tsp");
    assert!(String::from_utf8_lossy(&out.stderr).contains("tsp"));
}

#[test]
fn figures() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let v = json(&nuv(&[
        "figure",
        "--model",
        "square",
        "--n",
        "25",
        "--seed",
        "3",
        "--kind",
        "multi_start_overlay",
        "--starts",
        "0,5,9",
        "--svg",
        "--out-dir",
        out,
    ]));
    assert_eq!(v["files"].as_array().unwrap().len(), 2);
    let csv = fs::read_to_string(dir.path().join("multi_start_overlay.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 3 * 24);
    let v = json(&nuv(&[
        "figure",
        "--model",
        "grid",
        "--m",
        "4",
        "--seed",
        "3",
        "--kind",
        "step_histogram",
        "--bin-width",
        "0.25",
        "--out-dir",
        out,
    ]));
    assert_eq!(v["files"].as_array().unwrap().len(), 1);
}

#[test]
fn every_subcommand_has_help() {
    for sub in [
        "walk",
        "cover",
        "verify-prop1",
        "baseline",
        "experiment",
        "figure",
        "gen",
    ] {
        let out = nuv(&[sub, "--help"]);
        assert!(out.status.success());
        let text = String::from_utf8_lossy(&out.stdout);
        assert!(text.contains("Exit codes"), "{sub}");
    }
    let text = String::from_utf8_lossy(&nuv(&["experiment", "--help"]).stdout).into_owned();
    assert!(text.contains("records.csv") && text.contains("statistics"));
}
