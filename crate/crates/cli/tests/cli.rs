use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_euler-stab")).args(args).output().unwrap()
}

fn run_json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

#[test]
fn classify_examples() {
    let v = run_json(&["classify", "--p1", "3", "--p2", "0", "--kappa", "4"]);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["verdict"], "LinearlyStable");
    assert_eq!(v["energy_casimir"]["definite"], false);

    let v = run_json(&["classify", "--p1", "1", "--p2", "0", "--kappa", "1"]);
    assert_eq!(v["verdict"], "LinearlyStable");
    assert_eq!(v["energy_casimir"]["definite"], true);

    let v = run_json(&["classify", "--p1", "0", "--p2", "2", "--kappa", "0.4"]);
    assert_eq!(v["verdict"], "LinearlyStable");

    let v = run_json(&["classify", "--p1", "2", "--p2", "0", "--kappa", "1"]);
    assert_eq!(v["verdict"], "LinearlyUnstable");
    let ls: Vec<f64> = v["candidate_classes"]
        .as_array()
        .unwrap()
        .iter()
        .filter_map(|c| c["lambda_star"].as_f64())
        .collect();
    assert!(ls.iter().any(|x| (x - 0.167156).abs() < 1e-6), "{ls:?}");
}

#[test]
fn spectrum_counts_and_formats_agree() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("s.json");
    let csv = dir.path().join("s.csv");
    let base = ["spectrum", "--p1", "3", "--p2", "1", "--kappa", "2", "--gamma", "1", "--window", "-100,100"];
    let with = |extra: &[&str]| -> Vec<String> { base.iter().chain(extra).map(|s| s.to_string()).collect() };
    let a = with(&["--out", json.to_str().unwrap()]);
    assert_eq!(code(&a.iter().map(String::as_str).collect::<Vec<_>>()), 0);
    let b = with(&["--out", csv.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(code(&b.iter().map(String::as_str).collect::<Vec<_>>()), 0);

    let v: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["summary"]["distinct_locations"], 16);
    assert!(v["summary"]["cluster_sizes"].as_array().unwrap().iter().all(|s| s == 2));

    // The csv rows are the json eigenvalues, in the same order.
    let from_json: Vec<(i64, i64, f64, f64)> = v["classes"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|c| {
            let a = (c["representative"][0].as_i64().unwrap(), c["representative"][1].as_i64().unwrap());
            c["eigenvalues"]
                .as_array()
                .unwrap()
                .iter()
                .map(move |z| (a.0, a.1, z[0].as_f64().unwrap(), z[1].as_f64().unwrap()))
                .collect::<Vec<_>>()
        })
        .collect();
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("a1,a2,re,im"));
    let from_csv: Vec<(i64, i64, f64, f64)> = lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2].parse().unwrap(), f[3].parse().unwrap())
        })
        .collect();
    assert_eq!(from_json.len(), from_csv.len());
    for (x, y) in from_json.iter().zip(&from_csv) {
        assert_eq!((x.0, x.1), (y.0, y.1));
        assert!((x.2 - y.2).abs() <= 1e-12 && (x.3 - y.3).abs() <= 1e-12);
    }
}

#[test]
fn stable_spectrum_has_no_discrete_locations() {
    let v = run_json(&["spectrum", "--p1", "3", "--kappa", "4"]);
    assert_eq!(v["summary"]["distinct_locations"], 0);
    assert_eq!(v["classes"].as_array().unwrap().len(), 0);
}

#[test]
fn lattice_reports_interior_points() {
    let v = run_json(&["lattice", "--p1", "3", "--p2", "1", "--kappa", "2"]);
    assert_eq!(v["nu"], 16);
    assert_eq!(v["interior_points"].as_array().unwrap().len(), 16);
}

#[test]
fn identical_runs_give_identical_bytes() {
    let args = ["classify", "--p1", "2", "--p2", "1", "--kappa", "1.3", "--window", "-30,30"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let sim = ["simulate", "--p1", "1", "--kappa", "1", "-N", "4", "--t-end", "1", "--seed", "9"];
    let (a, b) = (run(&sim), run(&sim));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn unperturbed_equilibrium_is_static() {
    let v = run_json(&["simulate", "--p1", "1", "--kappa", "1", "--delta", "0", "--t-end", "2"]);
    assert!(v["max_hamiltonian_drift"].as_f64().unwrap() < 1e-12);
    for d in v["max_casimir_drift"].as_array().unwrap() {
        assert!(d.as_f64().unwrap() < 1e-12);
    }
    let snaps = v["snapshots"].as_array().unwrap();
    assert_eq!(snaps.len(), 2);
    for (x, y) in snaps[0]["omega"].as_array().unwrap().iter().zip(snaps[1]["omega"].as_array().unwrap()) {
        for i in 0..2 {
            assert!((x[i].as_f64().unwrap() - y[i].as_f64().unwrap()).abs() < 1e-12);
        }
    }
}

#[test]
fn simulated_growth_matches_linear_rate() {
    let v = run_json(&[
        "simulate", "--p1", "2", "--kappa", "1", "--delta", "1e-6", "-N", "12", "--dt", "0.02", "--t-end", "25",
    ]);
    let fit = v["growth"]["fit"]["rate"].as_f64().unwrap();
    let linear = v["growth"]["linear_rate"].as_f64().unwrap();
    assert!((fit - linear).abs() < 0.1 * linear, "{fit} vs {linear}");

    let v = run_json(&["simulate", "--p1", "1", "--kappa", "1", "--delta", "1e-3", "--dt", "0.02", "--t-end", "100"]);
    assert!(v["growth"]["max_deviation_ratio"].as_f64().unwrap() < 10.0);
    assert!(!v["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn grid_snapshots_have_headers() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run.json");
    let args = ["simulate", "--p1", "1", "--kappa", "1.5", "-N", "4", "--t-end", "0.5", "--grid", "8"];
    let mut full: Vec<&str> = args.to_vec();
    full.extend(["--out", out.to_str().unwrap()]);
    assert_eq!(code(&full), 0);
    let text = std::fs::read_to_string(Path::new(&format!("{}.grid", out.display()))).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2 * 9);
    let header: Vec<f64> = lines[0].split(' ').map(|x| x.parse().unwrap()).collect();
    assert_eq!(header, vec![8.0, 1.5, 0.0]);
    assert_eq!(lines[1].split(' ').count(), 8);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["classify", "--p1", "1", "--kappa", "-1"]), 2);
    assert_eq!(code(&["classify", "--p1", "0", "--p2", "0", "--kappa", "1"]), 2);
    assert_eq!(code(&["spectrum", "--p1", "2", "--kappa", "1", "--window", "0,5"]), 2);
    assert_eq!(code(&["spectrum", "--p1", "2", "--kappa", "1", "--window", "5"]), 2);
    assert_eq!(code(&["simulate", "--p1", "20", "--kappa", "1"]), 2);
    assert_eq!(code(&["simulate", "--p1", "1", "--kappa", "1", "--dt", "0"]), 2);
    assert_eq!(code(&["lattice", "--p1", "1", "--kappa", "1", "--format", "csv"]), 2);
    assert_eq!(code(&["verify", "--suite", "nope"]), 2);
    assert_eq!(code(&["verify", "--suite", "charpoly"]), 0);
}

#[test]
fn verify_reports_conjecture_without_failing() {
    let out = run(&["verify", "--suite", "conjecture", "--suite", "symmetry"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("conjecture")));
    assert!(text.lines().any(|l| l.starts_with("symmetry") && l.contains("PASS")));
}

#[test]
fn thread_override() {
    let ok = Command::new(env!("CARGO_BIN_EXE_euler-stab"))
        .env("EULER_STAB_THREADS", "1")
        .args(["lattice", "--p1", "2", "--kappa", "1"])
        .output()
        .unwrap();
    assert!(ok.status.success());
    let bad = Command::new(env!("CARGO_BIN_EXE_euler-stab"))
        .env("EULER_STAB_THREADS", "many")
        .args(["lattice", "--p1", "2", "--kappa", "1"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
