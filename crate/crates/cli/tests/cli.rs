//! End-to-end tests of the `sgspec` binary: outputs, JSON discipline and
//! exit codes.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn sgspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sgspec"))
        .args(args)
        .env_remove("SGSPEC_WORKERS")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

/// Stdout must be exactly one JSON document.
fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("stdout is not one JSON document: {e}"))
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn construct_examples() {
    let dir = tempfile::tempdir().unwrap();
    let g10 = dir.path().join("g10.sg");
    let o = sgspec(&[
        "construct",
        "gamma",
        "--n",
        "10",
        "--t",
        "3",
        "--out",
        path(&g10),
        "--json",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(
        (v["n"].as_u64(), v["edges"].as_u64(), v["negative_edges"].as_u64()),
        (Some(10), Some(38), Some(1))
    );
    let text = std::fs::read_to_string(&g10).unwrap();
    assert!(text.starts_with("10 38\n"));

    let o = sgspec(&["construct", "u", "--n", "7"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("7 17\n"));
    assert!(stderr(&o).contains("17 edges"));

    assert_eq!(code(&sgspec(&["construct", "gamma", "--n", "7", "--t", "1"])), 2);
    assert_eq!(code(&sgspec(&["construct", "gamma", "--n", "7"])), 2);
    assert_eq!(code(&sgspec(&["construct", "u", "--n", "7", "--t", "3"])), 2);
    assert_eq!(code(&sgspec(&["construct", "petersen", "--n", "10"])), 2);
}

#[test]
fn graph_queries() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.sg");
    let u = dir.path().join("u.sg");
    assert_eq!(
        code(&sgspec(&["construct", "gamma", "--n", "8", "--t", "3", "-o", path(&g)])),
        0
    );
    assert_eq!(code(&sgspec(&["construct", "u", "--n", "8", "-o", path(&u)])), 0);

    let o = sgspec(&["lambda1", path(&g)]);
    assert_eq!(code(&o), 0);
    let l: f64 = String::from_utf8_lossy(&o.stdout).trim().parse().unwrap();
    assert!((l - 6.0).abs() < 1e-9);

    let v = json(&sgspec(&["spectrum", path(&g), "--json"]));
    assert_eq!(v["eigenvalues"].as_array().unwrap().len(), 8);
    assert!((v["rho"].as_f64().unwrap() - 6.0).abs() < 1e-9);

    let v = json(&sgspec(&["check", path(&g), "--json"]));
    assert_eq!(
        (v["balanced"].as_bool(), v["free"].as_bool()),
        (Some(false), Some(true))
    );
    let v = json(&sgspec(&["check", path(&g), "--family", "ck:3", "--json"]));
    assert_eq!(v["free"].as_bool(), Some(false));
    assert_eq!(v["witness"]["certificate_cycle"].as_array().unwrap().len(), 3);
    assert_eq!(code(&sgspec(&["check", path(&g), "--family", "kst:1,3"])), 2);

    let a = json(&sgspec(&["canon", path(&g), "--json"]));
    let twin = dir.path().join("twin.sg");
    std::fs::write(&twin, a["graph"].as_str().unwrap()).unwrap();
    let b = json(&sgspec(&["canon", path(&twin), "--json"]));
    assert_eq!(a["key"], b["key"]);

    let v = json(&sgspec(&["switch-iso", path(&g), path(&twin), "--json"]));
    assert_eq!(v["switching_isomorphic"].as_bool(), Some(true));
    let v = json(&sgspec(&["switch-iso", path(&g), path(&u), "--json"]));
    assert_eq!(v["switching_isomorphic"].as_bool(), Some(false));

    let big = dir.path().join("big.sg");
    assert_eq!(
        code(&sgspec(&[
            "construct",
            "gamma",
            "--n",
            "12",
            "--t",
            "3",
            "-o",
            path(&big)
        ])),
        0
    );
    assert_eq!(code(&sgspec(&["canon", path(&big)])), 2);
    assert_eq!(code(&sgspec(&["canon", path(&big), "--canonical-limit", "12"])), 0);
}

#[test]
fn malformed_input_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.sg");
    std::fs::write(&bad, "2 1\n0 0 +\n").unwrap();
    let o = sgspec(&["lambda1", path(&bad), "--json"]);
    assert_eq!(code(&o), 2);
    assert!(o.stdout.is_empty());
    assert_eq!(code(&sgspec(&["lambda1", path(&dir.path().join("missing.sg"))])), 2);
    assert_eq!(code(&sgspec(&["frobnicate"])), 2);
}

#[test]
fn verify_cubic_suite_passes_with_exact_rows() {
    let o = sgspec(&["verify", "lemma22", "--n", "7..50", "--json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["passed"].as_bool(), Some(true));
    let zero_rows: Vec<&Value> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["check"].as_str().unwrap().starts_with("g(n,3) at n-2"))
        .collect();
    assert_eq!(zero_rows.len(), 44);
    assert!(zero_rows.iter().all(|c| c["exact"] == "0"));
}

#[test]
fn verify_competitor_suite_flags_only_the_stated_z1_value() {
    let o = sgspec(&["verify", "lemma23", "--n", "7..50", "--json"]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_eq!(v["failed_checks"].as_u64(), Some(44));
    for c in v["checks"].as_array().unwrap() {
        if c["passed"] == false {
            assert!(c["check"].as_str().unwrap().starts_with("Z1: derivative 0 at n-2"));
            let n = c["n"].as_i64().unwrap();
            assert_eq!(c["exact"].as_str().unwrap(), (n * n * n - 26 * n + 5).to_string());
        }
    }
    let inequalities = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["n"] == 7 && c["check"].as_str().unwrap().contains("derivative 0 at n-2"))
        .count();
    assert_eq!(inequalities, 4);
}

#[test]
fn verify_small_n_suite_embeds_certificate() {
    let o = sgspec(&["verify", "theorem11-small-n", "--n", "7", "--json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    let cert = &v["certificates"][0];
    assert_eq!(cert["verdict"], "BoundHolds");
    assert!((cert["best_lambda1"].as_f64().unwrap() - 5.0).abs() < 1e-9);
    assert!(cert["restriction"].is_string());
    assert_eq!(code(&sgspec(&["verify", "theorem11-small-n", "--n", "9"])), 2);
}

#[test]
fn verify_usage_errors() {
    assert_eq!(code(&sgspec(&["verify", "lemma99"])), 2);
    assert_eq!(code(&sgspec(&["verify", "lemma22", "--n", "9..7"])), 2);
    assert_eq!(code(&sgspec(&["verify", "lemma22", "--n", "x"])), 2);
    assert_eq!(code(&sgspec(&["verify", "lemma23", "--n", "3..9"])), 2);
}

#[test]
fn verify_is_a_pure_replay() {
    let a = sgspec(&["verify", "bounds-32-33", "--n", "7..8", "--samples", "20", "--json"]);
    let b = sgspec(&["verify", "bounds-32-33", "--n", "7..8", "--samples", "20", "--json"]);
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn search_examples() {
    let dir = tempfile::tempdir().unwrap();
    let cert_path = dir.path().join("cert.json");
    let o = sgspec(&["search", "--n", "7", "--mode", "guided", "--out", path(&cert_path)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    assert!(stderr(&o).contains("restriction"));
    let cert: Value = serde_json::from_str(&std::fs::read_to_string(&cert_path).unwrap()).unwrap();
    assert!((cert["best_lambda1"].as_f64().unwrap() - 5.0).abs() < 1e-9);
    assert_eq!(cert["all_maximizers_match_gamma_n3"].as_bool(), Some(true));

    let args = [
        "search",
        "--n",
        "9",
        "--mode",
        "anneal",
        "--seed",
        "42",
        "--restarts",
        "64",
        "--json",
    ];
    let a = sgspec(&args);
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    let b = sgspec(&args);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert!(v["best_lambda1"].as_f64().unwrap() <= 7.0 + 1e-6);
    assert_eq!(v["matches_gamma_n3"].as_bool(), Some(true));

    assert_eq!(code(&sgspec(&["search", "--n", "6", "--mode", "guided"])), 2);
    assert_eq!(code(&sgspec(&["search", "--n", "7", "--mode", "exhaustive"])), 2);
    assert_eq!(code(&sgspec(&["search", "--n", "7", "--mode", "sideways"])), 2);
    assert_eq!(
        code(&sgspec(&["search", "--n", "8", "--mode", "anneal", "--cooling", "1.5"])),
        2
    );
}

#[test]
fn counterexample_verdict_has_its_own_exit_code() {
    // At n = 5 the maximum index exceeds n - 2, so the bound fails there.
    let dir = tempfile::tempdir().unwrap();
    let hist = dir.path().join("hist.csv");
    let o = sgspec(&[
        "search",
        "--n",
        "5",
        "--mode",
        "exhaustive",
        "--histogram",
        path(&hist),
        "--json",
    ]);
    assert_eq!(code(&o), 3);
    assert_eq!(json(&o)["verdict"], "CounterexampleFound");
    let csv = std::fs::read_to_string(&hist).unwrap();
    assert!(csv.starts_with("lo,hi,count\n"));
    let total: u64 = csv
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse::<u64>().unwrap())
        .sum();
    assert!(total > 0);
}

#[test]
fn config_file_and_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sgspec.toml");
    std::fs::write(&cfg, "restarts = 2\nmax_steps = 100\nseed = 7\ncooling = 0.9\n").unwrap();

    let o = sgspec(&[
        "search",
        "--n",
        "8",
        "--mode",
        "anneal",
        "--config",
        path(&cfg),
        "--json",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let c = &json(&o)["config"];
    assert_eq!(
        (c["restarts"].as_u64(), c["max_steps"].as_u64(), c["seed"].as_u64()),
        (Some(2), Some(100), Some(7))
    );
    assert_eq!(c["cooling"].as_f64(), Some(0.9));

    let o = sgspec(&[
        "search",
        "--n",
        "8",
        "--mode",
        "anneal",
        "--config",
        path(&cfg),
        "--seed",
        "11",
        "--json",
    ]);
    assert_eq!(json(&o)["config"]["seed"].as_u64(), Some(11));

    let o = Command::new(env!("CARGO_BIN_EXE_sgspec"))
        .args([
            "search",
            "--n",
            "8",
            "--mode",
            "anneal",
            "--config",
            path(&cfg),
            "--json",
        ])
        .env("SGSPEC_WORKERS", "2")
        .output()
        .unwrap();
    assert_eq!(json(&o)["config"]["workers"].as_u64(), Some(2));

    std::fs::write(&cfg, "restart = 2\n").unwrap();
    assert_eq!(
        code(&sgspec(&[
            "search",
            "--n",
            "8",
            "--mode",
            "anneal",
            "--config",
            path(&cfg)
        ])),
        2
    );
}
