use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn sentropy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sentropy")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

const K4: &str = "0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n";

#[test]
fn analyze_k4_exact() {
    let dir = tempfile::tempdir().unwrap();
    let k4 = write(dir.path(), "k4.txt", K4);
    let out = sentropy(&["analyze", &k4, "--mode", "exact"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["h1"], 2.0);
    for key in ["h2", "resistance", "security_index", "partition"] {
        assert!(!v[key].is_null(), "{key}");
    }
    assert_eq!(v["method"], "exact");
    assert_eq!(v["resistance_is_lower_bound"], false);
    assert_eq!(out.stdout, sentropy(&["analyze", &k4, "--mode", "exact"]).stdout);
}

#[test]
fn analyze_keeps_external_ids() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.txt", "100 101\n101 102\n100 102\n102 200\n200 201\n201 202\n200 202\n");
    let p = write(dir.path(), "p.txt", "100 a\n");
    let out = sentropy(&["analyze", &g, "--partition", &p]);
    assert_eq!(out.status.code(), Some(2));
    let p = write(dir.path(), "p.txt", "100 0\n101 0\n102 0\n200 1\n201 1\n202 1\n");
    let out = sentropy(&["analyze", &g, "--partition", &p]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["partition"], serde_json::json!([[100, 101, 102], [200, 201, 202]]));
    assert_eq!(v["method"], "construction:natural");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.txt", "0 1\na b\n");
    let out = sentropy(&["analyze", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let split = write(dir.path(), "two.txt", "0 1\n2 3\n");
    assert_eq!(sentropy(&["analyze", &split]).status.code(), Some(3));

    let long = write(dir.path(), "c.txt", &(0..20).map(|v| format!("{v} {}\n", (v + 1) % 20)).collect::<String>());
    assert_eq!(sentropy(&["analyze", &long, "--mode", "exact"]).status.code(), Some(4));
    assert_eq!(sentropy(&["analyze", &long, "--mode", "greedy"]).status.code(), Some(0));

    let missing = dir.path().join("none.txt");
    assert_eq!(sentropy(&["analyze", missing.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn generate_and_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("grid.txt");
    let p = dir.path().join("grid.part");
    let (g, p) = (g.to_str().unwrap(), p.to_str().unwrap());
    let out = sentropy(&["generate", "grid", "--size", "8", "--out", g, "--partition-out", p]);
    assert!(out.status.success());
    assert_eq!(std::fs::read_to_string(g).unwrap().lines().count(), 112);

    let out = sentropy(&["spectrum", g, "--partition", p]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["eigenvalues"].as_array().unwrap().len(), 64);
    assert!((v["trace"].as_f64().unwrap() - 64.0).abs() < 1e-6);
    assert_eq!(v["cheeger_check"]["holds"], true);
    assert!(v["census"]["count"].as_u64().unwrap() >= v["cheeger_check"]["k"].as_u64().unwrap());

    let k4 = write(dir.path(), "k4.txt", K4);
    let v: Value = serde_json::from_slice(&sentropy(&["spectrum", &k4]).stdout).unwrap();
    assert!(v["cheeger_check"].is_null());
    assert_eq!(v["census"]["count"], 1);
}

#[test]
fn security_generation_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let trace = dir.path().join(format!("{name}.trace.json"));
        let status = sentropy(&[
            "generate",
            "security",
            "--size",
            "800",
            "--seed",
            "9",
            "--out",
            out.to_str().unwrap(),
            "--trace",
            trace.to_str().unwrap(),
        ]);
        assert!(status.status.success());
        (std::fs::read(out).unwrap(), std::fs::read(trace).unwrap())
    };
    assert_eq!(run("a"), run("b"));
    let out = sentropy(&["generate", "path", "--size", "5", "--trace", "x.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn experiment_writes_csv_and_formula() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("complete.csv");
    let out = sentropy(&["experiment", "complete", "--sizes", "16,64,256", "--out", csv.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("family,n,param,h1,h2,resistance,security_index,bound,bound_satisfied,seed")
    );
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 10);
        assert!(cols[5].parse::<f64>().unwrap() < 1.4427);
        assert_eq!(cols[8], "true");
    }
    let meta: Value = serde_json::from_slice(&std::fs::read(csv.with_extension("json")).unwrap()).unwrap();
    assert_eq!(meta["bound_formula"], "resistance < log2(e)");
    assert!(String::from_utf8_lossy(&out.stderr).contains("log2(e)"));
}

#[test]
fn tree_experiment_theta_increases() {
    let out = sentropy(&["experiment", "tree", "--sizes", "8,9,10,11,12,13,14"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let thetas: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').nth(6).unwrap().parse().unwrap()).collect();
    assert_eq!(thetas.len(), 7);
    assert!(thetas.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn verify_suites() {
    let out = sentropy(&["verify", "resistance-law"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("PASS resistance-law: 200/200"));
    let out = sentropy(&["verify", "merge-split", "--seed", "4"]);
    assert!(out.status.success());
    assert_eq!(sentropy(&["verify", "unknown"]).status.code(), Some(1));
}
