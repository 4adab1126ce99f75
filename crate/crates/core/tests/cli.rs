use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn frobzeta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frobzeta")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn structured(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "structured"]);
    let o = frobzeta(&all);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn write_scheme(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

const CUBIC: &str = "base_char = 2\nambient = \"projective 2\"\nequations = [\"x1^2*x2 + x1*x2^2 = x0^3\"]\n";

fn counts(doc: &Value) -> Vec<u64> {
    doc["results"]["counts"].as_array().unwrap().iter().map(|r| r["count"].as_u64().unwrap()).collect()
}

#[test]
fn count_examples() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(counts(&structured(&["count", "--phi", "catalog:P1/F2", "--N", "3"])), [3, 5, 9]);
    let cubic = write_scheme(dir.path(), "cubic.toml", CUBIC);
    assert_eq!(counts(&structured(&["count", "--scheme", &cubic, "--N", "4"])), [3, 9, 9, 9]);
    let empty = write_scheme(dir.path(), "empty.toml", "base_char = 3\nambient = \"affine 2\"\nequations = [\"1 = 0\"]\n");
    assert_eq!(counts(&structured(&["count", "--scheme", &empty, "--N", "3"])), [0, 0, 0]);
}

#[test]
fn zeta_examples() {
    for (name, want) in [
        ("A1/F2", "1/(1 - 2u)"),
        ("P2/F3", "1/(1 - 13u + 39u^2 - 27u^3)"),
        ("Gm/F2", "(1 - u)/(1 - 2u)"),
    ] {
        let doc = structured(&["zeta", "--phi", &format!("catalog:{name}")]);
        assert_eq!(doc["results"]["text"], want, "{name}");
        assert_eq!(doc["results"]["confirmed"], true);
    }
    let doc = structured(&["zeta", "--phi", "2:[[1]]"]);
    assert_eq!(doc["results"]["text"], "1/(1 - u^2)");
}

#[test]
fn euler_agrees() {
    let o = frobzeta(&["euler", "--phi", "catalog:Gm/F2", "--N", "8"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("through u^8: yes"));
}

fn verdicts(doc: &Value) -> Vec<String> {
    doc["results"]["reports"].as_array().unwrap().iter().map(|r| r["verdict"].as_str().unwrap().to_string()).collect()
}

#[test]
fn verify_examples() {
    assert_eq!(verdicts(&structured(&["verify", "1.3.6", "--phi", "[[2]]", "--p", "5", "--k", "2"])), ["Pass"]);
    assert_eq!(verdicts(&structured(&["verify", "1.3.5", "--phi", "[[1]]"])), ["Inconclusive"]);
    let doc = structured(&["verify", "norm", "--phi", "[[2]]", "--p", "5", "--chain", "1,2,6,12"]);
    assert_eq!(verdicts(&doc), ["Pass"]);
    assert_eq!(doc["results"]["reports"][0]["check"], "norm");
    let doc = structured(&["verify", "zeta-eq-element", "--phi", "[[2]]", "--p", "5", "--k", "1", "--n", "3"]);
    assert_eq!(doc["results"]["reports"][0]["lhs"]["coeffs"], serde_json::json!([2, 4, 3]));
    // every check on one object, and a random batch
    let doc = structured(&["verify", "--phi", "[[2,1],[0,3]]", "--p", "7", "--n", "2"]);
    assert_eq!(verdicts(&doc).len(), 6);
    assert!(!verdicts(&doc).contains(&"Fail".to_string()));
    let doc = structured(&["verify", "--seed", "3", "--count", "4"]);
    assert_eq!(doc["results"]["summary"]["fail"], 0);
    assert_eq!(doc["results"]["reports"][0]["seed"], 3);
}

#[test]
fn catalog_examples() {
    let doc = structured(&["catalog", "--entry", "P1/F2", "--entry", "Gm/F2", "--entry", "E/F2"]);
    assert_eq!(verdicts(&doc), ["Pass", "Pass", "Pass"]);
    let dir = tempfile::tempdir().unwrap();
    let cubic = write_scheme(dir.path(), "cubic.toml", CUBIC);
    assert_eq!(verdicts(&structured(&["catalog", "--scheme", &cubic])), ["Pass"]);
}

#[test]
fn structured_output_is_deterministic_and_cache_independent() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let cache = cache.to_str().unwrap();
    let args = ["zeta", "--phi", "catalog:P2/F3", "--format", "structured"];
    let plain = frobzeta(&args);
    let mut cached_args = args.to_vec();
    cached_args.extend(["--cache", cache]);
    let first = frobzeta(&cached_args);
    let second = frobzeta(&cached_args);
    assert_eq!(plain.stdout, first.stdout);
    assert_eq!(first.stdout, second.stdout);
    assert!(std::fs::read_dir(cache).unwrap().count() >= 5);
    let doc: Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(doc["convention"], frobzeta::zetael::CONVENTION);
    assert_eq!(doc["tool"], "frobzeta");
    assert_eq!(doc["parameters"]["p"], 5);
}

#[test]
fn corrupt_and_wrong_cache_records() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = ["count", "--phi", "catalog:P1/F3", "--N", "3", "--cache", cache, "--format", "structured"];
    let fresh = frobzeta(&args);
    let records: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(records.len(), 3);
    for r in &records {
        std::fs::write(r, "not a number").unwrap();
    }
    assert_eq!(frobzeta(&args).stdout, fresh.stdout);
    let two = records.iter().find(|r| r.to_str().unwrap().ends_with("-2.count")).unwrap();
    std::fs::write(two, "11\n").unwrap();
    let mut checked = args.to_vec();
    checked.push("--verify-cache");
    let o = frobzeta(&checked);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("recomputation gives 10"));
}

#[test]
fn errors_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_scheme(dir.path(), "bad.toml", "base_char = 3\nambient = \"affine 2\"\nequations = [\"x0 + x9\"]\n");
    let o = frobzeta(&["count", "--scheme", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("3:"), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(frobzeta(&["verify", "1.9.9", "--phi", "[[2]]"]).status.code(), Some(2));
    assert_eq!(frobzeta(&["verify", "--phi", "[[2]]", "--p", "2", "--q", "4"]).status.code(), Some(2));
    assert_eq!(frobzeta(&["count", "--phi", "catalog:P3/F3", "--N", "6", "--budget", "1000"]).status.code(), Some(2));
    assert_eq!(frobzeta(&["frobnicate"]).status.code(), Some(2));
}
