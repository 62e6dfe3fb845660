use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn tpp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tpp")).args(args).output().expect("run tpp")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn write_cert(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name);
    let path_s = path.to_str().unwrap().to_string();
    let mut full = vec!["construct"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", &path_s]);
    let o = tpp(&full);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    path_s
}

#[test]
fn construct_frob80() {
    let o = tpp(&["construct", "--family", "frob80"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["group"], "frob80");
    assert_eq!(v["shape"], serde_json::json!([5, 5, 8]));
    assert_eq!(v["verified"], true);
}

#[test]
fn construct_with_params_and_usage_errors() {
    let o = tpp(&["construct", "--family", "dihedral", "-p", "9"]);
    assert_eq!(json(&o)["shape"], serde_json::json!([2, 2, 6]));
    assert_eq!(tpp(&["construct", "--family", "nope"]).status.code(), Some(2));
    assert_eq!(tpp(&["construct", "--family", "dihedral"]).status.code(), Some(2));
    assert_eq!(tpp(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(tpp(&["degrees", "--group", "quaternion:8"]).status.code(), Some(2));
}

#[test]
fn verify_good_and_tampered() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_cert(dir.path(), "sl2.json", &["--family", "sl2-parabolic", "-p", "3"]);
    let o = tpp(&["verify", &path]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("VERIFIED <3,3,3>"));

    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    v["subsets"][2][1] = v["subsets"][0][1].clone();
    v["subgroup"] = serde_json::json!([false, false, false]);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, v.to_string()).unwrap();
    let o = tpp(&["verify", bad.to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let out = json(&o);
    assert_eq!(out["verified"], false);
    assert_eq!(out["witness"].as_array().unwrap().len(), 3);

    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{\"schema\": 1").unwrap();
    assert_eq!(tpp(&["verify", garbage.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(tpp(&["verify", "/nonexistent/cert.json"]).status.code(), Some(2));
}

#[test]
fn catalog_json_rows() {
    let o = tpp(&["catalog", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = json(&o);
    let rows = rows.as_array().unwrap();
    assert!(rows.len() >= 50);
    assert!(rows.iter().all(|r| r["verified"] == true));
    let frob = rows.iter().find(|r| r["label"] == "frob80").unwrap();
    assert_eq!(frob["cube_sum"]["satisfied"], false);
    assert_eq!(frob["omega"]["outcome"]["kind"], "trivial");
    assert_eq!(frob["degrees"]["source"], "numeric");
    assert_eq!(frob["degrees"]["seed"], 0);
    let axes = rows.iter().find(|r| r["label"] == "cyclic-axes(2,3,5)").unwrap();
    assert_eq!(axes["gamma_infinite"], true);
    assert_eq!(axes["gamma_bound"]["kind"], "bound");
}

#[test]
fn catalog_is_reproducible() {
    let a = tpp(&["catalog", "--family", "dihedral", "--seed", "3"]);
    let b = tpp(&["catalog", "--family", "dihedral", "--seed", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(tpp(&["catalog", "--family", "nope"]).status.code(), Some(2));
}

#[test]
fn degrees_command() {
    let o = tpp(&["degrees", "--group", "sl2:5", "--method", "numeric", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["counts"], serde_json::json!([[1, 1], [2, 2], [3, 2], [4, 2], [5, 1], [6, 1]]));
    let o = tpp(&["degrees", "--group", "frob80"]);
    assert!(stdout(&o).contains("frob80: 1^5 5^3"));
    assert_eq!(tpp(&["degrees", "--group", "frob80", "--method", "formula"]).status.code(), Some(2));
}

#[test]
fn omega_command() {
    let o = tpp(&["omega", "--group", "sl2:5", "--alpha", "2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let w = json(&o)["outcome"]["value"].as_f64().unwrap();
    assert!((w - 2.0).abs() < 1e-6);
    let o = tpp(&["omega", "--group", "frob80", "--alpha", "2.481"]);
    assert!(stdout(&o).starts_with("trivial"));
    assert_eq!(tpp(&["omega", "--group", "frob80", "--alpha", "1.5"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let path = write_cert(dir.path(), "d5.json", &["--family", "d5"]);
    assert_eq!(tpp(&["omega", "--cert", &path]).status.code(), Some(0));
}

#[test]
fn matmul_command() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_cert(dir.path(), "bil.json", &["--family", "bilinear", "-p", "3"]);
    let o = tpp(&["matmul", "--cert", &path, "--trials", "5", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("MATCH"));

    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    v["subsets"][1] = v["subsets"][0].clone();
    v["subgroup"] = serde_json::json!([false, false, false]);
    std::fs::write(&path, v.to_string()).unwrap();
    let o = tpp(&["matmul", "--cert", &path]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("REJECTED"));
}

#[test]
fn search_command() {
    let o = tpp(&["search", "--group", "dihedral:4", "--mode", "subsets"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["nmp"], 8);
    assert_eq!(v["exhaustive"], true);
    assert_eq!(v["best"]["verified"], true);

    let o = tpp(&["search", "--group", "frob80", "--mode", "subgroups"]);
    assert_eq!(json(&o)["nmp"], 200);

    let o = tpp(&["search", "--group", "dihedral:4", "--mode", "subsets", "--budget", "2"]);
    assert_eq!(json(&o)["exhaustive"], false);
    assert_eq!(tpp(&["search", "--group", "sym:4", "--mode", "subsets"]).status.code(), Some(2));
}
