use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cubic-jordan"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn certificate(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("certificate on stdout")
}

fn emit(dir: &TempDir, family: &str) -> PathBuf {
    let path = dir.path().join(format!("{}.json", family.replace(':', "")));
    let out = run(&["catalog", "emit", family, "-o", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn check_names(cert: &Value) -> Vec<String> {
    cert["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap().to_string())
        .collect()
}

#[test]
fn catalog_emit_dimensions() {
    let dir = TempDir::new().unwrap();
    let cartan = emit(&dir, "cartan:4");
    let v: Value = serde_json::from_str(&fs::read_to_string(cartan).unwrap()).unwrap();
    assert_eq!(v["cubic"]["dim"], 14);
    let diag = emit(&dir, "diagonal");
    let v: Value = serde_json::from_str(&fs::read_to_string(diag).unwrap()).unwrap();
    assert_eq!(v["space"]["gram"].as_array().unwrap().len(), 2);
}

#[test]
fn bad_family_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let out = run(&["catalog", "emit", "cartan:3", "-o", s(&dir.path().join("x.json"))]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("cartan:1|2|4|8"), "{err}");
    assert!(err.contains("herm3:1|2|4"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn usage_and_io_errors_exit_2() {
    assert_eq!(code(&run(&["verify", "eiconal"])), 2);
    assert_eq!(code(&run(&["verify", "quartic", "x.json"])), 2);
    assert_eq!(code(&run(&["verify", "eiconal", "/nonexistent/file.json"])), 2);
    let dir = TempDir::new().unwrap();
    let junk = dir.path().join("junk.json");
    fs::write(&junk, "{\"space\": 3}").unwrap();
    assert_eq!(code(&run(&["verify", "eiconal", s(&junk)])), 2);
    fs::write(&junk, "not json").unwrap();
    assert_eq!(code(&run(&["roundtrip", s(&junk)])), 2);
    fs::write(&junk, "{\"other\": 1}").unwrap();
    assert_eq!(code(&run(&["roundtrip", s(&junk)])), 2);
}

#[test]
fn triple_file_is_not_an_algebra_file() {
    let dir = TempDir::new().unwrap();
    let diag = emit(&dir, "diagonal");
    assert_eq!(code(&run(&["verify", "jordan", s(&diag)])), 2);
}

#[test]
fn verify_eiconal_passes_and_echoes_parameters() {
    let dir = TempDir::new().unwrap();
    let f = emit(&dir, "cartan:2");
    let out = run(&["verify", "eiconal", s(&f), "--seed", "7", "--samples", "12"]);
    assert_eq!(code(&out), 0);
    let cert = certificate(&out);
    assert_eq!(cert["status"], "pass");
    assert_eq!(cert["seed"], 7);
    assert_eq!(cert["samples"], 12);
    assert_eq!(cert["command"], "verify eiconal");
    assert_eq!(cert["eiconal"], serde_json::json!({"status": "pass", "witnesses": []}));
    assert!(cert["tool_version"].is_string());
    assert!(cert["elapsed_ms"].is_u64());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("PASS"));
}

#[test]
fn corrupted_coefficient_fails_with_witnesses() {
    let dir = TempDir::new().unwrap();
    let f = emit(&dir, "diagonal");
    let mut v: Value = serde_json::from_str(&fs::read_to_string(&f).unwrap()).unwrap();
    v["cubic"]["tri"][0]["val"]["q"] = Value::String("-5/1".into());
    fs::write(&f, v.to_string()).unwrap();
    let out = run(&["verify", "eiconal", s(&f)]);
    assert_eq!(code(&out), 1);
    let cert = certificate(&out);
    assert_eq!(cert["status"], "fail");
    assert!(!cert["eiconal"]["witnesses"].as_array().unwrap().is_empty());
    assert_eq!(cert["checks"][0]["witness"]["kind"], "monomials");
}

#[test]
fn verify_jordan_and_lemma_on_beta_output() {
    let dir = TempDir::new().unwrap();
    let t = emit(&dir, "spin:3");
    let alg = dir.path().join("alg.json");
    let out = run(&["build", "beta", s(&t), "-o", s(&alg), "--samples", "20"]);
    assert_eq!(code(&out), 0);
    let cert = certificate(&out);
    assert_eq!(cert["output"]["dim"], 4);
    assert!(check_names(&cert).iter().any(|n| n.starts_with("output: ")));

    let out = run(&["verify", "jordan", s(&alg), "--samples", "20"]);
    assert_eq!(code(&out), 0);
    let names = check_names(&certificate(&out));
    for needle in ["adjoint", "Jordan", "lemma (iii)"] {
        assert!(names.iter().any(|n| n.contains(needle)), "{needle} missing: {names:?}");
    }
    assert_eq!(code(&run(&["verify", "lemma", s(&alg), "--samples", "20"])), 0);
}

#[test]
fn beta_of_diagonal_is_three_dimensional_and_alpha_inverts_it() {
    let dir = TempDir::new().unwrap();
    let diag = emit(&dir, "diagonal");
    let alg = dir.path().join("alg.json");
    let back = dir.path().join("back.json");
    assert_eq!(code(&run(&["build", "beta", s(&diag), "-o", s(&alg)])), 0);
    let v: Value = serde_json::from_str(&fs::read_to_string(&alg).unwrap()).unwrap();
    assert_eq!(v["dim"], 3);
    assert_eq!(code(&run(&["build", "alpha", s(&alg), "-o", s(&back)])), 0);
    assert_eq!(fs::read(&diag).unwrap(), fs::read(&back).unwrap());
}

#[test]
fn alpha_of_herm3_real_is_five_dimensional() {
    let dir = TempDir::new().unwrap();
    let h = emit(&dir, "herm3:1");
    let t = dir.path().join("t.json");
    let out = run(&["build", "alpha", s(&h), "-o", s(&t), "--samples", "20"]);
    assert_eq!(code(&out), 0);
    assert_eq!(certificate(&out)["output"], serde_json::json!({"kind": "triple", "dim": 5}));
    assert_eq!(code(&run(&["verify", "eiconal", s(&t), "--samples", "20"])), 0);
}

#[test]
fn build_refuses_a_failing_input() {
    let dir = TempDir::new().unwrap();
    let f = emit(&dir, "diagonal");
    let mut v: Value = serde_json::from_str(&fs::read_to_string(&f).unwrap()).unwrap();
    v["cubic"]["tri"][0]["val"]["q"] = Value::String("1/1".into());
    fs::write(&f, v.to_string()).unwrap();
    let target = dir.path().join("never.json");
    let out = run(&["build", "beta", s(&f), "-o", s(&target)]);
    assert_eq!(code(&out), 1);
    assert!(!target.exists());
    assert_eq!(certificate(&out)["checks"][0]["name"], "input: eiconal equation");
}

#[test]
fn roundtrip_triple_and_algebra() {
    let dir = TempDir::new().unwrap();
    let diag = emit(&dir, "diagonal");
    let out = run(&["roundtrip", s(&diag)]);
    assert_eq!(code(&out), 0);
    assert!(check_names(&certificate(&out)).contains(&"alpha(beta(t)) = t".to_string()));

    let h = emit(&dir, "herm3:1");
    let out = run(&["roundtrip", s(&h), "--seed", "3"]);
    assert_eq!(code(&out), 0);
    let cert = certificate(&out);
    let phi = cert["phi"].as_array().expect("phi matrix embedded");
    assert_eq!(phi.len(), 6);
}

#[test]
fn corrupted_unit_names_the_basepoint_check() {
    let dir = TempDir::new().unwrap();
    let h = emit(&dir, "herm3:1");
    let mut v: Value = serde_json::from_str(&fs::read_to_string(&h).unwrap()).unwrap();
    v["unit"][0]["q"] = Value::String("2/1".into());
    fs::write(&h, v.to_string()).unwrap();
    for args in [
        vec!["roundtrip", s(&h)],
        vec!["verify", "jordan", s(&h)],
        vec!["verify", "lemma", s(&h)],
    ] {
        let out = run(&args);
        assert_eq!(code(&out), 1, "{args:?}");
        let names = check_names(&certificate(&out));
        assert!(names.iter().any(|n| n.contains("TC3")), "{names:?}");
    }
}

#[test]
fn certificate_can_go_to_a_file() {
    let dir = TempDir::new().unwrap();
    let f = emit(&dir, "diagonal");
    let cert_path = dir.path().join("cert.json");
    let out = run(&["verify", "eiconal", s(&f), "--out", s(&cert_path)]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let cert: Value = serde_json::from_str(&fs::read_to_string(cert_path).unwrap()).unwrap();
    assert_eq!(cert["status"], "pass");
}
