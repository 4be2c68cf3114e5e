use std::path::Path;
use std::process::{Command, Output};

fn qwalk(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qwalk")).current_dir(dir).args(args).output().unwrap()
}

fn generate(dir: &Path, family: &str, params: &str, out: &str) {
    let o = qwalk(dir, &["generate", "--family", family, "--params", params, "--out", out]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn pi_reports_floor_and_saves_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path(), "torus", "p=5,d=2", "m.json");
    let o = qwalk(dir.path(), &["pi", "--matrix", "m.json", "--out", "pi.json"]);
    assert!(o.status.success());
    let summary: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(summary["min_entry"].as_f64().unwrap() >= 1.0 / 625.0);
    let snap = std::fs::read_to_string(dir.path().join("pi.json")).unwrap();
    assert!(snap.contains("\"kind\":\"cesaro_infinite\""));
}

#[test]
fn malformed_input_exits_nonzero_with_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("bad.json"),
        r#"{"n":3,"spec":{"family":"cycle","n":3},"rows":[[0,0.6,0.5],[0.5,0,0.5],[0.5,0.5,0]]}"#,
    )
    .unwrap();
    let o = qwalk(dir.path(), &["analyze", "--matrix", "bad.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("invariant violated: symmetric"));

    let o = qwalk(dir.path(), &["generate", "--family", "torus", "--params", "p=5,q=2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = qwalk(dir.path(), &["analyze", "--matrix", "bad.json", "--bogus"]);
    assert!(!o.status.success());
}

#[test]
fn exact_sample_then_report() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path(), "torus", "p=5,d=2", "m.json");
    let o = qwalk(dir.path(), &["sample", "--matrix", "m.json", "--eps", "0.01", "--mode", "exact", "--out", "s.json"]);
    assert!(o.status.success());
    let s: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("s.json")).unwrap()).unwrap();
    assert!(s["tv_to_uniform_exact"].as_f64().unwrap() <= 0.01);
    assert!(s["T_prime"].as_u64().unwrap() >= 1);

    let o = qwalk(dir.path(), &["analyze", "--matrix", "m.json", "--eps", "0.01", "--out", "a.json"]);
    assert!(o.status.success());
    let o = qwalk(dir.path(), &["report", "a.json", "s.json", "--csv", "r.csv"]);
    assert!(o.status.success());
    let md = String::from_utf8(o.stdout).unwrap();
    assert!(md.starts_with("| graph | δ | τ_mix | τ′_mix | α | T′ |"));
    assert!(md.contains("| torus(5,2) |"));
    let csv = std::fs::read_to_string(dir.path().join("r.csv")).unwrap();
    assert!(csv.starts_with("graph,delta,tau_mix,tau_prime_mix,alpha,t_prime"));
}

#[test]
fn matrix_json_is_stable_across_reload() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path(), "complete", "n=7,self_loops=false", "m.json");
    let first = std::fs::read_to_string(dir.path().join("m.json")).unwrap();
    let tol = qwalk_core::Tolerances::default();
    let p = qwalk_core::io::parse_matrix_json(&first, &tol).unwrap();
    assert_eq!(qwalk_core::io::matrix_to_json(&p).unwrap(), first);
}

#[test]
fn trotter_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path(), "cycle", "n=5", "m.json");
    let o = qwalk(dir.path(), &["trotter", "--matrix", "m.json", "--t", "1.0", "--j", "4,8", "--out", "t.csv"]);
    assert!(o.status.success());
    let csv = std::fs::read_to_string(dir.path().join("t.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.starts_with("j,error_2norm,bound"));

    generate(dir.path(), "complete", "n=4", "k.json");
    let o = qwalk(dir.path(), &["trotter", "--matrix", "k.json"]);
    assert_eq!(o.status.code(), Some(2));
}
