use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn planmod(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_planmod")).args(args).current_dir(dir).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn complete(n: u32) -> String {
    let edges: Vec<String> = (0..n).flat_map(|u| (u + 1..n).map(move |v| format!("[{u},{v}]"))).collect();
    let vertices: Vec<String> = (0..n).map(|v| v.to_string()).collect();
    format!("{{\"vertices\":[{}],\"edges\":[{}]}}", vertices.join(","), edges.join(","))
}

#[test]
fn oracle_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("k5.json"), complete(5)).unwrap();
    std::fs::write(dir.path().join("k6.json"), complete(6)).unwrap();
    let yes = planmod(&["solve", "k5.json", "--op", "vr", "-k", "1", "--phi", "true", "--oracle"], dir.path());
    assert_eq!(code(&yes), 0);
    let report: Value = serde_json::from_slice(&yes.stdout).unwrap();
    assert_eq!(report["answer"], "YES");
    assert_eq!(report["witness"]["op"], "vr");
    let no = planmod(&["solve", "k6.json", "--op", "vr", "-k", "1", "--phi", "true", "--oracle"], dir.path());
    assert_eq!(code(&no), 1);
    let er = planmod(&["solve", "k5.json", "--op", "er", "-k", "1", "--oracle"], dir.path());
    assert_eq!(code(&er), 0);
}

#[test]
fn bad_input_exits_two_with_a_position() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), "{\"vertices\": [0, 1").unwrap();
    let out = planmod(&["solve", "bad.json"], dir.path());
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("parse error"));
    std::fs::write(dir.path().join("k5.json"), complete(5)).unwrap();
    let out = planmod(&["solve", "k5.json", "--phi", "exists x. (x in R"], dir.path());
    assert_eq!(code(&out), 2);
    let out = planmod(&["solve", "k5.json", "--op", "xx"], dir.path());
    assert_eq!(code(&out), 2);
    // Plain first-order sentences need the oracle.
    let out = planmod(&["solve", "k5.json", "--phi", "exists x. x in R"], dir.path());
    assert_eq!(code(&out), 2);
    let out = planmod(&["solve", "k5.json", "--phi", "exists x. x in R", "--oracle"], dir.path());
    assert_eq!(code(&out), 0);
}

#[test]
fn cap_errors_name_the_flag() {
    let dir = tempfile::tempdir().unwrap();
    let path = r#"{"vertices":[0,1,2,3,4,5],"edges":[[0,1],[1,2],[2,3],[3,4],[4,5]]}"#;
    std::fs::write(dir.path().join("p6.json"), path).unwrap();
    let out = planmod(&["solve", "p6.json", "--op", "ea", "-k", "2", "--oracle", "--cap-enum", "10"], dir.path());
    assert_eq!(code(&out), 2);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["error"].as_str().unwrap().contains("--cap-enum"));
}

#[test]
fn pipeline_reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let star = planmod(&["gen", "k5star", "-r", "2", "--out", "star.json"], dir.path());
    assert_eq!(code(&star), 0);
    let args = ["solve", "star.json", "--op", "vr", "-k", "1", "--out"];
    let a = planmod(&[&args[..], &["a.json"]].concat(), dir.path());
    let b = planmod(&[&args[..], &["b.json"]].concat(), dir.path());
    assert_eq!((code(&a), code(&b)), (0, 0));
    let ra = std::fs::read(dir.path().join("a.json")).unwrap();
    assert_eq!(ra, std::fs::read(dir.path().join("b.json")).unwrap());
    let report: Value = serde_json::from_slice(&ra).unwrap();
    assert_eq!(report["trace"][0]["outcome"], "obligatory-vertex");
    assert_eq!(report["oracle_agrees"], true);
}

#[test]
fn annotated_gaifman_input() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("k5.json"), complete(5)).unwrap();
    std::fs::write(dir.path().join("r.json"), "[0, 1]").unwrap();
    let phi = r#"{"basics":[{"ell":2,"r":1,"psi":"x = x"}],"combination":"1","annotated":true}"#;
    std::fs::write(dir.path().join("phi.json"), phi).unwrap();
    // Deleting one vertex of K5 leaves a planar K4; two far annotated
    // vertices never exist in it.
    let out = planmod(&["solve", "k5.json", "-k", "1", "--gaifman", "phi.json", "--annotated", "r.json"], dir.path());
    assert_eq!(code(&out), 1, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn generators_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = planmod(&["gen", "wall", "--height", "7", "--seed", "3"], dir.path());
    let b = planmod(&["gen", "wall", "--height", "7", "--seed", "3"], dir.path());
    assert_eq!(a.stdout, b.stdout);
    let plain = planmod(&["gen", "wall", "--height", "7", "--max-subdivision", "0"], dir.path());
    let g: Value = serde_json::from_slice(&plain.stdout).unwrap();
    assert_eq!(g["vertices"].as_array().unwrap().len(), 2 * 49 - 2);
    let tri = planmod(&["gen", "tri-grid", "-k", "5"], dir.path());
    let g: Value = serde_json::from_slice(&tri.stdout).unwrap();
    assert_eq!(g["vertices"].as_array().unwrap().len(), 25);
    let dot = planmod(&["gen", "grid", "-k", "3", "--dot"], dir.path());
    assert!(String::from_utf8_lossy(&dot.stdout).starts_with("graph"));
}

#[test]
fn check_runs_a_suite() {
    let dir = tempfile::tempdir().unwrap();
    let out = planmod(&["check", "gluing", "--seed", "7", "-n", "20", "--out", "report.json"], dir.path());
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("20/20"));
    let report: Value = serde_json::from_slice(&std::fs::read(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report[0]["passed"], 20);
    assert_eq!(code(&planmod(&["check", "nonsense"], dir.path())), 2);
}
