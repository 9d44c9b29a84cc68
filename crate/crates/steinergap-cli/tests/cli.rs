use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_steinergap")).current_dir(dir).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn builtin_gap_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let list = stdout(&run(d, &["builtin", "list"]));
    for name in ["skutella", "oddwheel-7-4-a", "fig4-i"] {
        assert!(list.lines().any(|l| l == name), "{name} missing from list");
    }
    stdout(&run(d, &["builtin", "fig2-a", "--out", "."]));
    for ext in ["point.json", "instance.json", "dot"] {
        assert!(d.join(format!("oddwheel-7-4-a.{ext}")).exists(), "{ext}");
    }
    assert!(stdout(&run(d, &["gap", "fig2-a", "--out", "cert.json"])).starts_with("10/9"));
    assert!(stdout(&run(d, &["gap", "oddwheel-7-4-a.point.json", "--edge-y"])).starts_with("10/9"));
    assert!(stdout(&run(d, &["verify", "cert.json"])).contains("certificate ok: gap 10/9"));

    // a tampered certificate fails verification
    let mut cert: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(d.join("cert.json")).unwrap()).unwrap();
    cert["gap"] = serde_json::Value::String("11/9".into());
    std::fs::write(d.join("bad.json"), cert.to_string()).unwrap();
    assert!(!run(d, &["verify", "bad.json"]).status.success());
}

#[test]
fn solve_reports_every_relaxation() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    stdout(&run(d, &["builtin", "fig2-a", "--out", "."]));
    let out = stdout(&run(d, &["solve", "oddwheel-7-4-a.instance.json", "--mcf"]));
    for line in ["stp: 5 ", "cm: 9/2 ", "ratio: 10/9 ", "mcf: 9/2 "] {
        assert!(out.contains(line), "{line} in {out}");
    }
}

#[test]
fn enumerate_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = stdout(&run(d, &["enumerate", "phi", "7", "4", "--gaps", "--out", "."]));
    assert!(out.contains("max gap 10/9 x2"), "{out}");
    let text = stdout(&run(d, &["report", "catalog-7-4.ndjson"]));
    assert!(text.contains("10/9"));
    let csv = stdout(&run(d, &["report", ".", "--csv"]));
    assert_eq!(csv.lines().nth(1), Some("7,4,2,2,10/9,2"));
}

#[test]
fn closure_of_a_path() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("g.json"), r#"{"n":4,"t":2,"root":1,"edges":[[1,2,"1"],[2,3,"1"],[3,4,"2"]]}"#).unwrap();
    let v: serde_json::Value = serde_json::from_str(&stdout(&run(d, &["closure", "g.json"]))).unwrap();
    assert_eq!(v["costs"][0][3], "4");
    assert_eq!(v["costs"][3][1], "3");
    std::fs::write(d.join("h.json"), r#"{"n":4,"t":2,"root":1,"edges":[[1,2,"1"]]}"#).unwrap();
    assert!(!run(d, &["closure", "h.json"]).status.success());
}

#[test]
fn bad_input_exits_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["gap", "nosuch"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown builtin"));
}
