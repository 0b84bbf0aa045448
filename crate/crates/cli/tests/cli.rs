use std::io::Write;
use std::process::{Command, Output};

fn posrep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_posrep")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = posrep(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn construct_text() {
    assert_eq!(
        stdout(&["construct", "A", "3", "--gen", "E3"]).trim(),
        "[u3.1] e(-p3.1)"
    );
    assert_eq!(
        stdout(&["construct", "A", "1", "--gen", "F1"]).trim(),
        "[-u1.1 - 2L1] e(p1.1)"
    );
}

#[test]
fn construct_json_round_trips() {
    let text = stdout(&["construct", "D", "4", "--gen", "E2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["type"], "D4");
    assert_eq!(v["brackets"].as_array().unwrap().len(), 3);
}

#[test]
fn tables() {
    let e6 = stdout(&["tables", "E", "6"]);
    assert!(e6.contains("E: (9,1,11,10,7,5) total 43"), "{e6}");
    assert!(e6.contains("F: (5,4,7,10,8,2) total 36"), "{e6}");
    let d4 = stdout(&["tables", "D", "4"]);
    assert!(d4.contains("total 14") && d4.contains("total 12"), "{d4}");
}

#[test]
fn badword_guard() {
    let out = Command::new(env!("CARGO_BIN_EXE_posrep"))
        .args(["tables", "D", "5", "--badword"])
        .env("POSREP_MAX_TERMS", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("aborted"));
    assert!(stdout(&["tables", "D", "5", "--badword"]).contains("E2: 47"));
}

#[test]
fn transport_rule() {
    let out = stdout(&["transport", "A", "2", "--from", "2,1,2", "--to", "1,2,1", "--gen", "E2"]);
    assert_eq!(out.trim(), "[u1.2] e(-p1.2 - p2.1 + p1.1) + [u2.1 - u1.1] e(-p2.1)");
}

#[test]
fn verify_and_certificates() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&["verify", "A", "3", "--modified"])).unwrap();
    assert!(v.as_array().unwrap().iter().all(|r| r["status"] == "pass"));
    let c: serde_json::Value = serde_json::from_str(&stdout(&["commutant", "A", "2"])).unwrap();
    assert_eq!(c["b_vectors"][0]["b"], serde_json::json!(["2/3", "1/3"]));
    assert_eq!(c["b_vectors"][1]["b"], serde_json::json!(["1/3", "2/3"]));
    let n: serde_json::Value = serde_json::from_str(&stdout(&["normalize-lambda", "A", "1"])).unwrap();
    assert_eq!(n["K"][0], "K1 = e^(pi b (-2u1.1))");
    assert!(stdout(&["weyl", "A", "2", "--node", "2"]).contains("\"pass\""));
    assert_eq!(
        stdout(&["classical", "A", "1", "--gen", "E1"]).trim(),
        "(1/2 + i(-u1.1)) f(u1.1 + i)"
    );
}

#[test]
fn catalog_override() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "# alternative A2 word\nA 2: 1,2,1").unwrap();
    let path = f.path().to_str().unwrap();
    let out = stdout(&["--catalog", path, "tables", "A", "2"]);
    assert!(out.contains("word: 1,2,1"), "{out}");
    assert!(out.contains("E: (1,2) total 3"), "{out}");
}

#[test]
fn errors_exit_nonzero() {
    let out = posrep(&["construct", "A", "3", "--word", "1,1,1,1,1,1", "--gen", "E1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not reduced"));
    assert_eq!(posrep(&["construct", "A", "3", "--gen", "X1"]).status.code(), Some(2));
}
