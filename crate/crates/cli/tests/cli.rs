use std::fs;
use std::process::{Command, Output};

fn qsphere(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsphere"))
        .args(args)
        .env_remove("QS2_TRUNCATION")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone())
        .unwrap()
        .trim()
        .to_string()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = qsphere(args);
    assert!(o.status.success(), "{args:?}: {}", stderr(&o));
    stdout(&o)
}

#[test]
fn normalize_and_mul() {
    assert_eq!(ok(&["normalize", "x1*xm1"]), "(1/q^2)*x0^2 + (1/q)*x0");
    assert_eq!(ok(&["mul", "x1", "xm1"]), "(1/q^2)*x0^2 + (1/q)*x0");
    assert_eq!(ok(&["normalize", "q^2*x0*xm1 - xm1*x0"]), "0");
}

#[test]
fn automorphism() {
    assert_eq!(ok(&["aut", "--twist", "q^-2", "xm1"]), "(q^2)*xm1");
    assert_eq!(ok(&["aut", "--twist", "5", "x0"]), "x0");
}

#[test]
fn fundamental_class_values() {
    assert_eq!(ok(&["phi", "--chain", "fundamental"]), "1");
    assert_eq!(
        ok(&["phi", "--variant", "cap", "--chain", "fundamental"]),
        "1"
    );
    assert_eq!(ok(&["h2class", "--chain", "fundamental"]), "1");
    assert_eq!(ok(&["boundary", "--chain", "fundamental", "--render"]), "0");
}

#[test]
fn chain_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let p: Vec<String> = (1..=3)
        .map(|i| {
            dir.path()
                .join(format!("t{i}.json"))
                .to_str()
                .unwrap()
                .to_string()
        })
        .collect();
    ok(&["cyclic", "--chain", "fundamental", "--out", &p[0]]);
    ok(&["cyclic", "--chain", &p[0], "--out", &p[1]]);
    ok(&["cyclic", "--chain", &p[1], "--out", &p[2]]);
    // the fundamental class has weight 0, so t^3 acts trivially and t^4 = t
    assert_eq!(
        ok(&["cyclic", "--chain", &p[2], "--render"]),
        ok(&["cyclic", "--chain", "fundamental", "--render"])
    );
    assert_eq!(ok(&["h2class", "--chain", &p[2]]), "1");
    assert_eq!(ok(&["phi", "--chain", &p[2]]), "1");
    assert_eq!(ok(&["boundary", "--chain", &p[2], "--render"]), "0");
    // t alone does not preserve cycles in the twisted complex
    assert_ne!(ok(&["boundary", "--chain", &p[0], "--render"]), "0");
}

#[test]
fn cap_and_cup_eval() {
    assert_eq!(ok(&["cup-eval", "--cochain", "d1", "xm1"]), "0");
    assert_eq!(ok(&["cup-eval", "--cochain", "d0", "x1"]), "x1");
    assert_eq!(ok(&["cup-eval", "--cochain", "x0^2"]), "x0^2");
    let out = ok(&[
        "cap",
        "--chain",
        "fundamental",
        "--cochain",
        "d0",
        "--render",
    ]);
    assert_ne!(out, "0");
}

#[test]
fn traces_and_h0() {
    assert_eq!(ok(&["trace", "--label", "x1", "--twist", "1", "x1"]), "1");
    assert_eq!(ok(&["trace", "--label", "x1", "--twist", "1", "xm1"]), "0");
    assert_eq!(ok(&["trace", "--label", "1", "--twist", "1", "x0"]), "0");
    assert_eq!(ok(&["h0", "--twist", "1", "x1"]), "[x1]");
}

#[test]
fn bad_input_is_reported() {
    let o = qsphere(&["h0", "--twist", "foo", "x0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("twist"));

    let o = qsphere(&["trace", "--label", "x1", "--twist", "q^2", "x1"]);
    assert_eq!(o.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{bad").unwrap();
    let o = qsphere(&["phi", "--chain", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("malformed chain"));

    let o = qsphere(&[
        "phi",
        "--chain",
        dir.path().join("missing").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));

    let o = qsphere(&["normalize", "x0/x1"]);
    assert_eq!(o.status.code(), Some(2));

    let o = qsphere(&["cyclic-check", "--functional", "nope"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn cyclic_check_reports() {
    let out = ok(&[
        "cyclic-check",
        "--functional",
        "phi-plus-eta-corrected",
        "--truncation",
        "2,2",
    ]);
    assert!(
        out.starts_with("phi-plus-eta-corrected: cyclic on "),
        "{out}"
    );
    let o = Command::new(env!("CARGO_BIN_EXE_qsphere"))
        .args(["cyclic-check", "--functional", "phi-plus-eta"])
        .env("QS2_TRUNCATION", "2,2")
        .output()
        .unwrap();
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("phi-plus-eta: not cyclic on "), "{out}");
    assert!(out.lines().next().unwrap().ends_with("within 2,2"), "{out}");
    assert!(out.contains("\nt-defect "), "{out}");
}

#[test]
fn verify_exit_codes() {
    let o = qsphere(&["verify", "--suite", "C2,C10", "--truncation", "2,2"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.starts_with("# Verification report"));
    assert!(out.ends_with("2/2 checks passed"), "{out}");

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let o = qsphere(&[
        "verify",
        "--suite",
        "C12",
        "--truncation",
        "2,2",
        "--report",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "0/1");
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["checks"][0]["status"], "fail");

    let o = qsphere(&["verify", "--suite", "C99"]);
    assert_eq!(o.status.code(), Some(2));
}
