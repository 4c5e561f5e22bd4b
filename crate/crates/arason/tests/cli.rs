//! End-to-end tests of the `arason` binary: JSON round trips, exit codes and
//! output determinism.

use std::process::{Command, Output};

fn arason(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arason"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn qform_profile_and_e3() {
    let out = arason(&["qform", "profile", r#"{"diag":[2,3]}"#]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["dim"], 2);
    assert_eq!(v["disc"], -6);
    assert_eq!(v["signature"], 2);

    let out = arason(&["qform", "e3", r#"{"diag":[1,1,1,1,1,1,1,1]}"#]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["e3"], 1);
}

#[test]
fn precondition_violations_exit_1_with_named_invariant() {
    let out = arason(&["qform", "e3", r#"{"diag":[1,3]}"#]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("I^3"), "stderr: {err}");

    let out = arason(&[
        "unitary",
        "rel-e3",
        r#"{"delta":-1,"diag":[1,1,1,1]}"#,
        r#"{"delta":-1,"diag":[1,1,1,-1]}"#,
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(
        err.contains("discriminant algebras differ"),
        "stderr: {err}"
    );
}

#[test]
fn usage_errors_exit_2() {
    let out = arason(&["qform", "e3", r#"{"diag":[1,"#]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(
        err.contains("line") && err.contains("column"),
        "stderr: {err}"
    );

    let out = arason(&["check", "not_a_check"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn emitted_json_round_trips() {
    // the trace form the CLI emits is accepted back by qform subcommands
    let out = arason(&["herm", "trace", r#"{"delta":-3,"diag":[2,5]}"#]);
    assert!(out.status.success());
    let trace = stdout(&out);
    let out = arason(&["qform", "isotropic", trace.trim()]);
    assert!(out.status.success());

    // the theta involution round-trips into rel-e3
    let out = arason(&[
        "unitary",
        "theta",
        r#"{"delta":-1,"diag":[1,2]}"#,
        r#"{"delta":-1,"diag":[1,2]}"#,
        "1",
    ]);
    assert!(out.status.success());
    let theta = stdout(&out);
    let v: serde_json::Value = serde_json::from_str(&theta).unwrap();
    assert_eq!(v["degree"], 4);
    let out = arason(&["unitary", "e3-hyp", theta.trim()]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["value"], 0);
}

#[test]
fn file_inputs_are_accepted() {
    let dir = std::env::temp_dir().join("arason-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("tau.json");
    std::fs::write(&path, r#"{"delta":-1,"degree":4,"diag":[1,1,-1,-1]}"#).unwrap();
    let out = arason(&["unitary", "e3-hyp", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["value"], 0);
}

#[test]
fn check_reports_are_deterministic() {
    // byte-identical up to the wall-clock elapsed_ms field
    let run = || {
        let out = arason(&["check", "order2", "--seed", "7", "--trials", "50"]);
        assert!(out.status.success());
        let mut v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        v["elapsed_ms"] = serde_json::Value::Null;
        v.to_string()
    };
    let a = run();
    let b = run();
    assert_eq!(a, b, "identical argv and seed must give identical reports");
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["trials"], 50);
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
}

#[test]
fn classify_dispatches_on_degree() {
    let out = arason(&[
        "unitary",
        "classify",
        r#"{"delta":-1,"diag":[1,1,1]}"#,
        r#"{"delta":-1,"diag":[1,1,-1]}"#,
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["isomorphic"], false);

    let out = arason(&[
        "unitary",
        "classify",
        r#"{"delta":-1,"diag":[1,1,1,1,1]}"#,
        r#"{"delta":-1,"diag":[1,1,1,1,1]}"#,
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn text_format_renders() {
    let out = arason(&["--format", "text", "qform", "profile", r#"{"diag":[1,-1]}"#]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("dim: 2"), "{text}");
    assert!(text.contains("signature: 0"), "{text}");
}
