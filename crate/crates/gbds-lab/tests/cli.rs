//! End-to-end checks of the command-line front end: golden outputs and the
//! exit-code contract (0 success, 1 input error, 2 counterexample).

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gbds-lab"))
        .args(args)
        .current_dir(concat!(env!("CARGO_MANIFEST_DIR"), "/../.."))
        .output()
        .expect("spawn gbds-lab")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn verify_fixture_passes_with_exit_zero() {
    let o = run(&["verify", "--system", "fixtures/fix1.json", "--bound", "6"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("ok (11 checks"), "{out}");
    assert_eq!(out.matches("PASS").count(), 11, "{out}");
}

#[test]
fn algebra_normal_form_matches_golden() {
    let o = run(&[
        "algebra",
        "--system",
        "fixtures/fix1.json",
        "--expr",
        "S{a,[v2]}*s{a,[v2]}",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "p[v2]\n");
}

#[test]
fn algebra_modular_ring_reduces_coefficients() {
    let o = run(&[
        "algebra",
        "--system",
        "fixtures/fix1.json",
        "--ring",
        "mod:3",
        "--expr",
        "5*p[v1]",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "2*p[v1]\n");
}

#[test]
fn stone_dot_output_matches_golden() {
    let o = run(&["stone", "--system", "fixtures/fix1.json", "--format", "dot"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "digraph stone {\n  \"F[v1]\";\n  \"F[v2]\";\n  \"F[v1 v2]\";\n  \
         \"F[v1]\" -> \"F[v2]\" [label=\"a\"];\n  \
         \"F[v1 v2]\" -> \"F[v2]\" [label=\"a\"];\n}\n\n"
    );
}

#[test]
fn stone_json_is_schema_stable() {
    let o = run(&[
        "stone",
        "--system",
        "fixtures/fix1.json",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["vertices"].as_array().unwrap().len(), 3);
    assert_eq!(v["edges"].as_array().unwrap().len(), 2);
    assert_eq!(v["labels"], serde_json::json!(["a"]));
}

#[test]
fn verify_json_report_is_schema_stable() {
    let o = run(&[
        "verify",
        "--system",
        "fixtures/fix2.json",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["command"], "verify");
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 11);
    assert!(checks.iter().all(|c| c["passed"] == true));
}

#[test]
fn from_labelled_reconstructs_a_system() {
    let o = run(&[
        "from-labelled",
        "--system",
        "fixtures/space1.json",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["ground_set"], serde_json::json!(["u", "w"]));
    assert_eq!(v["theta"]["a"]["u"], serde_json::json!(["w"]));
    assert_eq!(v["J"], "all_regular");
}

#[test]
fn missing_file_is_an_input_error_without_stack_trace() {
    let o = run(&["verify", "--system", "no-such-file.json"]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.starts_with("error:"), "{err}");
    assert!(!err.contains("panicked"), "{err}");
    assert!(stdout(&o).is_empty());
}

#[test]
fn malformed_expression_is_an_input_error() {
    let o = run(&["algebra", "--system", "fixtures/fix1.json", "--expr", "p["]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error:"));
}

#[test]
fn invalid_ring_and_format_are_input_errors() {
    let o = run(&[
        "algebra",
        "--system",
        "fixtures/fix1.json",
        "--ring",
        "mod:1",
        "--expr",
        "p[v1]",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&[
        "verify",
        "--system",
        "fixtures/fix1.json",
        "--format",
        "dot",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("dot output"));
}

#[test]
fn desingularize_relative_system_is_an_input_error() {
    let o = run(&["desingularize", "--system", "fixtures/fix1_jempty.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error:"), "{}", stderr(&o));
}

#[test]
fn fixture_documents_reparse_canonically() {
    for f in ["fix1", "fix1_jempty", "fix2"] {
        let o = run(&[
            "info",
            "--system",
            &format!("fixtures/{f}.json"),
            "--format",
            "json",
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let reserialized: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        let on_disk: serde_json::Value = serde_json::from_str(
            &std::fs::read_to_string(format!(
                concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/{}.json"),
                f
            ))
            .unwrap(),
        )
        .unwrap();
        assert_eq!(reserialized, on_disk, "{f} is not in canonical form");
    }
}
