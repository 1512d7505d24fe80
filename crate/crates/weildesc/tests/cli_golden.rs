//! End-to-end runs of the `weildesc` binary: golden output bytes,
//! determinism across runs, JSON shape, and exit-code classification.

use std::io::Write;
use std::process::{Command, Output};

use tempfile::NamedTempFile;

const EXAMPLE_JSON: &str = r#"{
  "base": {"vars": ["t"], "derivations": {"d": {"t": "1"}}},
  "extension": {"kind": "minpoly", "gen": "b", "poly": "b^2 - t"},
  "system": {"vars": ["x"], "equations": ["x'"]}
}"#;

const CONSTANT_DELTA_JSON: &str = r#"{
  "base": {"vars": ["t"], "derivations": {"d": {"t": "0"}}},
  "extension": {"kind": "minpoly", "gen": "b", "poly": "b^2 - t"},
  "system": {"vars": ["x"], "equations": ["x'"]}
}"#;

const BROKEN_TABLE_JSON: &str = r#"{
  "base": {"vars": ["t"], "derivations": {"d": {"t": "1"}}},
  "extension": {
    "kind": "table",
    "basis": ["e1", "e2"],
    "mul": [
      [["1", "0"], ["0", "0"]],
      [["0", "0"], ["0", "1"]]
    ],
    "unit": ["1", "1"],
    "delta": {"d": [["0", "0"], ["0", "1"]]}
  },
  "system": {"vars": ["x"], "equations": ["x'"]}
}"#;

fn write_input(contents: &str) -> NamedTempFile {
    let mut file = NamedTempFile::new().unwrap();
    file.write_all(contents.as_bytes()).unwrap();
    file.flush().unwrap();
    file
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weildesc"))
        .args(args)
        .env_remove("WEILDESC_SEED")
        .output()
        .unwrap()
}

#[test]
fn golden_geometric_output() {
    let input = write_input(EXAMPLE_JSON);
    let path = input.path().to_str().unwrap();
    let out = run(&["descend", path, "--geometric"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "d(x_1) = 0\nd(x_2) + (1/(2*t))*x_2 = 0\n"
    );
}

#[test]
fn constant_basis_geometric_output() {
    let input = write_input(CONSTANT_DELTA_JSON);
    let path = input.path().to_str().unwrap();
    let out = run(&["descend", path, "--geometric"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "d(x_1) = 0\nd(x_2) = 0\n"
    );
}

#[test]
fn descend_is_deterministic() {
    let input = write_input(EXAMPLE_JSON);
    let path = input.path().to_str().unwrap();
    for format in ["text", "json"] {
        let first = run(&["descend", path, "--format", format, "--prolong", "1"]);
        let second = run(&["descend", path, "--format", format, "--prolong", "1"]);
        assert_eq!(first.status.code(), Some(0));
        assert_eq!(first.stdout, second.stdout, "format {}", format);
    }
}

#[test]
fn json_output_shape() {
    let input = write_input(EXAMPLE_JSON);
    let path = input.path().to_str().unwrap();
    let out = run(&["descend", path, "--format", "json", "--prolong", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let obj = value.as_object().unwrap();
    assert!(obj.contains_key("generators"));
    assert!(obj.contains_key("derivation_table"));
    assert!(obj.contains_key("geometric"));
    assert!(obj.contains_key("prolonged"));
    let generators = obj["generators"].as_array().unwrap();
    assert_eq!(generators.len(), 2);
    assert_eq!(generators[0]["equation"], 1);
    assert_eq!(generators[0]["component"], 1);
    assert_eq!(generators[0]["poly"], "x.1@[1]");
    let table = obj["derivation_table"].as_array().unwrap();
    assert!(table
        .iter()
        .any(|row| row["var"] == "x.2@[0]" && row["value"] == "x.2@[1] - (1/(2*t))*x.2@[0]"));
    // Without --prolong the key is absent.
    let out = run(&["descend", path, "--format", "json"]);
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(!value.as_object().unwrap().contains_key("prolonged"));
}

#[test]
fn prolonged_text_output() {
    let input = write_input(EXAMPLE_JSON);
    let path = input.path().to_str().unwrap();
    let out = run(&["descend", path, "--prolong", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("# prolonged"), "missing section:\n{}", text);
    assert!(
        text.contains("x.1@[2]"),
        "missing second-order component:\n{}",
        text
    );
}

#[test]
fn output_flag_writes_the_file() {
    let input = write_input(EXAMPLE_JSON);
    let path = input.path().to_str().unwrap();
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("result.txt");
    let out = run(&[
        "descend",
        path,
        "--geometric",
        "--output",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&out_path).unwrap();
    assert_eq!(written, "d(x_1) = 0\nd(x_2) + (1/(2*t))*x_2 = 0\n");
}

#[test]
fn malformed_input_exits_two() {
    let input = write_input("{ not json");
    let path = input.path().to_str().unwrap();
    let out = run(&["descend", path]);
    assert_eq!(out.status.code(), Some(2));

    let input = write_input(
        r#"{
  "base": {"vars": ["t"], "derivations": {"d": {"t": "1"}}},
  "extension": {"kind": "minpoly", "gen": "b", "poly": "b^2 - t"},
  "system": {"vars": ["x"], "equations": ["w'"]}
}"#,
    );
    let path = input.path().to_str().unwrap();
    let out = run(&["descend", path]);
    assert_eq!(
        out.status.code(),
        Some(2),
        "unknown identifier should be an input error"
    );
}

#[test]
fn broken_table_exits_one() {
    let input = write_input(BROKEN_TABLE_JSON);
    let path = input.path().to_str().unwrap();

    // descend refuses to construct the algebra
    let out = run(&["descend", path]);
    assert_eq!(out.status.code(), Some(1));

    // check loads it and reports the violated axiom as a failing suite
    let out = run(&["check", path, "--trials", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.contains("validate_extension: FAIL"),
        "output:\n{}",
        text
    );
}

#[test]
fn check_passes_on_the_example() {
    let input = write_input(EXAMPLE_JSON);
    let path = input.path().to_str().unwrap();
    let out = run(&["check", path, "--trials", "5", "--seed", "1"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "output:\n{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    for suite in [
        "validate_extension",
        "commuting_square",
        "ring_hom",
        "bracket_linearity",
        "oracle_equivalence",
        "correspondence",
    ] {
        assert!(
            text.contains(&format!("{}: pass", suite)),
            "missing {}:\n{}",
            suite,
            text
        );
    }
}

#[test]
fn selftest_passes() {
    let out = run(&["selftest"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.ends_with("selftest: 50 passed, 0 failed\n"),
        "output:\n{}",
        text
    );
}
