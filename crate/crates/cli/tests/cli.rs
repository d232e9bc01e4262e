use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_bourbaki");

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("{e}: {}", self.stdout))
    }
}

fn bourbaki(args: &[&str]) -> Run {
    let Output {
        status,
        stdout,
        stderr,
    } = Command::new(BIN).args(args).output().expect("binary runs");
    Run {
        code: status.code().expect("exited normally"),
        stdout: String::from_utf8(stdout).unwrap(),
        stderr: String::from_utf8(stderr).unwrap(),
    }
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const CHAIN3: &str = r#"{
  "elements": ["0", "1", "2"],
  "relation": [[0, 1], [1, 2]],
  "closure": true,
  "f": [[0, 1], [1, 2], [2, 2]]
}"#;

const DIAMOND: &str = r#"{
  "elements": ["bot", "l", "r", "top"],
  "relation": [[0, 1], [0, 2], [1, 3], [2, 3]],
  "closure": true,
  "f": [[0, 1], [1, 3], [2, 2], [3, 3]],
  "choice": {"rule": "max-index"}
}"#;

const EVERYTHING: &str = r#"{
  "elements": ["p", "q"],
  "relation": [[0, 1]],
  "closure": true,
  "f": [[0, 1], [1, 1]],
  "family": [0, 1, 2, 3],
  "family_map": [[0, 1], [1, 3], [2, 3], [3, 3]],
  "psi": [{"subset": 0, "value": 0}, {"subset": 1, "value": 1}, {"subset": 2, "value": 0}, {"subset": 3, "value": 1}],
  "phi": {"domain": [0, 1], "map": [{"subset": 0, "value": 0}, {"subset": 1, "value": 1}]},
  "choice": {"seeded": 1}
}"#;

#[test]
fn wellorder_with_max_index_reverses_the_carrier() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "wo.json",
        r#"{"elements": ["a", "b", "c"], "choice": {"rule": "max-index"}}"#,
    );
    let run = bourbaki(&["--json", "wellorder", s(&f)]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let cert = run.json();
    assert_eq!(cert["kind"], "wellorder");
    assert_eq!(cert["witness"]["chain"], serde_json::json!([2, 1, 0]));
}

#[test]
fn fixpoint_case_two_on_the_three_chain() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "chain.json", CHAIN3);
    let run = bourbaki(&["--json", "fixpoint", "--case", "2", s(&f)]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let cert = run.json();
    assert_eq!(cert["witness"]["b"], 2);
    assert_eq!(cert["modes"]["fixed_point"], "exact");
    assert_eq!(cert["modes"]["hypothesis"], "exhaustive");
    assert!(cert["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["pass"] == true));
}

#[test]
fn non_transitive_relation_is_malformed() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "nt.json",
        r#"{"elements": ["0", "1", "2"], "relation": [[0, 0], [1, 1], [2, 2], [0, 1], [1, 2]], "closure": false}"#,
    );
    let run = bourbaki(&["check", s(&f)]);
    assert_eq!(run.code, 2);
    assert!(
        run.stderr.contains("NotTransitive(0, 1, 2)"),
        "{}",
        run.stderr
    );
    // the same relation closes fine
    assert_eq!(bourbaki(&["--closure", "check", s(&f)]).code, 0);
}

#[test]
fn missing_fields_are_named() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "bare.json",
        r#"{"elements": ["a", "b"], "relation": [[0, 1]], "closure": true}"#,
    );
    for (args, field) in [
        (vec!["fixpoint", "--case", "2"], "`f`"),
        (vec!["maximal", "--via", "kneser"], "`choice`"),
        (vec!["tb"], "`phi`"),
        (vec!["kanamori"], "`psi`"),
        (vec!["kuratowski"], "`family`"),
        (vec!["wellorder"], "`choice`"),
    ] {
        let mut all = args.clone();
        all.push(s(&f));
        let run = bourbaki(&all);
        assert_eq!(run.code, 2, "{args:?}");
        assert!(run.stderr.contains(field), "{args:?}: {}", run.stderr);
    }
}

#[test]
fn malformed_inputs_exit_two() {
    let dir = TempDir::new().unwrap();
    let cases = [
        r#"{"elements": ["a"], "relation": [[0, 3]], "closure": true}"#,
        r#"{"elements": ["a", "b"], "relation": [], "closure": true, "f": [[0, 1]]}"#,
        r#"{"elements": "oops"}"#,
        "not json",
    ];
    for (i, body) in cases.iter().enumerate() {
        let f = write(&dir, &format!("bad{i}.json"), body);
        let run = bourbaki(&["fixpoint", "--case", "2", s(&f)]);
        assert_eq!(run.code, 2, "{body}: {}", run.stderr);
    }
    let run = bourbaki(&["check", "/definitely/not/here.json"]);
    assert_eq!(run.code, 2);
    assert_eq!(bourbaki(&["fixpoint", "--case", "3", "x.json"]).code, 2);
}

#[test]
fn irrelevant_fields_only_warn() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "all.json", EVERYTHING);
    let run = bourbaki(&["tb", s(&f)]);
    assert_eq!(run.code, 0);
    for field in ["psi", "family", "family_map", "choice", "f"] {
        assert!(
            run.stderr.contains(&format!("ignoring field `{field}`")),
            "{}",
            run.stderr
        );
    }
    assert!(!run.stderr.contains("`phi`"));
}

#[test]
fn unmet_hypothesis_exits_one_with_its_witness() {
    let dir = TempDir::new().unwrap();
    // two incomparable points: no least element, so the empty chain has no supremum
    let f = write(
        &dir,
        "anti.json",
        r#"{"elements": ["x", "y"], "closure": true, "f": [[0, 0], [1, 1]], "start": 0}"#,
    );
    let run = bourbaki(&["--json", "fixpoint", "--case", "2", s(&f)]);
    assert_eq!(run.code, 1);
    let cert = run.json();
    assert!(cert["witness"].is_null());
    assert!(cert["failure"]
        .as_str()
        .unwrap()
        .contains("HypothesisFailed"));
    // f must be inflationary
    let f = write(
        &dir,
        "deflate.json",
        r#"{"elements": ["x", "y"], "relation": [[0, 1]], "closure": true, "f": [[0, 0], [1, 0]]}"#,
    );
    let run = bourbaki(&["fixpoint", "--case", "2", s(&f)]);
    assert_eq!(run.code, 1);
    assert!(run.stdout.contains("NotInflationary(1)"), "{}", run.stdout);
    // a family missing a union
    let f = write(
        &dir,
        "fam.json",
        r#"{"elements": ["p", "q"], "family": [0, 1, 2], "family_map": [[0, 0], [1, 1], [2, 2]]}"#,
    );
    let run = bourbaki(&["kuratowski", s(&f)]);
    assert_eq!(run.code, 1);
    assert!(
        run.stdout.contains("NotUnionClosed([1, 2])"),
        "{}",
        run.stdout
    );
}

#[test]
fn zorn_rejects_the_empty_carrier() {
    // every non-empty finite preorder is inductive; on the empty carrier the
    // empty chain has no upper bound
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "empty.json",
        r#"{"elements": [], "choice": {"rule": "min-index"}}"#,
    );
    let run = bourbaki(&["--json", "maximal", "--via", "zorn", s(&f)]);
    assert_eq!(run.code, 1);
    assert!(run.json()["failure"]
        .as_str()
        .unwrap()
        .contains("NotInductive"));
}

#[test]
fn every_command_succeeds_on_a_good_instance() {
    let dir = TempDir::new().unwrap();
    let diamond = write(&dir, "diamond.json", DIAMOND);
    let everything = write(&dir, "all.json", EVERYTHING);
    let runs: Vec<Vec<&str>> = vec![
        vec!["check", s(&diamond)],
        vec!["check", s(&everything)],
        vec!["fixpoint", "--case", "1", s(&diamond)],
        vec!["fixpoint", "--case", "2", s(&diamond)],
        vec!["maximal", "--via", "kneser", s(&diamond)],
        vec!["maximal", "--via", "zorn", s(&diamond)],
        vec!["wellorder", s(&diamond)],
        vec!["tb", s(&everything)],
        vec!["kanamori", s(&everything)],
        vec!["kuratowski", s(&everything)],
        vec!["equivalence", "--n", "2"],
        vec!["--seed", "7", "equivalence", "--n", "3"],
        vec!["oracle", "preorders", "--n", "3"],
        vec!["oracle", "fixpoints", s(&diamond)],
        vec!["oracle", "maximal", s(&diamond)],
        vec!["oracle", "well-ordered", s(&diamond)],
        vec!["oracle", "tb", s(&everything)],
    ];
    for args in runs {
        let mut json = vec!["--json"];
        json.extend(&args);
        let run = bourbaki(&json);
        assert_eq!(run.code, 0, "{args:?}: {}{}", run.stdout, run.stderr);
        let cert = run.json();
        assert!(!cert["checks"].as_array().unwrap().is_empty(), "{args:?}");
        assert!(!cert["witness"].is_null(), "{args:?}");
        let prose = bourbaki(&args);
        assert_eq!(prose.code, 0);
        assert!(
            prose.stdout.ends_with("result: PASS\n"),
            "{args:?}: {}",
            prose.stdout
        );
    }
}

#[test]
fn subsets_are_masks_in_json_and_lists_in_prose() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "all.json", EVERYTHING);
    let cert = bourbaki(&["--json", "kuratowski", s(&f)]).json();
    assert_eq!(cert["witness"]["member"], 3);
    let prose = bourbaki(&["kuratowski", s(&f)]).stdout;
    assert!(prose.contains("= {0,1}"), "{prose}");
}

#[test]
fn certificates_replay_byte_identically() {
    let dir = TempDir::new().unwrap();
    let diamond = write(&dir, "diamond.json", DIAMOND);
    let everything = write(&dir, "all.json", EVERYTHING);
    let runs: Vec<Vec<&str>> = vec![
        vec!["--json", "fixpoint", "--case", "1", s(&diamond)],
        vec![
            "--json",
            "--closure",
            "maximal",
            "--via",
            "zorn",
            s(&diamond),
        ],
        vec!["--json", "kuratowski", s(&everything)],
        vec!["--json", "kanamori", s(&everything)],
        vec!["--json", "--seed", "3", "equivalence", "--n", "2"],
        vec!["--json", "oracle", "preorders", "--n", "2"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let run = bourbaki(args);
        let cert = write(&dir, &format!("cert{i}.json"), &run.stdout);
        let verify = bourbaki(&["verify", s(&cert)]);
        assert_eq!(
            verify.code, 0,
            "{args:?}: {}{}",
            verify.stdout, verify.stderr
        );
        assert!(verify.stdout.starts_with("verified"));
    }
}

#[test]
fn tampered_certificates_fail_verification() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "chain.json", CHAIN3);
    let run = bourbaki(&["--json", "fixpoint", "--case", "2", s(&f)]);
    let tampered = run.stdout.replace("\"b\": 2", "\"b\": 1");
    assert_ne!(tampered, run.stdout);
    let cert = write(&dir, "cert.json", &tampered);
    let verify = bourbaki(&["verify", s(&cert)]);
    assert_eq!(verify.code, 1);
    assert!(verify.stderr.contains("mismatch"));
    // a failing certificate still replays
    let anti = write(
        &dir,
        "anti.json",
        r#"{"elements": ["x", "y"], "closure": true, "f": [[0, 0], [1, 1]]}"#,
    );
    let failing = bourbaki(&["--json", "fixpoint", "--case", "2", s(&anti)]);
    assert_eq!(failing.code, 1);
    let cert = write(&dir, "failing.json", &failing.stdout);
    assert_eq!(bourbaki(&["verify", s(&cert)]).code, 0);
    // prose is not a certificate
    let prose = write(
        &dir,
        "prose.txt",
        &bourbaki(&["fixpoint", "--case", "2", s(&f)]).stdout,
    );
    assert_eq!(bourbaki(&["verify", s(&prose)]).code, 2);
}

#[test]
fn max_size_lowers_oracle_caps() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "diamond.json", DIAMOND);
    assert_eq!(bourbaki(&["oracle", "well-ordered", s(&f)]).code, 0);
    let run = bourbaki(&["--max-size", "3", "oracle", "well-ordered", s(&f)]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("CarrierTooLarge"));
    assert_eq!(bourbaki(&["oracle", "preorders", "--n", "5"]).code, 2);
}
