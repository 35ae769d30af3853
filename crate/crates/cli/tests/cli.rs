//! End-to-end tests driving the compiled binary: exit codes, report
//! contents, emitted documents, determinism, and the seed fallback.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn run_in(dir: &Path, args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_kframe"));
    cmd.current_dir(dir);
    cmd.env_remove("KFRAME_SEED");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.args(args);
    cmd.output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "expected success, got {:?}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is a report document")
}

fn write_file(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

/// An orthonormal basis listed twice over the signature (+, +, -): a J-frame
/// with excess 3 whose two-sided frame bounds are exactly 2.
fn doubled_basis_json() -> &'static str {
    r#"{
  "schema_version": "kframe/1",
  "signature": [1, 1, -1],
  "vectors": [
    [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]],
    [[0.0, 0.0], [1.0, 0.0], [0.0, 0.0]],
    [[0.0, 0.0], [0.0, 0.0], [1.0, 0.0]],
    [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]],
    [[0.0, 0.0], [1.0, 0.0], [0.0, 0.0]],
    [[0.0, 0.0], [0.0, 0.0], [1.0, 0.0]]
  ],
  "labels": ["e1", "e2", "e3", "e1-again", "e2-again", "e3-again"]
}"#
}

/// A dual of the doubled basis whose positive-sign vectors span the whole
/// space, so it is not itself a J-frame.
fn skew_dual_json() -> &'static str {
    r#"{
  "schema_version": "kframe/1",
  "signature": [1, 1, -1],
  "vectors": [
    [[0.5, 0.0], [0.5, 0.0], [-0.5, 0.0]],
    [[1.0, 0.0], [0.5, 0.0], [-1.0, 0.0]],
    [[0.0, 0.0], [0.0, 0.0], [0.5, 0.0]],
    [[0.5, 0.0], [-0.5, 0.0], [0.5, 0.0]],
    [[-1.0, 0.0], [0.5, 0.0], [1.0, 0.0]],
    [[0.0, 0.0], [0.0, 0.0], [0.5, 0.0]]
  ]
}"#
}

/// Contains the neutral vector (1, 1) over the signature (+, -).
fn neutral_vector_json() -> &'static str {
    r#"{
  "schema_version": "kframe/1",
  "signature": [1, -1],
  "vectors": [
    [[1.0, 0.0], [1.0, 0.0]],
    [[1.0, 0.0], [0.0, 0.0]],
    [[0.0, 0.0], [1.0, 0.0]]
  ]
}"#
}

#[test]
fn inspect_classifies_the_doubled_basis() {
    let dir = TempDir::new().unwrap();
    let path = write_file(dir.path(), "f.json", doubled_basis_json());
    let out = run_in(dir.path(), &["inspect", path.to_str().unwrap()], &[]);
    let rep = report(&out);
    let v = &rep["verdicts"];
    assert_eq!(v["family.is_jframe"], Value::Bool(true));
    assert_eq!(v["family.excess"], Value::from(3));
    assert_eq!(v["spans.plus_class"], "uniformly_positive");
    assert_eq!(v["spans.minus_class"], "uniformly_negative");
    for key in [
        "bounds.plus.lower",
        "bounds.plus.upper",
        "bounds.minus.lower",
        "bounds.minus.upper",
    ] {
        let b = v[key].as_f64().unwrap();
        assert!((b - 2.0).abs() < 1e-9, "{key} = {b}");
    }
    assert_eq!(v["kernel.splits"], Value::Bool(true));
    assert_eq!(rep["tolerances"]["rtol"].as_f64().unwrap(), 1e-9);
    assert_eq!(rep["tolerances"]["residual_tol"].as_f64().unwrap(), 1e-8);
}

#[test]
fn inspect_reports_neutral_vectors_without_failing() {
    let dir = TempDir::new().unwrap();
    let path = write_file(dir.path(), "n.json", neutral_vector_json());
    let out = run_in(dir.path(), &["inspect", path.to_str().unwrap()], &[]);
    let rep = report(&out);
    assert_eq!(rep["verdicts"]["family.is_jframe"], Value::Bool(false));
    assert_eq!(rep["verdicts"]["family.near_neutral"], Value::from(vec![0]));
    assert!(
        !rep["verdicts"]["diagnostics"]
            .as_array()
            .unwrap()
            .is_empty(),
        "a neutral vector must leave a diagnostic"
    );
}

#[test]
fn parse_failures_exit_two_with_empty_stdout() {
    let dir = TempDir::new().unwrap();
    let bad = write_file(dir.path(), "bad.json", "{ not json");
    let out = run_in(dir.path(), &["inspect", bad.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());

    let short = write_file(
        dir.path(),
        "short.json",
        r#"{ "schema_version": "kframe/1", "signature": [1, -1], "vectors": [[[1.0, 0.0]]] }"#,
    );
    let out = run_in(dir.path(), &["inspect", short.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(2));

    let out = run_in(dir.path(), &["inspect", "missing.json"], &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dual_accepts_the_skew_dual_but_rejects_it_as_a_jframe_dual() {
    let dir = TempDir::new().unwrap();
    let f = write_file(dir.path(), "f.json", doubled_basis_json());
    let g = write_file(dir.path(), "g.json", skew_dual_json());
    let out = run_in(
        dir.path(),
        &["dual", f.to_str().unwrap(), g.to_str().unwrap()],
        &[],
    );
    let rep = report(&out);
    let v = &rep["verdicts"];
    assert_eq!(v["dual.is_dual"], Value::Bool(true));
    assert_eq!(v["dual.is_jframe_dual"], Value::Bool(false));
    assert_eq!(v["dual.span_plus_dim"], Value::from(3));
    assert_eq!(rep["inputs"].as_array().unwrap().len(), 2);
}

#[test]
fn canonical_dual_halves_the_doubled_basis() {
    let dir = TempDir::new().unwrap();
    let f = write_file(dir.path(), "f.json", doubled_basis_json());
    let out = run_in(
        dir.path(),
        &[
            "dual",
            f.to_str().unwrap(),
            "--canonical",
            "--output",
            "g.json",
        ],
        &[],
    );
    let rep = report(&out);
    assert_eq!(rep["verdicts"]["dual.is_dual"], Value::Bool(true));
    assert_eq!(rep["verdicts"]["dual.is_jframe_dual"], Value::Bool(true));

    // The J-frame operator is 2I, so the canonical dual halves each vector.
    let doc: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("g.json")).unwrap()).unwrap();
    let vectors = doc["vectors"].as_array().unwrap();
    assert_eq!(vectors.len(), 6);
    for (i, vec) in vectors.iter().enumerate() {
        for (k, pair) in vec.as_array().unwrap().iter().enumerate() {
            let re = pair[0].as_f64().unwrap();
            let expected = if i % 3 == k { 0.5 } else { 0.0 };
            assert!((re - expected).abs() < 1e-12, "vector {i} entry {k}");
        }
    }

    // Verifying the emitted file against the reference closes the loop.
    let out = run_in(dir.path(), &["dual", f.to_str().unwrap(), "g.json"], &[]);
    let rep = report(&out);
    assert_eq!(rep["verdicts"]["dual.is_jframe_dual"], Value::Bool(true));
}

#[test]
fn random_duals_never_beat_the_canonical_energy() {
    let dir = TempDir::new().unwrap();
    let f = write_file(dir.path(), "f.json", doubled_basis_json());
    let out = run_in(
        dir.path(),
        &["dual", f.to_str().unwrap(), "--random", "5", "--seed", "7"],
        &[],
    );
    let rep = report(&out);
    assert_eq!(rep["seed"], Value::from(7));
    assert_eq!(rep["verdicts"]["minimal_norm.pass"], Value::Bool(true));
    assert_eq!(rep["verdicts"]["minimal_norm.dual_count"], Value::from(5));
    let margin = rep["residuals"]["minimal_norm.worst_margin"]
        .as_f64()
        .unwrap();
    assert!(margin >= -1e-8, "worst margin {margin}");
}

#[test]
fn dual_of_a_non_jframe_is_a_precondition_failure() {
    let dir = TempDir::new().unwrap();
    let n = write_file(dir.path(), "n.json", neutral_vector_json());
    let out = run_in(
        dir.path(),
        &[
            "dual",
            n.to_str().unwrap(),
            "--canonical",
            "--output",
            "g.json",
        ],
        &[],
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
}

#[test]
fn parseval_check_rejects_the_doubled_basis_consistently() {
    let dir = TempDir::new().unwrap();
    let f = write_file(dir.path(), "f.json", doubled_basis_json());
    let out = run_in(
        dir.path(),
        &["parseval", f.to_str().unwrap(), "--check"],
        &[],
    );
    let rep = report(&out);
    let v = &rep["verdicts"];
    assert_eq!(v["parseval.is_parseval"], Value::Bool(false));
    assert_eq!(v["parseval.verdicts_agree"], Value::Bool(true));
    // S = 2I, so the identity deviation is exactly 1.
    let dev = rep["residuals"]["parseval.identity_deviation"]
        .as_f64()
        .unwrap();
    assert!((dev - 1.0).abs() < 1e-9, "identity deviation {dev}");
}

#[test]
fn canonical_parseval_passes_its_own_check_and_dilates() {
    let dir = TempDir::new().unwrap();
    let f = write_file(dir.path(), "f.json", doubled_basis_json());
    let out = run_in(
        dir.path(),
        &[
            "parseval",
            f.to_str().unwrap(),
            "--canonical",
            "--output",
            "p.json",
        ],
        &[],
    );
    let rep = report(&out);
    assert_eq!(rep["verdicts"]["canonical.is_parseval"], Value::Bool(true));
    assert_eq!(
        rep["verdicts"]["canonical.signs_preserved"],
        Value::Bool(true)
    );

    let out = run_in(dir.path(), &["parseval", "p.json", "--check"], &[]);
    let rep = report(&out);
    assert_eq!(rep["verdicts"]["parseval.is_parseval"], Value::Bool(true));

    let out = run_in(
        dir.path(),
        &["parseval", "p.json", "--dilate", "--output", "d.json"],
        &[],
    );
    let rep = report(&out);
    assert_eq!(rep["verdicts"]["dilation.big_dim"], Value::from(6));
    assert_eq!(
        rep["verdicts"]["dilation.rank_matches_dim"],
        Value::Bool(true)
    );
    let recovery = rep["residuals"]["dilation.recovery_defect"]
        .as_f64()
        .unwrap();
    assert!(recovery < 1e-10, "recovery defect {recovery}");

    let doc: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("d.json")).unwrap()).unwrap();
    assert_eq!(doc["schema_version"], "kframe-dilation/1");
    let signature = doc["signature"].as_array().unwrap();
    assert_eq!(signature.len(), 6);
    let negatives = signature.iter().filter(|s| s.as_i64() == Some(-1)).count();
    assert_eq!(negatives, 2);
    assert_eq!(doc["basis_columns"].as_array().unwrap().len(), 6);
    assert_eq!(doc["projection_rows"].as_array().unwrap().len(), 6);
}

#[test]
fn dilating_a_non_parseval_family_is_a_precondition_failure() {
    let dir = TempDir::new().unwrap();
    let f = write_file(dir.path(), "f.json", doubled_basis_json());
    let out = run_in(
        dir.path(),
        &[
            "parseval",
            f.to_str().unwrap(),
            "--dilate",
            "--output",
            "d.json",
        ],
        &[],
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(!dir.path().join("d.json").exists());
}

#[test]
fn generate_produces_verifiable_families() {
    let dir = TempDir::new().unwrap();
    // Zero excess: vector counts equal the signature dimensions.
    let out = run_in(
        dir.path(),
        &[
            "generate",
            "--dim",
            "3",
            "--signature",
            "++-",
            "--n-plus",
            "2",
            "--n-minus",
            "1",
            "--seed",
            "3",
            "--output",
            "zero.json",
        ],
        &[],
    );
    let rep = report(&out);
    assert_eq!(rep["verdicts"]["generated.excess"], Value::from(0));

    let out = run_in(
        dir.path(),
        &[
            "generate",
            "--signature",
            "++-",
            "--n-plus",
            "4",
            "--n-minus",
            "2",
            "--seed",
            "3",
            "--output",
            "excess.json",
        ],
        &[],
    );
    let rep = report(&out);
    assert_eq!(rep["verdicts"]["generated.excess"], Value::from(3));

    let out = run_in(dir.path(), &["inspect", "excess.json"], &[]);
    let rep = report(&out);
    assert_eq!(rep["verdicts"]["family.is_jframe"], Value::Bool(true));
    assert_eq!(rep["verdicts"]["family.excess"], Value::from(3));
}

#[test]
fn generate_honors_interleaved_signatures() {
    let dir = TempDir::new().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "generate",
            "--signature",
            "+-+",
            "--n-plus",
            "3",
            "--n-minus",
            "1",
            "--seed",
            "9",
            "--output",
            "mixed.json",
        ],
        &[],
    );
    report(&out);
    let doc: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("mixed.json")).unwrap())
            .unwrap();
    assert_eq!(doc["signature"], serde_json::json!([1, -1, 1]));

    let out = run_in(dir.path(), &["inspect", "mixed.json"], &[]);
    let rep = report(&out);
    assert_eq!(rep["verdicts"]["family.is_jframe"], Value::Bool(true));
}

#[test]
fn infeasible_generation_requests_exit_three() {
    let dir = TempDir::new().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "generate",
            "--signature",
            "++-",
            "--n-plus",
            "1",
            "--n-minus",
            "1",
            "--seed",
            "1",
            "--output",
            "x.json",
        ],
        &[],
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(!dir.path().join("x.json").exists());

    // A dimension flag disagreeing with the signature is a parse error.
    let out = run_in(
        dir.path(),
        &[
            "generate",
            "--dim",
            "4",
            "--signature",
            "++-",
            "--n-plus",
            "2",
            "--n-minus",
            "1",
            "--output",
            "x.json",
        ],
        &[],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn generation_is_reproducible_and_reads_the_seed_env() {
    let dir = TempDir::new().unwrap();
    let args = |out: &'static str| {
        vec![
            "generate",
            "--signature",
            "++-",
            "--n-plus",
            "3",
            "--n-minus",
            "2",
            "--output",
            out,
        ]
    };
    let mut flagged = args("a.json");
    flagged.extend(["--seed", "5"]);
    let rep_a = report(&run_in(dir.path(), &flagged, &[]));
    assert_eq!(rep_a["seed"], Value::from(5));

    let rep_b = report(&run_in(
        dir.path(),
        &args("b.json"),
        &[("KFRAME_SEED", "5")],
    ));
    assert_eq!(rep_b["seed"], Value::from(5));

    let rep_c = report(&run_in(dir.path(), &args("c.json"), &[]));
    assert_eq!(rep_c["seed"], Value::from(0));

    let read = |name: &str| std::fs::read(dir.path().join(name)).unwrap();
    assert_eq!(read("a.json"), read("b.json"));
    assert_ne!(read("a.json"), read("c.json"));

    let out = run_in(
        dir.path(),
        &args("x.json"),
        &[("KFRAME_SEED", "not-a-number")],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_differ_only_in_wall_time_between_runs() {
    let dir = TempDir::new().unwrap();
    let f = write_file(dir.path(), "f.json", doubled_basis_json());
    let strip = |mut rep: Value| {
        rep.as_object_mut().unwrap().remove("wall_time_ms");
        rep
    };
    let once = strip(report(&run_in(
        dir.path(),
        &["inspect", f.to_str().unwrap()],
        &[],
    )));
    let twice = strip(report(&run_in(
        dir.path(),
        &["inspect", f.to_str().unwrap()],
        &[],
    )));
    assert_eq!(once, twice);
}

#[test]
fn emitted_documents_are_byte_stable_across_runs() {
    let dir = TempDir::new().unwrap();
    let f = write_file(dir.path(), "f.json", doubled_basis_json());
    for name in ["g1.json", "g2.json"] {
        let out = run_in(
            dir.path(),
            &["dual", f.to_str().unwrap(), "--canonical", "--output", name],
            &[],
        );
        report(&out);
    }
    let read = |name: &str| std::fs::read(dir.path().join(name)).unwrap();
    assert_eq!(read("g1.json"), read("g2.json"));
}

#[test]
fn conflicting_or_missing_mode_flags_exit_two() {
    let dir = TempDir::new().unwrap();
    let f = write_file(dir.path(), "f.json", doubled_basis_json());
    let g = write_file(dir.path(), "g.json", skew_dual_json());

    let out = run_in(
        dir.path(),
        &[
            "dual",
            f.to_str().unwrap(),
            g.to_str().unwrap(),
            "--canonical",
        ],
        &[],
    );
    assert_eq!(out.status.code(), Some(2));

    let out = run_in(
        dir.path(),
        &["dual", f.to_str().unwrap(), "--canonical"],
        &[],
    );
    assert_eq!(out.status.code(), Some(2), "--canonical needs --output");

    let out = run_in(dir.path(), &["parseval", f.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(2), "parseval needs a mode flag");
}

#[test]
fn tolerance_flags_are_honored_and_echoed() {
    let dir = TempDir::new().unwrap();
    let f = write_file(dir.path(), "f.json", doubled_basis_json());
    let out = run_in(
        dir.path(),
        &[
            "inspect",
            f.to_str().unwrap(),
            "--rtol",
            "1e-6",
            "--residual-tol",
            "1e-7",
        ],
        &[],
    );
    let rep = report(&out);
    assert_eq!(rep["tolerances"]["rtol"].as_f64().unwrap(), 1e-6);
    assert_eq!(rep["tolerances"]["residual_tol"].as_f64().unwrap(), 1e-7);
}
