//! End-to-end tests for the `hurwitz` binary: report shapes, exact JSON key
//! contracts, exit codes (0 success / 1 invalid input / 2 budget), and
//! byte-level determinism of repeated runs.

use std::io::Write as _;
use std::process::{Command, Output};

use serde_json::Value;

fn hurwitz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hurwitz"))
        .args(args)
        .output()
        .expect("the hurwitz binary runs")
}

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{}", env!("CARGO_MANIFEST_DIR"), name)
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is valid JSON")
}

fn sorted_keys(value: &Value) -> Vec<String> {
    let mut keys: Vec<String> = value
        .as_object()
        .expect("a JSON object")
        .keys()
        .cloned()
        .collect();
    keys.sort();
    keys
}

#[test]
fn describe_reports_group_invariants() {
    let out = hurwitz(&["describe", "--spec", &fixture("s3.json")]);
    let v = stdout_json(&out);
    assert_eq!(v["group"], "S3");
    assert_eq!(v["order"], 6);
    assert_eq!(v["abelian"], false);
    assert_eq!(v["aut_order"], 6);
    assert_eq!(v["abelianization"], serde_json::json!([2]));
    assert_eq!(v["nontrivial_class_ids"], serde_json::json!([1, 2]));
    let classes = v["classes"].as_array().unwrap();
    assert_eq!(classes.len(), 3);
    let mut sizes: Vec<u64> = classes.iter().map(|c| c["size"].as_u64().unwrap()).collect();
    sizes.sort();
    assert_eq!(sizes, [1, 2, 3]);
    assert_eq!(v["provenance"]["command"], "describe");
}

#[test]
fn homology_report_has_exact_keys_and_known_values() {
    let out = hurwitz(&["homology", "--spec", &fixture("z2xz2.json")]);
    let v = stdout_json(&out);
    assert_eq!(
        sorted_keys(&v),
        [
            "H2",
            "H2_gamma",
            "K_gamma_free_rank",
            "K_gamma_torsion",
            "gamma",
            "group",
            "provenance"
        ]
    );
    // H₂(V₄) = ℤ/2; for Γ = ∅, K_∅ has free rank |G| and torsion H₂, and
    // H_{2,∅} = H₂.
    assert_eq!(v["H2"], serde_json::json!([2]));
    assert_eq!(v["gamma"], serde_json::json!([]));
    assert_eq!(v["K_gamma_torsion"], serde_json::json!([2]));
    assert_eq!(v["K_gamma_free_rank"], 4);
    assert_eq!(v["H2_gamma"], serde_json::json!([2]));
}

#[test]
fn homology_echoes_normalized_gamma() {
    let out = hurwitz(&["homology", "--spec", &fixture("s3.json"), "--gamma", "2,1,2"]);
    let v = stdout_json(&out);
    assert_eq!(v["gamma"], serde_json::json!([1, 2]));
    assert_eq!(v["provenance"]["gamma"], "1,2");
}

#[test]
fn classify_json_shape_and_z2_worked_example() {
    let out = hurwitz(&[
        "classify", "--spec", &fixture("z2.json"), "--d", "0", "--genus", "0..3",
    ]);
    let v = stdout_json(&out);
    assert_eq!(sorted_keys(&v), ["d", "group", "provenance", "rows", "stable_from"]);
    assert_eq!(v["d"], 0);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row["genus"], i as u64);
        for key in ["orbits", "per_nu", "per_epsilon", "admissible", "bijection"] {
            assert!(row.get(key).is_some(), "row missing {key}");
        }
    }
    // ℤ/2 unbranched stabilizes to a single orbit, in bijection with the
    // admissible ε̂-classes, within this genus range.
    let top = rows.last().unwrap();
    assert_eq!(top["orbits"], 1);
    assert_eq!(top["bijection"], true);
    let stable = v["stable_from"].as_u64().expect("stabilizes");
    assert!((1..=3).contains(&stable));
}

#[test]
fn classify_csv_mirrors_rows_with_provenance_comments() {
    let out = hurwitz(&[
        "classify", "--spec", &fixture("z2.json"), "--d", "0", "--genus", "0..2",
        "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let mut comments = 0;
    let header = loop {
        let line = lines.next().expect("reaches the CSV header");
        if line.starts_with("# ") {
            comments += 1;
            continue;
        }
        break line;
    };
    assert!(comments >= 5, "expected provenance comments, saw {comments}");
    assert!(text.contains("# command=classify"));
    assert_eq!(
        header,
        "genus,nu,orbits,realized_epsilon,predicted_epsilon,bijection"
    );
    // One data row per (genus, ν̂) pair: ℤ/2, d = 0 has a single ν̂ ([]) at
    // each of the three genera.
    assert_eq!(lines.filter(|l| !l.is_empty()).count(), 3);
}

#[test]
fn text_format_prints_provenance_header() {
    let out = hurwitz(&[
        "homology", "--spec", &fixture("z2.json"), "--format", "text",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("command: homology"));
    assert!(text.contains("H2:"));
}

#[test]
fn generated_table_spec_round_trips() {
    // A spec file produced on the fly (ℤ/5 as a raw multiplication table).
    let table: Vec<Vec<usize>> = (0..5)
        .map(|a| (0..5).map(|b| (a + b) % 5).collect())
        .collect();
    let spec = serde_json::json!({ "name": "Z5", "table": table });
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(file, "{spec}").unwrap();
    let out = hurwitz(&["describe", "--spec", file.path().to_str().unwrap()]);
    let v = stdout_json(&out);
    assert_eq!(v["group"], "Z5");
    assert_eq!(v["order"], 5);
    assert_eq!(v["abelian"], true);
}

#[test]
fn invalid_spec_table_is_rejected() {
    let out = hurwitz(&["describe", "--spec", &fixture("bad_table.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty(), "no report on invalid input");
    assert!(!out.stderr.is_empty());
}

#[test]
fn missing_or_unreadable_spec_is_rejected() {
    let out = hurwitz(&["describe"]);
    assert_eq!(out.status.code(), Some(1));
    let out = hurwitz(&["describe", "--spec", "/nonexistent/group.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
}

#[test]
fn budget_abort_emits_no_partial_output() {
    let out = hurwitz(&[
        "classify", "--spec", &fixture("z2xz2.json"), "--d", "0", "--genus", "0..4",
        "--max-states", "10",
    ]);
    assert_eq!(out.status.code(), Some(2), "budget exhaustion must exit 2");
    assert!(out.stdout.is_empty(), "budget abort must not emit a partial report");
    assert!(!out.stderr.is_empty());
}

#[test]
fn unknown_nu_class_is_rejected() {
    let out = hurwitz(&[
        "classify", "--spec", &fixture("s3.json"), "--d", "2", "--genus", "0..1",
        "--nu", "9:1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("class"));
}

#[test]
fn malformed_inputs_are_rejected() {
    for args in [
        vec!["classify", "--spec", &fixture("z2.json"), "--d", "0", "--genus", "3..1"],
        vec!["classify", "--spec", &fixture("z2.json"), "--d", "0", "--genus", "x"],
        vec!["describe", "--spec", &fixture("z2.json"), "--moves", "braid,bogus"],
        vec!["homology", "--spec", &fixture("z2.json"), "--gamma", "7"],
        vec!["describe", "--spec", &fixture("z2.json"), "--max-states", "0"],
        vec!["describe", "--spec", &fixture("z2.json"), "--bogus-flag"],
    ] {
        let out = hurwitz(&args);
        assert_eq!(out.status.code(), Some(1), "args {args:?} must exit 1");
    }
}

#[test]
fn nu_filter_restricts_classification() {
    let out = hurwitz(&[
        "classify", "--spec", &fixture("s3.json"), "--d", "2", "--genus", "0..1",
        "--nu", "1:2",
    ]);
    let v = stdout_json(&out);
    for row in v["rows"].as_array().unwrap() {
        let per_nu = row["per_nu"].as_object().unwrap();
        assert!(per_nu.len() <= 1, "filter leaves at most one ν̂ per genus");
    }
    // The filter echo is the resolved per-class count vector.
    assert_eq!(v["provenance"]["nu"], "2,0");
}

#[test]
fn move_subset_still_runs() {
    let out = hurwitz(&[
        "classify", "--spec", &fixture("z2.json"), "--d", "2", "--genus", "0..1",
        "--moves", "braid,conj",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["provenance"]["moves"], "braid,conj");
}

#[test]
fn verify_commands_report_pass() {
    let out = hurwitz(&[
        "verify", "epsilon", "--spec", &fixture("z3.json"), "--d", "2", "--max-genus", "1",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["pass"], true);
    assert!(v["states"].as_u64().unwrap() > 0);

    let out = hurwitz(&["verify", "congruences", "--spec", &fixture("z3.json")]);
    let v = stdout_json(&out);
    assert_eq!(v["mode"], "exhaustive");
    assert_eq!(v["pass"], true);

    let out = hurwitz(&[
        "verify", "stabilization", "--spec", &fixture("z2.json"), "--d", "0",
        "--max-genus", "3",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["pass"], true);
    assert_eq!(v["bijection_at_top"], true);

    let out = hurwitz(&[
        "verify", "bijection", "--spec", &fixture("z2.json"), "--d", "0",
        "--max-genus", "3",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["check"], "bijection");
    assert_eq!(v["pass"], true);
}

#[test]
fn sampled_congruences_are_seed_deterministic() {
    // Order 8 > the exhaustive threshold, so this takes the sampled path.
    let args = [
        "verify", "congruences", "--spec", &fixture("d4.json"), "--seed", "42",
    ];
    let a = hurwitz(&args);
    let b = hurwitz(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "same seed must reproduce the same report");
    let v = stdout_json(&a);
    assert_eq!(v["mode"], "sampled");
    assert_eq!(v["provenance"]["seed"], "42");
}

#[test]
fn repeat_runs_are_byte_identical() {
    let args = [
        "classify", "--spec", &fixture("s3.json"), "--d", "1", "--genus", "0..2",
    ];
    let a = hurwitz(&args);
    let b = hurwitz(&args);
    assert!(a.status.success());
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn help_and_version_exit_zero() {
    let out = hurwitz(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("Usage"));
    let out = hurwitz(&["--version"]);
    assert_eq!(out.status.code(), Some(0));
}
