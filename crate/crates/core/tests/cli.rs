use std::path::Path;
use std::process::{Command, Output};

use selmon::herbrand::{generate_instance, DnsBounds};
use serde_json::Value as Json;

fn selmon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_selmon"))
        .args(args)
        .env_remove("SELMON_SEED")
        .output()
        .expect("spawn selmon")
}

fn stdout_json(out: &Output) -> Json {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn check<'a>(report: &'a Json, law: &str) -> &'a Json {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["law"] == law)
        .unwrap_or_else(|| panic!("no check {law}"))
}

/// An instance with at least one `φ` member, as JSON.
fn instance_with_phi() -> Json {
    (0..)
        .map(|seed| generate_instance(seed, &DnsBounds::default()).unwrap())
        .find(|i| !i.phi().is_empty())
        .unwrap()
        .to_json()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn missing_instance_file_is_an_error() {
    let out = selmon(&["dns-verify", "/nonexistent/instance.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("i/o error"), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
}

#[test]
fn truncated_instance_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let body = instance_with_phi().to_string();
    let path = write(dir.path(), "cut.json", &body[..body.len() / 2]);
    let out = selmon(&["dns-verify", &path]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("parse error"), "{}", stderr(&out));
}

#[test]
fn out_of_range_phi_names_the_member() {
    let dir = tempfile::tempdir().unwrap();
    let mut inst = instance_with_phi();
    let big = inst["B"].as_u64().unwrap() + 1;
    inst["phi"][0]["table"][0][1] = serde_json::json!({"set": [big]});
    let path = write(dir.path(), "phi.json", &inst.to_string());
    let out = selmon(&["dns-verify", &path]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("invariant violated at $.phi[0]"), "{err}");
}

#[test]
fn generated_instance_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "ok.json", &instance_with_phi().to_string());
    let out = selmon(&["dns-verify", &path]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report = stdout_json(&out);
    assert_eq!(report["command"], "dns-verify");
    assert_eq!(report["passed"], true);
}

#[test]
fn laws_pass_and_report_names_checks() {
    let out = selmon(&["laws"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report = stdout_json(&out);
    assert_eq!(report["passed"], true);
    assert_eq!(
        check(&report, "monad/powerset(2,2,2)/assoc")["passed"],
        true
    );
    assert!(report.get("timings").is_none());
}

#[test]
fn unknown_command_and_bad_flags_exit_two() {
    assert_eq!(selmon(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(selmon(&["laws", "--seed", "x"]).status.code(), Some(2));
    assert_eq!(selmon(&["laws", "--bounds", "huge"]).status.code(), Some(2));
    assert_eq!(selmon(&["laws", "--jobs", "0"]).status.code(), Some(2));
    assert_eq!(selmon(&["--help"]).status.code(), Some(0));
}

#[test]
fn cases_flag_overrides_sample_counts() {
    let out = selmon(&["dns-random", "--cases", "7", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report = stdout_json(&out);
    assert_eq!(report["seed"], 3);
    assert_eq!(check(&report, "dns/implication")["cases"], 7);
}

#[test]
fn bounds_file_merges_over_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "b.json",
        r#"{"dns": {"cases": 5}, "lemma_cases": 4}"#,
    );
    let out = selmon(&["dns-random", "--bounds", &path]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report = stdout_json(&out);
    assert_eq!(report["bounds"]["dns"]["cases"], 5);
    assert_eq!(report["bounds"]["dns"]["moves"], 2);
    let lemma = check(&report, "dns/lemma/prefix_decomp");
    assert_eq!(
        lemma["cases"].as_u64().unwrap() + lemma["skipped"].as_u64().unwrap(),
        4
    );

    let bad = write(dir.path(), "bad.json", r#"{"dns": {"moves": 0}}"#);
    assert_eq!(
        selmon(&["dns-random", "--bounds", &bad]).status.code(),
        Some(2)
    );
}

#[test]
fn out_flag_writes_the_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.json");
    let out = selmon(&[
        "equiv",
        "--bounds",
        "small",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    let report: Json = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(check(&report, "equiv/hbr_teps/powerset")["cases"], 20);
}

#[test]
fn seed_changes_samples_but_repeats_are_identical() {
    let run = |seed: &str| selmon(&["dns-random", "--bounds", "small", "--seed", seed]).stdout;
    assert_eq!(run("5"), run("5"));
    assert_ne!(run("5"), run("6"));
}

#[test]
fn timings_are_opt_in() {
    let out = selmon(&["equiv", "--bounds", "small", "--timings"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_json(&out)["timings"]["equiv"].is_number());
}
