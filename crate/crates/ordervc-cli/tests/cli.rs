//! End-to-end tests driving the `ordervc` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn ordervc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ordervc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn tmpfile(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("ordervc-cli-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn compat_reports_conflicting_orders() {
    let out = ordervc(&[
        "compat",
        "--a",
        r#"{"n":2,"relations":[[1,2]]}"#,
        "--b",
        r#"{"n":2,"relations":[[2,1]]}"#,
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "false");
}

#[test]
fn compat_accepts_seq_encoding() {
    let out = ordervc(&[
        "compat",
        "--a",
        r#"{"n":3,"seq":[1,2,3]}"#,
        "--b",
        r#"{"n":3,"relations":[]}"#,
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "true");
}

#[test]
fn compat_rejects_cyclic_input_with_usage_exit() {
    let out = ordervc(&[
        "compat",
        "--a",
        r#"{"n":2,"relations":[[1,2],[2,1]]}"#,
        "--b",
        r#"{"n":2,"relations":[]}"#,
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("invalid order"));
}

#[test]
fn compat_rejects_malformed_json() {
    let out = ordervc(&["compat", "--a", "{", "--b", "{}"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("parse error"));
}

#[test]
fn enumerate_counts() {
    let out = ordervc(&["enumerate", "--kind", "partial", "--n", "4", "--count-only"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "219");

    let out = ordervc(&["enumerate", "--kind", "total", "--n", "4", "--count-only"]);
    assert_eq!(stdout(&out).trim(), "24");
}

#[test]
fn enumerate_emits_json_lines() {
    let out = ordervc(&["enumerate", "--kind", "total", "--n", "3"]);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[0], r#"{"n":3,"seq":[1,2,3]}"#);
    assert_eq!(lines[5], r#"{"n":3,"seq":[3,2,1]}"#);

    let out = ordervc(&["enumerate", "--kind", "partial", "--n", "2"]);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 3);
    assert_eq!(text.lines().next().unwrap(), r#"{"n":2,"relations":[]}"#);
}

#[test]
fn enumerate_cap_is_usage_error() {
    let out = ordervc(&["enumerate", "--kind", "partial", "--n", "7"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("cap"));
}

#[test]
fn vc_known_value_n3() {
    let out = ordervc(&[
        "vc",
        "--ground",
        "total",
        "--witness",
        "partial",
        "--n",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("dimension 3"), "{text}");
    assert!(text.contains("search_complete true"), "{text}");
}

#[test]
fn vc_table_format_shows_reference() {
    let out = ordervc(&[
        "vc",
        "--ground",
        "total",
        "--witness",
        "partial",
        "--n",
        "4",
        "--format",
        "table",
    ]);
    let text = stdout(&out);
    assert!(text.contains("floor(n^2/4) = 4"), "{text}");
}

#[test]
fn vc_zero_budget_exits_3() {
    let out = ordervc(&[
        "vc",
        "--ground",
        "total",
        "--witness",
        "partial",
        "--n",
        "4",
        "--budget",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("search_complete false"));
}

#[test]
fn vc_certificate_round_trip_through_check_cert() {
    let cert_path = tmpfile("cert.json");
    let out = ordervc(&[
        "vc",
        "--ground",
        "total",
        "--witness",
        "partial",
        "--n",
        "3",
        "--emit-cert",
        cert_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));

    let out = ordervc(&["check-cert", cert_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("certificate verified: ground 3"));

    // Corrupt one witness: the empty order traces all-ones, so mask 0 fails.
    let text = std::fs::read_to_string(&cert_path).unwrap();
    let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    doc["witnesses"]["0"] = serde_json::json!({"n": 3, "relations": []});
    std::fs::write(&cert_path, serde_json::to_string(&doc).unwrap()).unwrap();
    let out = ordervc(&["check-cert", cert_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("certificate invalid"));

    std::fs::remove_file(&cert_path).ok();
}

#[test]
fn check_cert_missing_file_is_io_error() {
    let out = ordervc(&["check-cert", "/nonexistent/cert.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn construct_emits_dot_and_json() {
    let dot_path = tmpfile("h5.dot");
    let json_path = tmpfile("h5.json");
    let out = ordervc(&[
        "construct",
        "--which",
        "thm2h",
        "--n",
        "5",
        "--emit-dot",
        dot_path.to_str().unwrap(),
        "--emit-json",
        json_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("kind thm2h"));
    assert!(text.contains("parts 4"));
    assert!(text.contains("part H1: (1,4) (4,2)"));

    let dot = std::fs::read_to_string(&dot_path).unwrap();
    assert!(dot.starts_with("digraph thm2h_n5 {"));
    assert_eq!(dot.matches("// part").count(), 4);

    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(doc["part_count"], 4);
    assert_eq!(doc["kind"], "thm2h");

    std::fs::remove_file(&dot_path).ok();
    std::fs::remove_file(&json_path).ok();
}

#[test]
fn construct_too_small_is_usage_error() {
    let out = ordervc(&["construct", "--which", "thm1", "--n", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("requires n >= 4"));
}

#[test]
fn proofcheck_runs_on_emitted_construction_set() {
    let set_path = tmpfile("thm1-n4.json");
    let out = ordervc(&[
        "construct",
        "--which",
        "thm1",
        "--n",
        "4",
        "--emit-orders",
        set_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));

    let out = ordervc(&[
        "proofcheck",
        "--set",
        set_path.to_str().unwrap(),
        "--n",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("set_size 4 edge_count 4"), "{text}");
    assert!(text.ends_with("PASS\n"), "{text}");

    std::fs::remove_file(&set_path).ok();
}

#[test]
fn proofcheck_rejects_unshattered_set() {
    let set_path = tmpfile("unshattered.json");
    std::fs::write(
        &set_path,
        r#"{"n":3,"set":[{"n":3,"seq":[1,2,3]},{"n":3,"seq":[1,3,2]},{"n":3,"seq":[2,1,3]}]}"#,
    )
    .unwrap();
    let out = ordervc(&[
        "proofcheck",
        "--set",
        set_path.to_str().unwrap(),
        "--n",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("not shattered"));
    std::fs::remove_file(&set_path).ok();
}

#[test]
fn verify_star_exhaustive_passes() {
    let out = ordervc(&["verify-star", "--which", "thm2h", "--n", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("subsets_tested 1024"), "{text}");
    assert!(text.contains("failures 0"));
    assert!(text.contains("fallbacks 0"));
    assert!(text.ends_with("PASS\n"));
}

#[test]
fn verify_star_sampled_mode() {
    let out = ordervc(&[
        "verify-star",
        "--which",
        "thm1",
        "--n",
        "9",
        "--mode",
        "sampled",
        "--count",
        "2000",
        "--seed",
        "5",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["subsets_tested"], 2000);
    assert_eq!(doc["passed"], true);
}

#[test]
fn verify_star_exhaustive_cap_is_usage_error() {
    let out = ordervc(&["verify-star", "--which", "thm1", "--n", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("cap"));
}

#[test]
fn threads_flag_and_env_are_accepted() {
    let out = ordervc(&[
        "--threads",
        "2",
        "vc",
        "--ground",
        "total",
        "--witness",
        "partial",
        "--n",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));

    let out = Command::new(env!("CARGO_BIN_EXE_ordervc"))
        .env("ORDERVC_THREADS", "2")
        .args(["enumerate", "--kind", "total", "--n", "3", "--count-only"])
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "6");
}
