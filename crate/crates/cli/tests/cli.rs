use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use pgf_core::fixtures::SMALL_GROUPS_PC;
use pgf_core::pc::{parse_pc_file, serialize_pc_file};

fn pgf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pgf"))
        .args(args)
        .env_remove("PGF_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn order8_file(dir: &Path) -> String {
    let recs: Vec<_> = parse_pc_file(SMALL_GROUPS_PC)
        .unwrap()
        .into_iter()
        .filter(|r| r.id.order == 8)
        .collect();
    let path = dir.join("order8.pc");
    fs::write(&path, serialize_pc_file(&recs)).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn build_prints_invariants() {
    let o = pgf(&["build", "W(C(2,1),C(2,1))"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "order=8 rank=2 dl=2\n");
    let o = pgf(&["build", "D(C(3,1),W(C(3,1),C(3,1)))"]);
    assert_eq!(stdout(&o), "order=243 rank=3 dl=2\n");
}

#[test]
fn semiabelian_prints_a_witness() {
    let o = pgf(&["semiabelian", "W(C(2,1),C(2,1))"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("semiabelian=true"), "{out}");
    assert!(out.contains("G0 (order 8) = A H"), "{out}");
    assert!(out.contains("G1 (order 2)"), "{out}");
}

#[test]
fn semiabelian_accepts_dataset_groups() {
    let dir = tempfile::tempdir().unwrap();
    let file = order8_file(dir.path());
    let o = pgf(&["semiabelian", &format!("{file}#4"), "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["semiabelian"], true);
    assert_eq!(v["order"], "8");
    let o = pgf(&["semiabelian", &format!("{file}#9")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn exit_codes() {
    // usage error
    assert_eq!(pgf(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(pgf(&["build"]).status.code(), Some(2));
    // computation failures name the certificate
    let o = pgf(&["build", "Q(C(2,2);g1)"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Q(C(2,2);g1)"));
    assert_eq!(pgf(&["build", "C(2,"]).status.code(), Some(1));
}

#[test]
fn help_documents_the_grammar() {
    let out = stdout(&pgf(&["build", "--help"]));
    for needle in ["C(l,k)", "D(a,b)", "W(a,b)", "Q(a;w1,w2,...)", "W(C(2,1),C(2,1))"] {
        assert!(out.contains(needle), "{needle} missing from help");
    }
}

#[test]
fn census_resumes_to_identical_reports() {
    let dir = tempfile::tempdir().unwrap();
    let file = order8_file(dir.path());
    let cache = dir.path().join("cache");
    let cache = cache.to_str().unwrap();
    let plain = pgf(&["census", &file, "--format", "csv", "--no-timings"]);
    assert!(plain.status.success());
    assert_eq!(stdout(&plain).lines().count(), 6);
    let first = pgf(&["census", &file, "--format", "json", "--no-timings", "--cache", cache, "--jobs", "2"]);
    let again = pgf(&["census", &file, "--format", "json", "--no-timings", "--cache", cache]);
    assert_eq!(first.stdout, again.stdout);
    let v: serde_json::Value = serde_json::from_slice(&again.stdout).unwrap();
    assert_eq!(v["summary"]["total"], 5);
    assert_eq!(v["summary"]["non_semiabelian"], 0);
    let text = stdout(&pgf(&["census", &file, "--cache", cache]));
    assert!(text.contains("5 from cache"), "{text}");
}

#[test]
fn census_cache_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let file = order8_file(dir.path());
    let cache = dir.path().join("envcache");
    let o = Command::new(env!("CARGO_BIN_EXE_pgf"))
        .args(["census", &file])
        .env("PGF_CACHE", &cache)
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(cache.join("census-8.jsonl").exists());
}

#[test]
fn ramification_and_bounds() {
    let o = pgf(&["ramification", "C(2,3)", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["minimal_count_claim"], 1);
    let out = stdout(&pgf(&["bounds", "C(2,4)", "W(C(5,1),C(5,1))"]));
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows.len(), 4, "{out}");
    assert!(rows[2].starts_with("W(C(5,1),C(5,1))"));
}

#[test]
fn verify_without_datasets_skips_them() {
    let dir = tempfile::tempdir().unwrap();
    let o = pgf(&["verify", "--data", dir.path().to_str().unwrap()]);
    let out = stdout(&o);
    assert!(o.status.success(), "{out}");
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 8, "{out}");
    assert!(lines[0].starts_with("[PASS] 1."));
    assert!(lines[1].starts_with("[PASS] 2."));
    assert!(lines[2].starts_with("[SKIPPED] 3."));
    assert!(lines[3].starts_with("[SKIPPED] 4."));
    assert!(lines[4].starts_with("[PASS] 5."));
    assert!(lines[7].starts_with("[NOT RUN] 8."));
    assert!(!out.contains("FAIL"));
}
