use std::process::Command;

use serde_json::Value;
use torusvr::cli::{RunConfig, EXIT_BUDGET, EXIT_MISMATCH, EXIT_OK, EXIT_VALIDATION, OUTPUT_SCHEMA};

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn torusvr(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_torusvr"))
        .args(args)
        .env_remove("SIMPLEX_BUDGET")
        .env_remove("TIME_BUDGET_SECS")
        .output()
        .unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn json(args: &[&str]) -> (i32, Value) {
    let r = torusvr(args);
    let v = serde_json::from_str(&r.stdout).unwrap_or_else(|e| panic!("{e}: {}{}", r.stdout, r.stderr));
    (r.code, v)
}

fn validate(v: &Value) {
    let schema: Value = serde_json::from_str(OUTPUT_SCHEMA).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(v).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "{errors:#?}\n{v:#}");
}

#[test]
fn betti_torus_4_2() {
    let (code, v) = json(&["betti", "--space", "torus", "--n", "4", "--k", "2", "--max-dim", "3"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["result"]["profile"]["betti"], serde_json::json!([1, 0, 0, 9]));
    assert_eq!(v["config"]["space"]["n"], 4);
    validate(&v);
}

#[test]
fn betti_cycle_9_3() {
    let (code, v) = json(&["betti", "--space", "cycle", "--n", "9", "--k", "3"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["result"]["profile"]["betti"], serde_json::json!([1, 0, 2, 0]));
    assert_eq!(v["result"]["truncated_at"], Value::Null);
    validate(&v);
}

#[test]
fn betti_csv_and_text() {
    let r = torusvr(&["--format", "csv", "betti", "--space", "torus", "--n", "3", "--k", "2", "--max-dim", "1"]);
    assert_eq!(r.code, EXIT_OK);
    let lines: Vec<&str> = r.stdout.lines().collect();
    assert_eq!(lines[0], "n,k,dim,betti,coefficients,source");
    assert_eq!(&lines[1..], ["3,2,0,1,gf2,computed", "3,2,1,0,gf2,computed"]);

    let r = torusvr(&["--format", "text", "betti", "--space", "cycle", "--n", "8", "--k", "2"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.stdout.contains("b1 = 1"), "{}", r.stdout);
}

#[test]
fn betti_window() {
    let (code, v) = json(&["betti", "--space", "window", "--window", "0,3,0,3", "--k", "1"]);
    assert_eq!(code, EXIT_OK);
    // a 4x4 grid graph has 9 independent cycles
    assert_eq!(v["result"]["profile"]["betti"], serde_json::json!([1, 9]));
    validate(&v);
}

#[test]
fn facets_compare_is_identical() {
    for (n, count) in [("9", 162), ("6", 96)] {
        let (code, v) = json(&["facets", "--space", "torus", "--n", n, "--k", "2", "--mode", "compare"]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(v["result"]["identical"], true);
        assert_eq!(v["result"]["closed_form_count"], count);
        assert_eq!(v["result"]["oracle_count"], count);
        validate(&v);
    }
}

#[test]
fn facets_cycle_text_lists_16() {
    let r = torusvr(&["--format", "text", "facets", "--space", "cycle", "--n", "8", "--k", "3", "--mode", "closed-form"]);
    assert_eq!(r.code, EXIT_OK);
    let facets: Vec<&str> = r.stdout.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(facets.len(), 16);
    assert_eq!(facets[0], "0 1 2 3");
}

#[test]
fn facets_unsupported_regime() {
    let r = torusvr(&["facets", "--space", "torus", "--n", "7", "--k", "3", "--mode", "compare"]);
    assert_eq!(r.code, EXIT_VALIDATION);
    let err: Value = serde_json::from_str(&r.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "unsupported_regime");

    // closed-form mode falls back to the oracle and says so
    let (code, v) = json(&["facets", "--space", "torus", "--n", "7", "--k", "3"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["result"]["closed_form"], false);
    assert_eq!(v["result"]["source"], "brute-force");
    validate(&v);
}

#[test]
fn verify_table_filters() {
    let (code, v) = json(&["verify-table", "--n", "7", "--k", "4", "--coefficients", "integer"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["result"]["summary"]["pass"], 1);
    assert_eq!(v["result"]["rows"][0]["status"], "PASS");
    validate(&v);

    let r = torusvr(&["--format", "text", "verify-table", "--n", "50", "--k", "1"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.stdout.contains("0 rows"), "{}", r.stdout);

    let (code, v) = json(&["verify-table", "--n", "3..5", "--k", "1..2"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["result"]["summary"]["rows"], 6);
    validate(&v);
}

#[test]
fn verify_table_budget_is_skipped_not_passed() {
    let (code, v) = json(&["verify-table", "--n", "8", "--k", "3", "--simplex-budget", "100"]);
    assert_eq!(code, EXIT_BUDGET);
    assert_eq!(v["result"]["rows"][0]["status"], "SKIPPED");
    assert_eq!(v["result"]["rows"][0]["budget_exceeded"], true);
    validate(&v);
}

#[test]
fn certify_examples() {
    let (code, v) = json(&["certify", "--space", "torus", "--n", "4", "--k", "3"]);
    assert_eq!(code, EXIT_OK);
    let f = &v["result"]["fingerprint"];
    assert_eq!(f["claim_label"], "sphere(7)");
    assert_eq!(f["verdict"], "certified");
    validate(&v);

    let (code, v) = json(&["certify", "--space", "torus", "--n", "12", "--k", "4"]);
    assert_eq!(code, EXIT_OK);
    let f = &v["result"]["fingerprint"];
    assert_eq!(f["claim_label"], "wedge_S2(95)");
    assert_eq!(f["verdict"], "consistent");
    validate(&v);

    // an explicit shallow depth caps the verdict
    let (code, v) = json(&["certify", "--space", "torus", "--n", "5", "--k", "3", "--max-dim", "3"]);
    assert_eq!(code, EXIT_OK);
    assert_ne!(v["result"]["fingerprint"]["verdict"], "certified");
    validate(&v);
}

#[test]
fn certify_rejects_non_torus() {
    let r = torusvr(&["certify", "--space", "cycle", "--n", "9", "--k", "3"]);
    assert_eq!(r.code, EXIT_VALIDATION);
}

#[test]
fn validation_errors() {
    for args in [
        &["betti", "--space", "torus", "--n", "0", "--k", "1"][..],
        &["betti", "--space", "torus", "--k", "1"],
        &["betti", "--space", "window", "--window", "3,0,0,1", "--k", "1"],
        &["--threads", "0", "betti", "--space", "cycle", "--n", "5", "--k", "1"],
        &["betti", "--space", "sphere", "--n", "5", "--k", "1"],
        &["verify-table", "--n", "9..3"],
    ] {
        let r = torusvr(args);
        assert_eq!(r.code, EXIT_VALIDATION, "{args:?}: {}", r.stderr);
    }
}

#[test]
fn simplex_budget_from_env() {
    let out = Command::new(env!("CARGO_BIN_EXE_torusvr"))
        .args(["betti", "--space", "torus", "--n", "8", "--k", "3", "--max-dim", "3"])
        .env("SIMPLEX_BUDGET", "1000")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_BUDGET));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "budget");
}

#[test]
fn config_round_trips() {
    let (_, v) = json(&["--threads", "3", "betti", "--space", "window", "--window", "-2,2,-1,1", "--k", "2"]);
    let config: RunConfig = serde_json::from_value(v["config"].clone()).unwrap();
    assert_eq!(serde_json::to_value(&config).unwrap(), v["config"]);
    assert_eq!(v["config"]["thread_count"], 3);
}

#[test]
fn no_timing_output_is_byte_identical() {
    let args = ["--no-timing", "certify", "--space", "torus", "--n", "6", "--k", "2"];
    let a = torusvr(&args);
    let b = torusvr(&args);
    assert_eq!(a.code, EXIT_OK);
    assert_eq!(a.stdout, b.stdout);
    let threads = torusvr(&["--threads", "4", "--no-timing", "certify", "--space", "torus", "--n", "6", "--k", "2"]);
    assert_eq!(a.stdout, threads.stdout.replace("\"thread_count\": 4", "\"thread_count\": 1"));
}

#[test]
fn wrong_golden_fails() {
    let path = std::env::temp_dir().join(format!("torusvr-golden-{}.toml", std::process::id()));
    std::fs::write(
        &path,
        "version = 1\n[[row]]\nn = 4\nk = 1\ncoefficients = \"gf2\"\nmax_dim = 1\nbetti = [1, 16]\nsource = \"deliberately wrong\"\n",
    )
    .unwrap();
    let (code, v) = json(&["verify-table", "--golden", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(code, EXIT_MISMATCH);
    assert_eq!(v["result"]["rows"][0]["status"], "FAIL");
    assert_eq!(v["result"]["rows"][0]["computed"]["betti"], serde_json::json!([1, 17]));
    validate(&v);
}
