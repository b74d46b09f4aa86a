//! End-to-end checks of the command-line interface through the built binary.

use std::io::Write;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rootfield"))
}

fn write_spec(dir: &std::path::Path, name: &str, text: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(text.as_bytes()).unwrap();
    path
}

fn temp_dir(tag: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("rootfield-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

const TRINOMIAL_SPEC: &str = r#"{
    "a0": [10.0, 0.0],
    "terms": [
        { "coeff": [1.0, 0.0], "kind": "power_exp", "r": 1.0, "base": [5.0, 0.0], "q": -1.0 },
        { "coeff": [1.0, 0.0], "kind": "power_exp", "r": -1.0, "base": [5.0, 0.0], "q": 1.0 }
    ],
    "solve": {
        "term_k": 2, "primary_min": -10, "primary_max": 10,
        "x0": [1.0, 0.0], "eps": 1e-13, "max_iters": 8,
        "polish": true, "dedupe_tol": 1e-6, "conjugate_closure": true
    }
}"#;

const CUBE_SPEC: &str = r#"{
    "a0": [1.0, 0.0],
    "terms": [ { "coeff": [1.0, 0.0], "kind": "power", "r": 3.0 } ],
    "solve": {
        "term_k": 1, "primary_min": 0, "primary_max": 0,
        "x0": [0.5, 0.0], "eps": 1e-13, "max_iters": 10,
        "polish": true, "dedupe_tol": 1e-8
    }
}"#;

// 2^x = 0 has no roots; every branch hits log(0)
const HOPELESS_SPEC: &str = r#"{
    "a0": [0.0, 0.0],
    "terms": [ { "coeff": [1.0, 0.0], "kind": "geo_exp", "base": [2.0, 0.0] } ],
    "solve": {
        "term_k": 1, "primary_min": -2, "primary_max": 2,
        "x0": [0.5, 0.0], "eps": 1e-12, "max_iters": 10,
        "polish": true, "dedupe_tol": 1e-8
    }
}"#;

#[test]
fn solve_trinomial_json_has_21_roots_and_round_trips() {
    let dir = temp_dir("solve");
    let spec = write_spec(&dir, "trinomial.json", TRINOMIAL_SPEC);
    let output = bin()
        .args(["solve", spec.to_str().unwrap(), "--format", "json"])
        .output()
        .unwrap();
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    let stdout = String::from_utf8(output.stdout).unwrap();
    let report: serde_json::Value = serde_json::from_str(stdout.trim()).unwrap();
    assert_eq!(report["summary"]["total_distinct"], 21);
    // byte-identical re-serialization
    let reserialized = serde_json::to_string(&report).unwrap();
    let reparsed: serde_json::Value = serde_json::from_str(&reserialized).unwrap();
    assert_eq!(serde_json::to_string(&reparsed).unwrap(), reserialized);
    assert_eq!(stdout.trim().len(), reserialized.len());
}

#[test]
fn solve_csv_and_table_formats() {
    let dir = temp_dir("formats");
    let spec = write_spec(&dir, "cube.json", CUBE_SPEC);
    for format in ["csv", "table"] {
        let output = bin()
            .args(["solve", spec.to_str().unwrap(), "--format", format])
            .output()
            .unwrap();
        assert!(output.status.success(), "{format} failed");
        let stdout = String::from_utf8(output.stdout).unwrap();
        if format == "csv" {
            assert!(
                stdout.starts_with("term_k,variant,primary,secondary,re,im,residual,iterations")
            );
            // header + 3 cube roots
            assert_eq!(stdout.trim().lines().count(), 4);
        } else {
            assert!(stdout.contains("3 distinct roots"));
        }
    }
}

#[test]
fn solve_exit_codes() {
    let dir = temp_dir("codes");
    // parse failure -> 1
    let bad = write_spec(&dir, "bad.json", "{ not json");
    let output = bin()
        .args(["solve", bad.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));

    // zero-coefficient term -> 1 with the term index on stderr
    let zero = TRINOMIAL_SPEC.replace(
        r#""coeff": [1.0, 0.0], "kind": "power_exp", "r": -1.0"#,
        r#""coeff": [0.0, 0.0], "kind": "power_exp", "r": -1.0"#,
    );
    let zero = write_spec(&dir, "zero.json", &zero);
    let output = bin()
        .args(["solve", zero.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&output.stderr).contains("term 2"));

    // no convergence anywhere -> 2
    let hopeless = write_spec(&dir, "hopeless.json", HOPELESS_SPEC);
    let output = bin()
        .args(["solve", hopeless.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));

    // missing file -> 1
    let output = bin().args(["solve", "/nonexistent.json"]).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn solve_trace_dumps_iterates() {
    let dir = temp_dir("trace");
    let spec = write_spec(&dir, "cube.json", CUBE_SPEC);
    let output = bin()
        .args(["solve", spec.to_str().unwrap(), "--trace"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(
        stderr.contains("trace (0, 0):") && stderr.contains(" -> "),
        "expected per-iteration dumps, got: {stderr}"
    );
}

#[test]
fn reproduce_single_scenario_and_unknown() {
    let output = bin().args(["reproduce", "exp3-w0"]).output().unwrap();
    assert_eq!(output.status.code(), Some(0));
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.contains("scenario exp3-w0: 13/13 golden rows matched"));

    let output = bin().args(["reproduce", "nonsense"]).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn reproduce_all_scenarios() {
    let output = bin().args(["reproduce", "all"]).output().unwrap();
    assert_eq!(
        output.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert_eq!(stdout.matches("scenario ").count(), 19);
    assert!(!stdout.contains(" NO"), "some golden row failed:\n{stdout}");
}

#[test]
fn count_trinomial_totals_agree() {
    let dir = temp_dir("count");
    let spec = write_spec(&dir, "trinomial.json", TRINOMIAL_SPEC);
    let output = bin()
        .args(["count", spec.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(
        output.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    let stdout = String::from_utf8(output.stdout).unwrap();
    let ie: i64 = stdout
        .lines()
        .find_map(|l| l.strip_prefix("inclusion-exclusion total: "))
        .unwrap()
        .parse()
        .unwrap();
    let distinct: i64 = stdout
        .lines()
        .find_map(|l| l.strip_prefix("distinct roots: "))
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(ie, distinct);
}

#[test]
fn count_single_term_cube() {
    let dir = temp_dir("countcube");
    let spec = write_spec(&dir, "cube.json", CUBE_SPEC);
    let output = bin()
        .args(["count", spec.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.contains("per-subfield sizes: [3]"));
    assert!(stdout.contains("distinct roots: 3"));
}

#[test]
fn thread_env_does_not_change_results() {
    let dir = temp_dir("threads");
    let spec = write_spec(&dir, "trinomial.json", TRINOMIAL_SPEC);
    let single = bin()
        .args(["solve", spec.to_str().unwrap(), "--format", "json"])
        .env("RF_THREADS", "1")
        .output()
        .unwrap();
    let multi = bin()
        .args(["solve", spec.to_str().unwrap(), "--format", "json"])
        .env("RF_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(single.stdout, multi.stdout);
}
