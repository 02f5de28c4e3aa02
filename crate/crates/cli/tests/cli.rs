//! End-to-end tests against the compiled `originlab` binary: exit codes,
//! stdout/stderr separation, reproducibility of result files.

use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_originlab"))
        .args(args)
        // Isolate from the ambient environment so thread counts in these
        // tests come only from the flags they pass.
        .env_remove("ORIGINLAB_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr is UTF-8")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

fn write_temp(dir: &tempfile::TempDir, name: &str, contents: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, contents).expect("temp write");
    path
}

#[test]
fn pnd_exact_prints_only_the_rational_on_stdout() {
    let out = run(&["pnd", "--n", "30", "--d", "15", "--exact"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "1/2\n");
    let err = stderr(&out);
    assert!(err.contains("# originlab "));
    assert!(err.contains("# config_hash: "));
    assert!(err.contains("# master_seed: n/a"));

    let out = run(&["pnd", "--n", "5", "--d", "2", "--exact"]);
    assert_eq!(stdout(&out), "11/16\n");
}

#[test]
fn pnd_float_mode_is_close_to_the_exact_value() {
    let out = run(&["pnd", "--n", "5", "--d", "2"]);
    assert_eq!(code(&out), 0);
    let value: f64 = stdout(&out).trim().parse().expect("a float");
    assert!((value - 0.6875).abs() < 1e-12);
}

#[test]
fn every_subcommand_has_help() {
    for sub in [
        "pnd",
        "classify",
        "lp-check",
        "simulate",
        "enumerate",
        "sweep",
        "decay",
        "sparse",
        "asym",
    ] {
        let out = run(&[sub, "--help"]);
        assert_eq!(code(&out), 0, "{sub} --help failed");
        assert!(stdout(&out).contains("Usage"), "{sub} help has no usage");
    }
    let out = run(&["--help"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn bad_invocations_exit_two() {
    assert_eq!(code(&run(&["no-such-command"])), 2);
    assert_eq!(code(&run(&["pnd", "--n", "5"])), 2); // missing --d
    assert_eq!(code(&run(&["pnd", "--n", "0", "--d", "1"])), 2);
    assert_eq!(code(&run(&["simulate", "--dist", "rademacher"])), 2); // no --n
    // conflicting sources
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_temp(&dir, "cfg.json", "{}");
    let out = run(&[
        "simulate",
        "--config",
        cfg.to_str().unwrap(),
        "--n",
        "5",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn classify_reports_class_and_certificates() {
    let dir = tempfile::tempdir().unwrap();

    let interior = write_temp(
        &dir,
        "interior.json",
        r#"[["1","0"],["-1","1"],["0","-1"]]"#,
    );
    let out = run(&["classify", "--points", interior.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).expect("JSON verdict");
    assert_eq!(v["class"], "Interior");
    assert!(v["witness"].is_array());
    assert!(v["separator"].is_null());

    let boundary = write_temp(&dir, "boundary.json", r#"[["1","1"],["-1","-1"]]"#);
    let out = run(&["classify", "--points", boundary.to_str().unwrap()]);
    let v: Value = serde_json::from_str(&stdout(&out)).expect("JSON verdict");
    assert_eq!(v["class"], "Boundary");
    assert!(v["witness"].is_array());

    let outside = write_temp(&dir, "outside.json", r#"[["1","0"],["1","1"]]"#);
    let out = run(&["classify", "--points", outside.to_str().unwrap()]);
    let v: Value = serde_json::from_str(&stdout(&out)).expect("JSON verdict");
    assert_eq!(v["class"], "Outside");
    assert!(v["separator"].is_array());
    assert!(v["witness"].is_null());
}

#[test]
fn decimal_point_entries_need_an_explicit_bit_budget() {
    let dir = tempfile::tempdir().unwrap();
    let pts = write_temp(&dir, "pts.json", r#"[[0.25,"1"],["-1","-1"]]"#);
    let out = run(&["classify", "--points", pts.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("error:"));

    let out = run(&[
        "classify",
        "--points",
        pts.to_str().unwrap(),
        "--dyadic-bits",
        "4",
    ]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).expect("JSON verdict");
    assert!(v["class"].is_string());
}

#[test]
fn lp_check_distinguishes_bounded_from_unbounded_in_the_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_temp(&dir, "a.json", r#"[["1","0"],["0","1"]]"#);

    let out = run(&[
        "lp-check",
        "--matrix",
        a.to_str().unwrap(),
        "--cost",
        "1,1",
        "--debug-sandwich",
    ]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).expect("JSON verdict");
    assert_eq!(v["verdict"], "bounded");
    assert!(v["cone_weights"].is_array());
    assert_eq!(v["sandwich_pass"], true);

    let out = run(&[
        "lp-check",
        "--matrix",
        a.to_str().unwrap(),
        "--cost",
        "-1,0",
    ]);
    assert_eq!(code(&out), 3);
    let v: Value = serde_json::from_str(&stdout(&out)).expect("JSON verdict");
    assert_eq!(v["verdict"], "unbounded");
    assert!(v["recession_ray"].is_array());
}

#[test]
fn simulate_output_re_feeds_as_config_and_reproduces_itself() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first.json");
    let second = dir.path().join("second.json");

    let out = run(&[
        "simulate",
        "--kind",
        "lp",
        "--dist",
        "rademacher",
        "--n",
        "5",
        "--d",
        "2",
        "--trials",
        "400",
        "--seed",
        "42",
        "--out",
        first.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stderr(&out).contains("# master_seed: 42"));

    let out = run(&[
        "simulate",
        "--config",
        first.to_str().unwrap(),
        "--out",
        second.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));

    let a = std::fs::read(&first).unwrap();
    let b = std::fs::read(&second).unwrap();
    assert_eq!(a, b, "round-tripped result files differ");
}

#[test]
fn worker_count_does_not_change_the_result_file() {
    let dir = tempfile::tempdir().unwrap();
    let lone = dir.path().join("one.json");
    let many = dir.path().join("eight.json");
    let base = [
        "simulate", "--dist", "gaussian", "--n", "6", "--d", "2", "--trials", "500", "--seed",
        "303",
    ];

    let mut args = base.to_vec();
    args.extend(["--threads", "1", "--out", lone.to_str().unwrap()]);
    assert_eq!(code(&run(&args)), 0);

    let mut args = base.to_vec();
    args.extend(["--threads", "8", "--out", many.to_str().unwrap()]);
    assert_eq!(code(&run(&args)), 0);

    assert_eq!(std::fs::read(&lone).unwrap(), std::fs::read(&many).unwrap());
}

#[test]
fn thread_count_can_come_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let via_flag = dir.path().join("flag.json");
    let via_env = dir.path().join("env.json");

    let out = run(&[
        "simulate", "--dist", "rademacher", "--n", "4", "--d", "2", "--trials", "300", "--seed",
        "7", "--threads", "2", "--out", via_flag.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);

    let out = Command::new(env!("CARGO_BIN_EXE_originlab"))
        .args([
            "simulate", "--dist", "rademacher", "--n", "4", "--d", "2", "--trials", "300",
            "--seed", "7", "--out", via_env.to_str().unwrap(),
        ])
        .env("ORIGINLAB_THREADS", "2")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0));

    assert_eq!(
        std::fs::read(&via_flag).unwrap(),
        std::fs::read(&via_env).unwrap()
    );

    let out = Command::new(env!("CARGO_BIN_EXE_originlab"))
        .args([
            "simulate", "--dist", "rademacher", "--n", "4", "--d", "2", "--trials", "10",
            "--seed", "7",
        ])
        .env("ORIGINLAB_THREADS", "abc")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn omitting_the_seed_generates_and_reports_one() {
    let out = run(&[
        "simulate", "--dist", "rademacher", "--n", "3", "--d", "1", "--trials", "50",
    ]);
    assert_eq!(code(&out), 0);
    let err = stderr(&out);
    let line = err
        .lines()
        .find(|l| l.starts_with("# master_seed: "))
        .expect("seed line");
    let seed: u64 = line
        .trim_start_matches("# master_seed: ")
        .parse()
        .expect("generated seed is numeric");
    let v: Value = serde_json::from_str(&stdout(&out)).expect("result JSON");
    assert_eq!(v["config"]["master_seed"], Value::from(seed));
}

#[test]
fn audit_file_lists_every_trial() {
    let dir = tempfile::tempdir().unwrap();
    let audit = dir.path().join("audit.csv");
    let out = run(&[
        "simulate", "--dist", "rademacher", "--n", "3", "--d", "1", "--trials", "80", "--seed",
        "13", "--audit", audit.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).expect("result JSON");

    let text = std::fs::read_to_string(&audit).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("trial,class"));
    let mut interior = 0u64;
    let mut rows = 0u64;
    for (i, line) in lines.enumerate() {
        let (trial, class) = line.split_once(',').expect("two columns");
        assert_eq!(trial.parse::<usize>().unwrap(), i);
        if class == "interior" {
            interior += 1;
        }
        rows += 1;
    }
    assert_eq!(rows, 80);
    assert_eq!(v["counts"]["interior"], Value::from(interior));
}

#[test]
fn rejecting_malformed_configs_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let bogus = write_temp(
        &dir,
        "bogus.json",
        r#"{"schema_version":1,"kind":"hull","spec":{"kind":"rademacher"},"n":3,"d":1,"trials":10,"master_seed":1,"surprise":true}"#,
    );
    let out = run(&["simulate", "--config", bogus.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("error:"));
}

#[test]
fn enumerate_matches_the_sign_matrix_law_exactly() {
    let out = run(&["enumerate", "--dist", "rademacher", "--n", "2", "--d", "2"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let v: Value = serde_json::from_str(&stdout(&out)).expect("JSON payload");
    assert_eq!(v["outside"], "3/4");
    assert_eq!(v["boundary"], "1/4");
    assert_eq!(v["interior"], "0");
    assert_eq!(v["contains"], "1/4");

    let out = run(&[
        "enumerate", "--kind", "lp", "--dist", "rademacher", "--n", "3", "--d", "2", "--cost",
        "1,0",
    ]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).expect("JSON payload");
    assert_eq!(v["bounded"], "9/32");
    assert_eq!(v["unbounded"], "23/32");

    let out = run(&["enumerate", "--dist", "gaussian", "--n", "2", "--d", "1"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn sweep_emits_a_csv_table_next_to_the_json_report() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let out = run(&[
        "sweep", "--d", "1", "--n-lo", "2", "--n-hi", "5", "--dist", "rademacher", "--trials",
        "200", "--seed", "21", "--csv", csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let v: Value = serde_json::from_str(&stdout(&out)).expect("JSON report");
    assert_eq!(v["points"].as_array().unwrap().len(), 4);
    assert_eq!(v["exact_crossing"], 2);

    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,freq,lo,hi,theory");
    assert_eq!(lines.len(), 5);
}

#[test]
fn decay_requires_a_finite_atom_law() {
    let out = run(&[
        "decay", "--d-list", "2,3", "--dist", "gaussian", "--trials", "100", "--seed", "3",
    ]);
    assert_eq!(code(&out), 2);

    let out = run(&[
        "decay", "--d-list", "1,2", "--dist", "rademacher", "--trials", "400", "--seed", "3",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let v: Value = serde_json::from_str(&stdout(&out)).expect("JSON report");
    assert_eq!(v["points"].as_array().unwrap().len(), 2);
}

#[test]
fn sparse_grid_entries_must_be_probabilities()  {
    let out = run(&[
        "sparse", "--d", "1", "--n", "3", "--p-grid", "0,1/2", "--trials", "50", "--seed", "1",
    ]);
    assert_eq!(code(&out), 2);

    let out = run(&[
        "sparse", "--d", "1", "--n", "3", "--p-grid", "1/2,1", "--trials", "200", "--seed", "1",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let v: Value = serde_json::from_str(&stdout(&out)).expect("JSON report");
    let points = v["points"].as_array().unwrap();
    assert_eq!(points.len(), 2);
    assert_eq!(points[0]["p"], "1/2");
    assert!(v["conjectured_critical_p"].is_number());
}

#[test]
fn asym_checks_the_mean_before_running() {
    let out = run(&[
        "asym", "--d", "1", "--n", "3", "--atoms", "1:1/2,2:1/2", "--trials", "50", "--seed",
        "2",
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("mean"));

    let out = run(&[
        "asym", "--d", "1", "--n", "4", "--atoms", "2:1/3,-1:2/3", "--trials", "300", "--seed",
        "2",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let v: Value = serde_json::from_str(&stdout(&out)).expect("JSON report");
    assert!(v["exact"].is_string());
    assert!(v["gap"].is_number());

    // The harness also accepts symmetric baselines for side-by-side runs.
    let out = run(&[
        "asym", "--d", "1", "--n", "4", "--dist", "rademacher", "--trials", "300", "--seed",
        "2",
    ]);
    assert_eq!(code(&out), 0);
}
