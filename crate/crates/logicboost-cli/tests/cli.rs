//! End-to-end checks of the command-line interface: exit codes, file
//! outputs and cross-command consistency.

mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::{bin, fixture_path};

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

fn xor6(dir: &Path) -> Vec<String> {
    vec![
        "--data".into(),
        fixture_path("xor6.csv").to_str().unwrap().into(),
        "--labels".into(),
        "pos=+1,neg=-1".into(),
        "--header".into(),
        "--out".into(),
        dir.join("out").to_str().unwrap().into(),
    ]
}

#[test]
fn usage_errors_exit_with_code_2() {
    let out = run(&[
        "train",
        "--learner",
        "orchid",
        "--data",
        "x.csv",
        "--labels",
        "0=-1",
        "--model",
        "m",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("possible values"), "stderr: {stderr}");
    assert!(stderr.contains("stump"), "stderr must name the learner set");

    let out = run(&[
        "trials",
        "--learner",
        "or",
        "--labels",
        "0=-1",
        "--out",
        "x",
    ]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&[
        "trials",
        "--data",
        "d.csv",
        "--labels",
        "0=-1",
        "--learner",
        "or",
        "--out",
        "x",
    ]);
    assert_eq!(out.status.code(), Some(2), "split sizes are required");

    let out = run(&["--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn runtime_errors_exit_with_code_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "train",
        "--data",
        "/nonexistent/input.csv",
        "--labels",
        "0=-1,1=+1",
        "--learner",
        "stump",
        "--model",
        dir.path().join("m").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&["trials", "--help"]).status.code(), Some(0));
}

#[test]
fn eval_reports_training_error_of_saved_model() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("m.model");
    let data = fixture_path("xor6.csv");
    let out = run(&[
        "train",
        "--data",
        data.to_str().unwrap(),
        "--labels",
        "pos=+1,neg=-1",
        "--header",
        "--learner",
        "and",
        "--ops",
        "3",
        "--rounds",
        "10",
        "--model",
        model.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("rounds_used="), "stdout: {stdout}");

    let summary = dir.path().join("eval.csv");
    let out = run(&[
        "eval",
        "--model",
        model.to_str().unwrap(),
        "--data",
        data.to_str().unwrap(),
        "--labels",
        "pos=+1,neg=-1",
        "--header",
        "--out",
        summary.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let body = std::fs::read_to_string(&summary).unwrap();
    assert!(body.starts_with("n_samples,n_errors,error\n600,"));
    assert!(body.ends_with('\n'));
}

#[test]
fn model_against_narrower_data_fails_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("m.model");
    let out = run(&[
        "train",
        "--data",
        fixture_path("xor6.csv").to_str().unwrap(),
        "--labels",
        "pos=+1,neg=-1",
        "--header",
        "--learner",
        "stump",
        "--rounds",
        "5",
        "--model",
        model.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    // box4.csv has four features; a model trained on six may reference
    // columns that do not exist there.
    let out = run(&[
        "eval",
        "--model",
        model.to_str().unwrap(),
        "--data",
        fixture_path("box4.csv").to_str().unwrap(),
        "--labels",
        "1=+1,0=-1",
        "--header",
    ]);
    // Either the model only tests features 0..3 (fine) or the mismatch is
    // reported as a runtime error; it must never panic.
    assert!(matches!(out.status.code(), Some(0) | Some(1)));
    assert!(!String::from_utf8_lossy(&out.stderr).contains("panicked"));
}

#[test]
fn ops_sweep_writes_one_row_per_cell() {
    let dir = tempfile::tempdir().unwrap();
    let mut args: Vec<String> = vec![
        "ops-sweep".into(),
        "--learners".into(),
        "or,andor".into(),
        "--ops-list".into(),
        "1,2".into(),
        "--rounds".into(),
        "4".into(),
        "--train-size".into(),
        "300".into(),
        "--test-size".into(),
        "150".into(),
        "--trials".into(),
        "2".into(),
        "--seed".into(),
        "3".into(),
    ];
    args.extend(xor6(dir.path()));
    let out = Command::new(bin()).args(&args).output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let body = std::fs::read_to_string(dir.path().join("out")).unwrap();
    assert_eq!(body.lines().count(), 1 + 4, "header plus 2x2 cells");
    assert!(body.starts_with("dataset,learner,ops,rounds,trials,"));
}

#[test]
fn ratio_table_reports_percent_rows() {
    let dir = tempfile::tempdir().unwrap();
    let mut args: Vec<String> = vec![
        "ratio-table".into(),
        "--learners".into(),
        "andor".into(),
        "--ops".into(),
        "3".into(),
        "--rounds".into(),
        "6".into(),
        "--reference-rounds".into(),
        "6".into(),
        "--train-size".into(),
        "300".into(),
        "--test-size".into(),
        "150".into(),
        "--trials".into(),
        "3".into(),
    ];
    args.extend(xor6(dir.path()));
    let out = Command::new(bin()).args(&args).output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("and-or/stump:"), "stdout: {stdout}");
    assert!(stdout.contains('%'), "stdout: {stdout}");
    let body = std::fs::read_to_string(dir.path().join("out")).unwrap();
    // Header, the reference row, one compared learner.
    assert_eq!(body.lines().count(), 3);
    let reference_row = body.lines().nth(1).unwrap();
    assert!(reference_row.contains("stump"));
    assert!(reference_row.contains(",1,") || reference_row.ends_with(",1,"));
}

#[test]
fn deadlock_check_writes_per_angle_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("angles.csv");
    let out = run(&[
        "deadlock-check",
        "--n-per-quadrant",
        "16",
        "--angles",
        "8",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(
        stdout.contains("max_deviation_from_half=0"),
        "stdout: {stdout}"
    );
    assert!(stdout.contains("antipode_optimal=true"));
    let body = std::fs::read_to_string(&out_path).unwrap();
    assert_eq!(body.lines().count(), 1 + 8);
}

#[test]
fn xor_demo_grid_has_expected_shape() {
    let dir = tempfile::tempdir().unwrap();
    let grid_path = dir.path().join("grid.csv");
    let out = run(&[
        "xor-demo",
        "--learner",
        "or",
        "--ops",
        "2",
        "--rounds",
        "10",
        "--seed",
        "3",
        "--grid-resolution",
        "8",
        "--out",
        grid_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("test_error="), "stdout: {stdout}");
    let body = std::fs::read_to_string(&grid_path).unwrap();
    assert_eq!(body.lines().count(), 1 + 64);
    assert!(body.ends_with('\n'));
}

#[test]
fn jobs_flag_does_not_change_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let run_with = |prefix: &str, jobs: Option<&str>| {
        let mut args: Vec<String> = vec![
            "trials".into(),
            "--learner".into(),
            "or".into(),
            "--ops".into(),
            "2".into(),
            "--rounds".into(),
            "4".into(),
            "--train-size".into(),
            "300".into(),
            "--test-size".into(),
            "150".into(),
            "--trials".into(),
            "4".into(),
            "--seed".into(),
            "9".into(),
            "--data".into(),
            fixture_path("xor6.csv").to_str().unwrap().into(),
            "--labels".into(),
            "pos=+1,neg=-1".into(),
            "--header".into(),
            "--out".into(),
            dir.path().join(prefix).to_str().unwrap().into(),
        ];
        if let Some(j) = jobs {
            args.push("--jobs".into());
            args.push(j.into());
        }
        let out = Command::new(bin()).args(&args).output().unwrap();
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    };
    run_with("par", None);
    run_with("seq", Some("1"));
    for ext in ["csv", "jsonl"] {
        let a = std::fs::read(dir.path().join(format!("par.{ext}"))).unwrap();
        let b = std::fs::read(dir.path().join(format!("seq.{ext}"))).unwrap();
        assert_eq!(a, b, ".{ext} differs between --jobs settings");
    }
}

#[test]
fn preset_sets_split_sizes() {
    // The ionosphere preset needs 351 samples; xor6 has 600, so the
    // command runs; an unknown preset is a usage error.
    let dir = tempfile::tempdir().unwrap();
    let mut args: Vec<String> = vec![
        "trials".into(),
        "--learner".into(),
        "stump".into(),
        "--rounds".into(),
        "2".into(),
        "--preset".into(),
        "ionosphere".into(),
        "--trials".into(),
        "2".into(),
    ];
    args.extend(xor6(dir.path()));
    let out = Command::new(bin()).args(&args).output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let bad: Vec<String> = args
        .iter()
        .map(|a| {
            if a == "ionosphere" {
                "nosuch".to_string()
            } else {
                a.clone()
            }
        })
        .collect();
    let out = Command::new(bin()).args(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
