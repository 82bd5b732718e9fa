mod common;

use std::path::Path;
use std::process::{Command, Output};

use causalab::cli::{ReportFile, Results};
use causalab::scm::{demo1_env, demo1_spec, demo3_spec, Dataset, RngHandle};
use causalab::validate::Verdict;
use common::*;

fn causalab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_causalab"))
        .args(args)
        .env_remove("CAUSALAB_SEED")
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn report(path: &Path) -> ReportFile {
    ReportFile::from_json(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn run_is_byte_identical_across_runs_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let c = dir.path().join("c.csv");
    for (path, threads) in [(&a, "1"), (&b, "1"), (&c, "4")] {
        let out = causalab(&[
            "run",
            "--demo",
            "1",
            "--reps",
            "2",
            "--seed",
            "7",
            "--threads",
            threads,
            "--out",
            p(path),
        ]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    }
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    assert_eq!(bytes, std::fs::read(&c).unwrap());
    assert!(String::from_utf8(bytes)
        .unwrap()
        .starts_with("demo,scenario,method,metric,mean,std,n_reps\n"));
}

#[test]
fn seed_falls_back_to_environment_variable() {
    let explicit = causalab(&["run", "--demo", "4", "--reps", "2", "--seed", "11"]);
    let from_env = Command::new(env!("CARGO_BIN_EXE_causalab"))
        .args(["run", "--demo", "4", "--reps", "2"])
        .env("CAUSALAB_SEED", "11")
        .output()
        .unwrap();
    let default = causalab(&["run", "--demo", "4", "--reps", "2"]);
    let forty_two = causalab(&["run", "--demo", "4", "--reps", "2", "--seed", "42"]);
    assert_eq!(explicit.stdout, from_env.stdout);
    assert_eq!(default.stdout, forty_two.stdout);
    assert_ne!(explicit.stdout, default.stdout);
}

#[test]
fn run_json_report_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d3.json");
    let out = causalab(&[
        "run",
        "--demo",
        "3",
        "--reps",
        "3",
        "--format",
        "json",
        "--out",
        p(&path),
    ]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let parsed = ReportFile::from_json(&text).unwrap();
    assert_eq!(parsed.schema_version, "1");
    assert_eq!(parsed.to_json().unwrap(), text);
    let Results::Demo(demo) = parsed.results else {
        panic!("expected a demo report")
    };
    assert_eq!(demo.demo_id, 3);
    assert!(demo
        .get("n1600", "dml", "tau_hat")
        .unwrap()
        .coverage
        .is_some());
}

#[test]
fn usage_errors_exit_one() {
    let out = causalab(&["run", "--demo", "9"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--help"));
    assert_eq!(code(&causalab(&["run"])), 1);
    assert_eq!(code(&causalab(&["estimate", "--method", "magic"])), 1);
    assert_eq!(code(&causalab(&[])), 1);
}

#[test]
fn unwritable_output_exits_two() {
    let out = causalab(&[
        "run",
        "--demo",
        "1",
        "--reps",
        "1",
        "--out",
        "/nonexistent-dir/out.csv",
    ]);
    assert_eq!(code(&out), 2);
    let missing = causalab(&[
        "estimate",
        "--input",
        "/nonexistent-dir/in.csv",
        "--method",
        "ols",
        "--treatment",
        "D",
        "--outcome",
        "Y",
    ]);
    assert_eq!(code(&missing), 2);
}

#[test]
fn estimate_dml_on_exported_demo3_data() {
    let dir = tempfile::tempdir().unwrap();
    let data = demo3_spec()
        .sample(&Default::default(), 1600, RngHandle::new(40, 0))
        .unwrap();
    let input = write_csv(&data, dir.path(), "d3.csv");
    let out_path = dir.path().join("est.json");
    let out = causalab(&[
        "estimate",
        "--input",
        p(&input),
        "--method",
        "dml",
        "--treatment",
        "D",
        "--outcome",
        "Y",
        "--covariates",
        "X",
        "--out",
        p(&out_path),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let Results::Estimate(est) = report(&out_path).results else {
        panic!()
    };
    assert!((0.4..=0.6).contains(&est.tau_hat), "{}", est.tau_hat);
    assert_eq!(est.n_used, 1600);

    let raw: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    let fields: Vec<&str> = raw["results"]["estimate"]
        .as_object()
        .unwrap()
        .keys()
        .map(|k| k.as_str())
        .collect();
    for key in [
        "tau_hat",
        "std_error",
        "ci_low",
        "ci_high",
        "method",
        "n_used",
    ] {
        assert!(fields.contains(&key), "missing {key}");
    }
}

#[test]
fn estimate_iv_and_backdoor() {
    let dir = tempfile::tempdir().unwrap();
    let iv_data = sample(&confounded_iv_spec(0.5), 20_000, 41);
    let input = write_csv(&iv_data, dir.path(), "iv.csv");
    let out_path = dir.path().join("iv.json");
    let out = causalab(&[
        "estimate",
        "--input",
        p(&input),
        "--method",
        "iv",
        "--treatment",
        "D",
        "--outcome",
        "Y",
        "--instrument",
        "Z",
        "--out",
        p(&out_path),
    ]);
    assert_eq!(code(&out), 0);
    let Results::Estimate(est) = report(&out_path).results else {
        panic!()
    };
    assert!((est.tau_hat - 0.5).abs() < 0.05);

    let bd = sample(&discrete_backdoor_spec(), 20_000, 42);
    let input = write_csv(&bd, dir.path(), "bd.csv");
    let out = causalab(&[
        "estimate",
        "--input",
        p(&input),
        "--method",
        "backdoor",
        "--treatment",
        "X",
        "--outcome",
        "Y",
        "--covariates",
        "Z",
    ]);
    assert_eq!(code(&out), 0);
    let parsed = ReportFile::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    let Results::Estimate(est) = parsed.results else {
        panic!()
    };
    assert!((est.tau_hat - 1.0).abs() < 0.05);
}

#[test]
fn estimate_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.csv");
    std::fs::write(&empty, "").unwrap();
    let out = causalab(&[
        "estimate",
        "--input",
        p(&empty),
        "--method",
        "ols",
        "--treatment",
        "D",
        "--outcome",
        "Y",
    ]);
    assert_eq!(code(&out), 1);

    let data = sample(&confounded_iv_spec(0.5), 100, 43);
    let input = write_csv(&data, dir.path(), "iv.csv");
    let out = causalab(&[
        "estimate",
        "--input",
        p(&input),
        "--method",
        "ols",
        "--treatment",
        "D",
        "--outcome",
        "Q",
    ]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("Q"));
}

#[test]
fn estimator_failures_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let weak = Dataset::from_columns([
        ("Z", vec![1.0, -1.0, 1.0, -1.0, 1.0, -1.0]),
        ("D", vec![2.0, 2.0, 3.0, 3.0, 4.0, 4.0]),
        ("Y", vec![0.0, 1.0, 0.0, 1.0, 0.5, 0.2]),
    ])
    .unwrap();
    let input = write_csv(&weak, dir.path(), "weak.csv");
    let out = causalab(&[
        "estimate",
        "--input",
        p(&input),
        "--method",
        "iv",
        "--treatment",
        "D",
        "--outcome",
        "Y",
        "--instrument",
        "Z",
    ]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("weak instrument"));

    let no_overlap = Dataset::from_columns([
        ("X", vec![1.0, 1.0, 0.0, 0.0, 1.0]),
        ("Z", vec![0.0, 0.0, 0.0, 0.0, 1.0]),
        ("Y", vec![1.0, 2.0, 0.5, 0.4, 3.0]),
    ])
    .unwrap();
    let input = write_csv(&no_overlap, dir.path(), "overlap.csv");
    let out = causalab(&[
        "estimate",
        "--input",
        p(&input),
        "--method",
        "backdoor",
        "--treatment",
        "X",
        "--outcome",
        "Y",
        "--covariates",
        "Z",
    ]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("positivity"));
}

#[test]
fn validate_ci_on_chain() {
    let dir = tempfile::tempdir().unwrap();
    let data = sample(&chain_spec(), 5000, 44);
    let input = write_csv(&data, dir.path(), "chain.csv");
    let out = causalab(&[
        "validate",
        "ci",
        "--input",
        p(&input),
        "--x",
        "X",
        "--y",
        "Y",
        "--cond",
        "Z",
    ]);
    assert_eq!(code(&out), 0);
    let parsed = ReportFile::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    let Results::CiTest(res) = parsed.results else {
        panic!()
    };
    assert!(res.p_value > 0.05, "p = {}", res.p_value);

    let tiny = sample(&chain_spec(), 4, 45);
    let input = write_csv(&tiny, dir.path(), "tiny.csv");
    let out = causalab(&[
        "validate",
        "ci",
        "--input",
        p(&input),
        "--x",
        "X",
        "--y",
        "Y",
        "--cond",
        "Z",
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn validate_invariance_flags_spurious_feature() {
    let dir = tempfile::tempdir().unwrap();
    let data = demo1_spec()
        .sample(&demo1_env(1.0), 5000, RngHandle::new(46, 0))
        .unwrap();
    let input = write_csv(&data, dir.path(), "d1.csv");
    let out = causalab(&[
        "validate",
        "invariance",
        "--input",
        p(&input),
        "--feature",
        "X_spur",
        "--values",
        "-2,2",
        "--features",
        "X_causal,X_spur",
        "--outcome",
        "Y",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let parsed = ReportFile::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    let Results::Invariance(rep) = parsed.results else {
        panic!()
    };
    assert_eq!(rep.verdict, Verdict::Sensitive);
}

#[test]
fn validate_invariance_with_irm_model() {
    let dir = tempfile::tempdir().unwrap();
    let spec = demo1_spec();
    let mut parts = Vec::new();
    for (k, s) in [1.0, -1.0].into_iter().enumerate() {
        let mut d = spec
            .sample(&demo1_env(s), 2000, RngHandle::new(47, k as u64))
            .unwrap();
        d.push_column("env", vec![k as f64; 2000]).unwrap();
        parts.push(d);
    }
    let data = Dataset::concat(&parts).unwrap();
    let input = write_csv(&data, dir.path(), "envs.csv");
    let out = causalab(&[
        "validate",
        "invariance",
        "--input",
        p(&input),
        "--feature",
        "X_spur",
        "--values",
        "-2,2",
        "--threshold",
        "0.2",
        "--features",
        "X_causal,X_spur",
        "--outcome",
        "Y",
        "--lambda",
        "10000",
        "--env",
        "env",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let parsed = ReportFile::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    let Results::Invariance(rep) = parsed.results else {
        panic!()
    };
    assert_eq!(rep.verdict, Verdict::Invariant, "{rep:?}");
}
