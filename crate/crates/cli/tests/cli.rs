//! End-to-end tests of the binary: flag surface, output schema,
//! determinism, and exit codes.

use std::fs;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_adaptive-holdout"))
}

fn run_ok(args: &[&str]) -> String {
    let out = bin().args(args).output().expect("spawn");
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8")
}

fn run_expect_code(args: &[&str], code: i32) -> Output {
    let out = bin().args(args).output().expect("spawn");
    assert_eq!(out.status.code(), Some(code), "command {args:?}: {out:?}");
    out
}

#[test]
fn experiment_schema_and_determinism() {
    let dir = tempfile::tempdir().expect("tempdir");
    let csv_a = dir.path().join("a.csv");
    let csv_b = dir.path().join("b.csv");
    let base = [
        "experiment", "--n", "60", "--d", "40", "--k", "3", "--k", "8", "--reps", "2", "--seed",
        "7",
    ];
    let mut args_a: Vec<&str> = base.to_vec();
    let a_path = csv_a.to_str().unwrap();
    args_a.extend(["--out", a_path]);
    run_ok(&args_a);
    let mut args_b: Vec<&str> = base.to_vec();
    let b_path = csv_b.to_str().unwrap();
    args_b.extend(["--out", b_path]);
    run_ok(&args_b);

    let text_a = fs::read_to_string(&csv_a).expect("csv");
    let text_b = fs::read_to_string(&csv_b).expect("csv");
    assert_eq!(text_a, text_b, "same flags and seed must give identical bytes");

    // RFC-4180 framing with CRLF line endings and the fixed header
    assert!(text_a.starts_with("k,series,mean,std,reps\r\n"));
    let rows: Vec<&str> = text_a.trim_end().split("\r\n").skip(1).collect();
    assert_eq!(rows.len(), 2 * 4, "4 series per k value");
    for series in ["train", "holdout_reported", "fresh", "holdout_true"] {
        assert!(rows.iter().any(|r| r.contains(series)), "missing series {series}");
    }
    for row in &rows {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 5);
        assert_eq!(fields[4], "2");
        let mean: f64 = fields[2].parse().expect("dot-decimal mean");
        assert!((0.0..=1.0).contains(&mean));
    }

    // manifest sits next to the CSV and carries the full parameter set
    let manifest = fs::read_to_string(dir.path().join("a.manifest")).expect("manifest");
    for key in ["subcommand=experiment", "n=60", "d=40", "k=3;8", "seed=7", "mechanism=standard"] {
        assert!(manifest.contains(key), "manifest missing {key}:\n{manifest}");
    }
}

#[test]
fn default_k_sweep_schema() {
    let dir = tempfile::tempdir().expect("tempdir");
    let csv = dir.path().join("defaults.csv");
    run_ok(&[
        "experiment", "--n", "40", "--d", "520", "--reps", "1", "--seed", "1", "--out",
        csv.to_str().unwrap(),
    ]);
    let text = fs::read_to_string(&csv).expect("csv");
    let rows = text.trim_end().split("\r\n").count() - 1;
    assert_eq!(rows, 5 * 4, "default sweep k=10,50,100,200,500 with 4 series each");
    for k in ["10,", "50,", "100,", "200,", "500,"] {
        assert!(text.contains(&format!("\r\n{k}")), "missing default k row {k}");
    }
}

#[test]
fn experiment_thresholdout_flags() {
    let dir = tempfile::tempdir().expect("tempdir");
    let csv = dir.path().join("t.csv");
    run_ok(&[
        "experiment",
        "--n",
        "60",
        "--d",
        "40",
        "--k",
        "5",
        "--reps",
        "2",
        "--mechanism",
        "thresholdout",
        "--T",
        "0.04",
        "--tau",
        "0.01",
        "--budget",
        "100",
        "--noise",
        "gaussian",
        "--seed",
        "3",
        "--out",
        csv.to_str().unwrap(),
    ]);
    let manifest = fs::read_to_string(dir.path().join("t.manifest")).expect("manifest");
    assert!(manifest.contains("mechanism=thresholdout"));
    assert!(manifest.contains("budget=100"));
}

#[test]
fn thread_cap_does_not_change_output_bytes() {
    let dir = tempfile::tempdir().expect("tempdir");
    let free = dir.path().join("free.csv");
    let capped = dir.path().join("capped.csv");
    let base = ["experiment", "--n", "50", "--d", "30", "--k", "4", "--reps", "4", "--seed", "5"];
    let mut args: Vec<&str> = base.to_vec();
    args.extend(["--out", free.to_str().unwrap()]);
    run_ok(&args);
    let mut cmd = bin();
    cmd.env("ADAPTIVE_HOLDOUT_THREADS", "1");
    let mut args: Vec<&str> = base.to_vec();
    args.extend(["--out", capped.to_str().unwrap()]);
    let out = cmd.args(&args).output().expect("spawn");
    assert!(out.status.success());
    assert_eq!(
        fs::read_to_string(&free).unwrap(),
        fs::read_to_string(&capped).unwrap(),
        "worker cap must not change the aggregated output"
    );
}

#[test]
fn usage_errors_exit_2() {
    run_expect_code(&["experiment", "--signal", "bogus"], 2);
    run_expect_code(&["experiment", "--mechanism", "nope"], 2);
    run_expect_code(&["bounds", "dp-compose-advanced", "--eps", "0.1", "--m", "10",
        "--delta-prime", "0"], 2);
    run_expect_code(&["nonsense-subcommand"], 2);
    // k larger than d is a config error surfaced as usage
    run_expect_code(&["experiment", "--n", "10", "--d", "5", "--k", "9"], 2);
}

#[test]
fn resource_errors_exit_3() {
    let out = run_expect_code(
        &["mm-demo", "--domain-size", "10", "--m", "1024", "--tau", "0.3"],
        3,
    );
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("t=1000"), "resource error must report the required t: {err}");
}

#[test]
fn bounds_calculators_print_six_digits() {
    let out = run_ok(&["bounds", "mi-from-dp", "--eps", "0.6931471805599453", "--n", "10"]);
    assert!(out.contains("k_bits = 10.0000"), "{out}");
    let out = run_ok(&["bounds", "mi-from-dl", "--range", "1024", "--beta", "0.0009765625"]);
    assert!(out.contains("k_bits = 20.0000"), "{out}");
    let out = run_ok(&[
        "bounds", "mi-compose", "--k", "3", "--beta", "0.01", "--k", "4", "--beta", "0.02",
    ]);
    assert!(out.contains("k_bits = 7.00000"), "{out}");
    assert!(out.contains("beta   = 0.0300000"), "{out}");
    let out = run_ok(&[
        "bounds",
        "dp-compose-advanced",
        "--eps",
        "0.1",
        "--m",
        "100",
        "--delta-prime",
        "1e-6",
    ]);
    assert!(out.contains("epsilon = 6.30823"), "{out}");
    let out = run_ok(&["bounds", "dp-compose-basic", "--eps", "0.1", "--eps", "0.2"]);
    assert!(out.contains("epsilon = 0.300000"), "{out}");
    let out = run_ok(&["bounds", "mcdiarmid", "--c", "1", "--n", "100", "--alpha", "10"]);
    assert!(out.contains("tail = 0.135335"), "{out}");
    let out = run_ok(&["bounds", "dp-gen", "--c", "0.0025", "--n", "400", "--tau", "0.1"]);
    assert!(out.contains("required_eps = 0.100000"), "{out}");
    let out = run_ok(&["bounds", "bad-event", "--k", "3", "--beta", "0.01", "--p", "0.001"]);
    assert!(out.contains("bound = 0.0180000"), "{out}");
    let out =
        run_ok(&["bounds", "mi-from-dp-iid", "--eps", "0.1", "--n", "100", "--beta", "0.01"]);
    assert!(out.contains("k_bits = 3.06951"), "{out}");
}

#[test]
fn sparse_demo_transcripts() {
    let out = run_ok(&["sparse-demo", "--m", "3", "--budget", "5", "--analyst", "zeros"]);
    assert!(out.contains("transcript: 000"), "{out}");
    let out = run_ok(&["sparse-demo", "--m", "10", "--budget", "2", "--analyst", "ones"]);
    assert!(out.contains("transcript: 11\n"), "{out}");
    assert!(out.contains("ones consumed: 2/2"), "{out}");
    // failure-bound table matches the direct binomial sums at B=2
    for line in ["  1   1", "  2   3", "  3   7", "  4   11"] {
        assert!(out.contains(line), "missing table row {line:?} in:\n{out}");
    }
    // adaptive analyst transcripts are deterministic per seed
    let a = run_ok(&["sparse-demo", "--m", "8", "--budget", "3", "--seed", "9"]);
    let b = run_ok(&["sparse-demo", "--m", "8", "--budget", "3", "--seed", "9"]);
    assert_eq!(a, b);
}

#[test]
fn mm_demo_builtin_and_file_queries() {
    let out = run_ok(&["mm-demo", "--domain-size", "2", "--m", "2", "--tau", "0.9"]);
    assert!(out.contains("t=12"), "{out}");
    assert!(out.contains("hard queries: 0"), "{out}");

    // constant-query suite from a file: a_pub equals the constant, no hard
    let dir = tempfile::tempdir().expect("tempdir");
    let qfile = dir.path().join("queries.txt");
    fs::write(&qfile, "0.5 0.5\n0.25 0.25\n").expect("write");
    let out = run_ok(&[
        "mm-demo",
        "--domain-size",
        "2",
        "--m",
        "2",
        "--tau",
        "0.9",
        "--queries",
        qfile.to_str().unwrap(),
    ]);
    assert!(out.contains("hard queries: 0"), "{out}");
    assert!(out.contains("a_pub=0.500000"), "{out}");
}
