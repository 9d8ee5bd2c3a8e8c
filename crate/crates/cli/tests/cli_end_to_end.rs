//! End-to-end runs of the `shadowboost` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_shadowboost"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn assert_success(out: &Output) {
    assert!(
        out.status.success(),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn simulate_csv(dir: &Path, n: usize, p: usize, p_inf: usize, seed: u64) -> PathBuf {
    let data = dir.join(format!("data_{}.csv", seed));
    let out = run(&[
        "simulate",
        "--n",
        &n.to_string(),
        "--p",
        &p.to_string(),
        "--p-inf",
        &p_inf.to_string(),
        "--rho",
        "0.5",
        "--seed",
        &seed.to_string(),
        "--output",
        data.to_str().unwrap(),
    ]);
    assert_success(&out);
    data
}

#[test]
fn simulate_then_fit_probe_stabsel_cv() {
    let dir = tempfile::tempdir().unwrap();
    let data = simulate_csv(dir.path(), 60, 8, 2, 3);

    let sel = dir.path().join("fit.csv");
    let out = run(&[
        "fit",
        "--input",
        data.to_str().unwrap(),
        "--response",
        "y",
        "--loss",
        "logistic",
        "--m-stop",
        "30",
        "--output",
        sel.to_str().unwrap(),
    ]);
    assert_success(&out);
    let text = fs::read_to_string(&sel).unwrap();
    assert!(text.starts_with("variable,selected\n"));
    assert_eq!(text.trim_end().lines().count(), 9, "header + 8 variables");

    let sel = dir.path().join("probe.csv");
    let out = run(&[
        "probe",
        "--input",
        data.to_str().unwrap(),
        "--response",
        "y",
        "--loss",
        "logistic",
        "--seed",
        "7",
        "--output",
        sel.to_str().unwrap(),
    ]);
    assert_success(&out);
    assert!(String::from_utf8_lossy(&out.stdout).contains("probe:"));

    let sel = dir.path().join("stabsel.csv");
    let out = run(&[
        "stabsel",
        "--input",
        data.to_str().unwrap(),
        "--response",
        "y",
        "--loss",
        "logistic",
        "--b",
        "10",
        "--pfer",
        "1",
        "--pi-thr",
        "0.8",
        "--cap",
        "200",
        "--seed",
        "7",
        "--output",
        sel.to_str().unwrap(),
    ]);
    assert_success(&out);
    let text = fs::read_to_string(&sel).unwrap();
    assert!(text.starts_with("variable,selected,frequency\n"));

    let sel = dir.path().join("cv.csv");
    let risk = dir.path().join("risk.json");
    let out = run(&[
        "cv",
        "--input",
        data.to_str().unwrap(),
        "--response",
        "y",
        "--loss",
        "logistic",
        "--folds",
        "5",
        "--m-max",
        "40",
        "--seed",
        "7",
        "--output",
        sel.to_str().unwrap(),
        "--risk-json",
        risk.to_str().unwrap(),
    ]);
    assert_success(&out);
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&risk).unwrap()).unwrap();
    assert!(doc["m_opt"].is_u64());
    assert_eq!(doc["mean_risk"].as_array().unwrap().len(), 41);
}

#[test]
fn probe_selections_come_from_config_file_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let data = simulate_csv(dir.path(), 50, 6, 1, 11);
    let cfg = dir.path().join("probe.conf");
    fs::write(&cfg, "loss = logistic\nnu = 0.2\ncap = 120\n").unwrap();

    let sel_a = dir.path().join("a.csv");
    let out = run(&[
        "probe",
        "--input",
        data.to_str().unwrap(),
        "--response",
        "y",
        "--config",
        cfg.to_str().unwrap(),
        "--seed",
        "5",
        "--output",
        sel_a.to_str().unwrap(),
    ]);
    assert_success(&out);

    let sel_b = dir.path().join("b.csv");
    let out = run(&[
        "probe",
        "--input",
        data.to_str().unwrap(),
        "--response",
        "y",
        "--loss",
        "logistic",
        "--nu",
        "0.2",
        "--cap",
        "120",
        "--seed",
        "5",
        "--output",
        sel_b.to_str().unwrap(),
    ]);
    assert_success(&out);
    assert_eq!(
        fs::read_to_string(&sel_a).unwrap(),
        fs::read_to_string(&sel_b).unwrap(),
        "config file and explicit flags must agree"
    );
}

#[test]
fn exit_codes_distinguish_error_classes() {
    let dir = tempfile::tempdir().unwrap();
    let data = simulate_csv(dir.path(), 30, 4, 1, 13);
    let sel = dir.path().join("sel.csv");

    // Config error: all three stability hyperparameters given.
    let out = run(&[
        "stabsel",
        "--input",
        data.to_str().unwrap(),
        "--response",
        "y",
        "--q",
        "2",
        "--pfer",
        "1",
        "--pi-thr",
        "0.8",
        "--output",
        sel.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));

    // Config error: unknown method token.
    let out = run(&[
        "benchmark",
        "--n",
        "20",
        "--p",
        "4",
        "--p-inf",
        "1",
        "--rho",
        "0",
        "--methods",
        "wizardry",
        "--out-csv",
        sel.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));

    // Data error: missing input file.
    let out = run(&[
        "fit",
        "--input",
        dir.path().join("nope.csv").to_str().unwrap(),
        "--response",
        "y",
        "--output",
        sel.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));

    // Data error: response column absent.
    let out = run(&[
        "fit",
        "--input",
        data.to_str().unwrap(),
        "--response",
        "zzz",
        "--output",
        sel.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));

    // Clap usage error also exits 2.
    let out = bin().arg("--definitely-not-a-flag").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_is_deterministic_and_truth_matches() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let truth = dir.path().join("truth.json");
    for (path, truth_arg) in [(&a, Some(&truth)), (&b, None)] {
        let mut args = vec![
            "simulate",
            "--n",
            "40",
            "--p",
            "6",
            "--p-inf",
            "2",
            "--rho",
            "0.9",
            "--seed",
            "21",
            "--output",
            path.to_str().unwrap(),
        ];
        if let Some(t) = truth_arg {
            args.push("--truth");
            args.push(t.to_str().unwrap());
        }
        assert_success(&run(&args));
    }
    assert_eq!(
        fs::read_to_string(&a).unwrap(),
        fs::read_to_string(&b).unwrap()
    );
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&truth).unwrap()).unwrap();
    assert_eq!(doc["informative_set"].as_array().unwrap().len(), 2);
    assert_eq!(doc["beta"].as_array().unwrap().len(), 6);
}

#[test]
fn benchmark_with_scenario_file_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = dir.path().join("scenario.conf");
    fs::write(
        &scenario,
        "# tiny smoke scenario\nn = 40\np = 8\np_inf = 2\nrho = 0.5\nreplications = 2\n",
    )
    .unwrap();
    let csv = dir.path().join("metrics.csv");
    let json = dir.path().join("summary.json");
    let out = run(&[
        "benchmark",
        "--scenario-file",
        scenario.to_str().unwrap(),
        "--methods",
        "probing,stabsel",
        "--pfer",
        "1",
        "--pi-thr",
        "0.8",
        "--b",
        "8",
        "--stab-cap",
        "150",
        "--seed",
        "9",
        "--out-csv",
        csv.to_str().unwrap(),
        "--out-json",
        json.to_str().unwrap(),
    ]);
    assert_success(&out);

    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.trim_end().lines().collect();
    assert_eq!(lines.len(), 1 + 2 * 2, "header + scenarios x replicates x methods");
    assert!(lines[0].ends_with(",error"));

    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    let methods = &doc["scenarios"]["n40_p8_pinf2_rho0.5"]["methods"];
    assert!(methods["probing"]["fdr_mean"].is_number());
    assert!(methods["stabsel_pi0.8_pfer1"]["runs"].as_u64() == Some(2));
}

#[test]
fn benchmark_csv_is_byte_identical_with_omit_runtime() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = run(&[
            "benchmark",
            "--n",
            "40",
            "--p",
            "8",
            "--p-inf",
            "2",
            "--rho",
            "0.5",
            "--replications",
            "3",
            "--methods",
            "probing,cv",
            "--cv-folds",
            "4",
            "--cv-m-max",
            "40",
            "--seed",
            "33",
            "--omit-runtime",
            "--out-csv",
            path.to_str().unwrap(),
        ]);
        assert_success(&out);
    }
    let bytes_a = fs::read(&a).unwrap();
    let bytes_b = fs::read(&b).unwrap();
    assert_eq!(bytes_a, bytes_b);
}
