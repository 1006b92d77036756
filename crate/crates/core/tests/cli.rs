use std::path::Path;
use std::process::{Command, Output};

use gollgr::cli::report::{FitReport, ResidualReport};
use gollgr::regression::RegressionCoefficients;
use gollgr::simulation::{regression_replicate, replicate_rng};

fn gollgr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gollgr"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).display().to_string()
}

#[test]
fn sample_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (path(dir.path(), "a.csv"), path(dir.path(), "b.csv"));
    for out in [&a, &b] {
        let o = gollgr(&[
            "sample", "--alpha", "0.35", "--beta", "0.55", "--delta", "-0.55", "--theta", "0.11", "--n", "100",
            "--seed", "42", "--output", out,
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    assert!(text.starts_with("time\n"));
    assert_eq!(text.lines().count(), 101);
}

#[test]
fn fit_then_residuals() {
    let dir = tempfile::tempdir().unwrap();
    let data = path(dir.path(), "x.csv");
    let fit = path(dir.path(), "fit.json");
    let res = path(dir.path(), "res.json");
    let o = gollgr(&[
        "sample", "--alpha", "1", "--beta", "1", "--delta", "0.5", "--theta", "2", "--n", "400", "--output", &data,
    ]);
    assert!(o.status.success());
    let o = gollgr(&["fit", "--input", &data, "--submodel", "gr", "--output", &fit]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stdout).contains("GR fit, n = 400"));
    let report: FitReport = serde_json::from_str(&std::fs::read_to_string(&fit).unwrap()).unwrap();
    assert!(matches!(report, FitReport::Distribution(ref f) if f.converged));
    let o = gollgr(&["residuals", "--input", &data, "--fit", &fit, "--output", &res]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r: ResidualReport = serde_json::from_str(&std::fs::read_to_string(&res).unwrap()).unwrap();
    assert_eq!(r.residuals.len(), 400);
    assert!(r.summary.mean.abs() < 0.2 && (r.summary.variance - 1.0).abs() < 0.2);
}

/// Survival data with an age-like and a binary covariate, written as
/// time,cens,age,diabetes.
fn write_survival_csv(file: &str, n: usize) {
    let truth = RegressionCoefficients::new(0.37, 0.61, vec![0.55, 1.75], vec![0.65, 2.75]).unwrap();
    let ds = regression_replicate(&truth, n, &mut replicate_rng(5, 0, 0)).unwrap();
    let mut w = csv::Writer::from_path(file).unwrap();
    w.write_record(["time", "cens", "age", "diabetes"]).unwrap();
    for i in 0..ds.len() {
        let age = 40.0 + (i * 7 % 31) as f64;
        let cens = if i % 5 == 0 { "0" } else { "1" };
        w.write_record([
            ds.times()[i].to_string(),
            cens.into(),
            age.to_string(),
            ds.row(i)[1].to_string(),
        ])
        .unwrap();
    }
    w.flush().unwrap();
}

#[test]
fn regress_reads_censoring_and_covariates() {
    let dir = tempfile::tempdir().unwrap();
    let data = path(dir.path(), "surv.csv");
    let fit = path(dir.path(), "reg.json");
    write_survival_csv(&data, 200);
    let o = gollgr(&["regress", "--input", &data, "--submodel", "gr", "--output", &fit]);
    assert!(
        matches!(o.status.code(), Some(0 | 4)),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let report: FitReport = serde_json::from_str(&std::fs::read_to_string(&fit).unwrap()).unwrap();
    let FitReport::Regression(f) = report else {
        panic!("expected a regression report")
    };
    assert_eq!(f.coefficients.n_covariates(), 3);
    assert_eq!(f.n_obs, 200);
    assert_eq!(f.n_failures, 160);
    let stdout = String::from_utf8_lossy(&o.stdout).into_owned() + &String::from_utf8_lossy(&o.stderr);
    assert!(stdout.contains("theta:diabetes"));
}

#[test]
fn ingest_errors_name_row_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let bad = path(dir.path(), "bad.csv");
    std::fs::write(&bad, "time\n1.0\nabc\n").unwrap();
    let o = gollgr(&["fit", "--input", &bad]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("row 2") && err.contains("time"), "{err}");

    std::fs::write(&bad, "t\n1.0\n").unwrap();
    assert_eq!(gollgr(&["fit", "--input", &bad]).status.code(), Some(3));
    std::fs::write(&bad, "time\n1.0\n-2.0\n").unwrap();
    assert_eq!(gollgr(&["fit", "--input", &bad]).status.code(), Some(3));
    std::fs::write(&bad, "time,status\n1.0,2\n").unwrap();
    assert_eq!(gollgr(&["regress", "--input", &bad]).status.code(), Some(3));
    std::fs::write(&bad, "").unwrap();
    assert_eq!(gollgr(&["fit", "--input", &bad]).status.code(), Some(3));
}

#[test]
fn exit_codes() {
    assert_eq!(gollgr(&["fit", "--input", "/no/such/file.csv"]).status.code(), Some(2));
    assert_eq!(gollgr(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(
        gollgr(&["sample", "--alpha", "-1", "--beta", "1", "--delta", "0", "--theta", "1", "--n", "3"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(gollgr(&["--help"]).status.code(), Some(0));

    let dir = tempfile::tempdir().unwrap();
    let data = path(dir.path(), "x.csv");
    let bad_json = path(dir.path(), "fit.json");
    std::fs::write(&data, "time\n1\n2\n3\n4\n5\n").unwrap();
    std::fs::write(&bad_json, "{ not json").unwrap();
    assert_eq!(
        gollgr(&["residuals", "--input", &data, "--fit", &bad_json])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn simulate_from_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = path(dir.path(), "cfg.json");
    let (a, b) = (path(dir.path(), "a.json"), path(dir.path(), "b.json"));
    std::fs::write(
        &cfg,
        r#"{"truth": {"kind": "distribution", "params": {"alpha": 1.0, "beta": 1.0, "delta": 0.5, "theta": 2.0}},
            "sample_sizes": [60], "replicates": 4, "seed": 3, "min_convergence_rate": 0.0}"#,
    )
    .unwrap();
    for out in [&a, &b] {
        let o = gollgr(&["simulate", "--config", &cfg, "--output", out]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}
