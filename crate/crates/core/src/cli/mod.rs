//! Command-line front end.
//!
//! Exit codes: 0 success, 1 other failures, 2 I/O, 3 parse or usage,
//! 4 non-convergence (the report is still written).

pub mod ingest;
pub mod report;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::inference::{compare, fit_mle, FitOptions, Submodel};
use crate::model::GollgrParams;
use crate::regression::{fit_regression, quantile_residuals, residuals_at, RegressionCoefficients};
use crate::simulation::{run_distribution_study, run_regression_study, StudyConfig, StudyKind};
use ingest::{read_dataset, read_table, to_dataset, IngestError};
use report::{FitReport, ResidualReport, ResidualSummary};

pub const EXIT_OTHER: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_NONCONVERGENCE: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "gollgr",
    version,
    about = "Fit, sample and simulate the GOLLGR lifetime distribution"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Maximum-likelihood fit of an uncensored sample (CSV with a `time` column).
    Fit(FitArgs),
    /// Censored regression with covariate-linked δ and θ.
    Regress(FitArgs),
    /// Draw a sample by inversion.
    Sample(SampleArgs),
    /// Monte Carlo study of the estimators.
    Simulate(SimulateArgs),
    /// Quantile residuals of a saved fit report.
    Residuals(ResidualArgs),
    /// Fit GOLLGR, OLLGR, EGR and GR and test the nested models.
    Compare(FitArgs),
}

#[derive(Debug, Args)]
pub struct OptimizerArgs {
    /// Simplex size tolerance (the objective spread tolerance is tol/100).
    #[arg(long)]
    pub tol: Option<f64>,
    /// JSON file with full optimizer options.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// JSON report path.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value = "gollgr", value_parser = parse_submodel)]
    pub submodel: Submodel,
    /// Starting point: alpha,beta,delta,theta (fit only).
    #[arg(long, value_delimiter = ',', num_args = 4)]
    pub init: Option<Vec<f64>>,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub delta: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub theta: f64,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// CSV path; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Design {
    /// α=0.35, β=0.55, δ=−0.55, θ=0.11 with n ∈ {50,150,500}
    Distribution,
    /// Regression design with one binary covariate, n ∈ {150,350,650}
    Regression,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Study configuration (JSON); overrides --design.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "distribution")]
    pub design: Design,
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ResidualArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Report written by `fit` or `regress`.
    #[arg(long)]
    pub fit: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn parse_submodel(s: &str) -> Result<Submodel, String> {
    s.parse().map_err(|e: crate::Error| e.to_string())
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error("{path}: invalid JSON: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    NotConverged(String),
    #[error(transparent)]
    Model(#[from] crate::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Ingest(IngestError::Io { .. }) => EXIT_IO,
            CliError::Ingest(_) | CliError::Json { .. } | CliError::Usage(_) => EXIT_PARSE,
            CliError::NotConverged(_)
            | CliError::Model(crate::Error::NonConvergence { .. } | crate::Error::StudyAborted(_)) => {
                EXIT_NONCONVERGENCE
            }
            CliError::Model(_) => EXIT_OTHER,
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Messages go to stderr, tables to stdout.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_PARSE } else { 0 };
        }
    };
    match run(&cli) {
        Ok(stdout) => {
            print!("{stdout}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn require_file(path: &Path) -> Result<(), CliError> {
    if path.is_file() {
        Ok(())
    } else {
        Err(CliError::Io {
            path: path.display().to_string(),
            source: std::io::Error::new(std::io::ErrorKind::NotFound, "file not found"),
        })
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    require_file(path)?;
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.display().to_string(),
        source,
    })
}

fn emit(output: Option<&Path>, json: &str) -> Result<(), CliError> {
    if let Some(path) = output {
        report::write_file(path, json).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
    }
    Ok(())
}

fn apply_tol(opts: &mut FitOptions, tol: Option<f64>) -> Result<(), CliError> {
    if let Some(t) = tol {
        if !(t > 0.0) || !t.is_finite() {
            return Err(CliError::Usage(format!("--tol must be positive, got {t}")));
        }
        opts.simplex.x_tol = t;
        opts.simplex.f_tol = t * 1e-2;
    }
    Ok(())
}

fn fit_options(args: &OptimizerArgs) -> Result<FitOptions, CliError> {
    let mut opts = match &args.config {
        Some(p) => read_json(p)?,
        None => FitOptions::default(),
    };
    apply_tol(&mut opts, args.tol)?;
    Ok(opts)
}

fn converged_or(ok: bool, what: &str, out: String) -> Result<String, CliError> {
    if ok {
        Ok(out)
    } else {
        eprint!("{out}");
        Err(CliError::NotConverged(format!(
            "{what} did not converge; the best point and diagnostics were written to the report"
        )))
    }
}

pub fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Fit(a) => {
            require_file(&a.input)?;
            let opts = fit_options(&a.optimizer)?;
            let table = read_table(&a.input)?;
            if !table.is_plain_sample() {
                return Err(CliError::Usage(
                    "fit expects an uncensored sample without covariates; use `regress`".into(),
                ));
            }
            let init = match &a.init {
                Some(v) => Some(GollgrParams::new(v[0], v[1], v[2], v[3])?),
                None => None,
            };
            let fit = fit_mle(&table.times, init, a.submodel, &opts)?;
            emit(a.output.as_deref(), &report::to_json(&fit))?;
            converged_or(fit.converged, "fit", report::fit_table(&fit))
        }
        Command::Regress(a) => {
            require_file(&a.input)?;
            let opts = fit_options(&a.optimizer)?;
            let table = read_table(&a.input)?;
            let ds = to_dataset(&table, &a.input.display().to_string())?;
            let fit = fit_regression(&ds, a.submodel, None, &opts)?;
            emit(a.output.as_deref(), &report::to_json(&fit))?;
            converged_or(
                fit.converged,
                "regression",
                report::regression_table(&fit, &table.covariate_names),
            )
        }
        Command::Compare(a) => {
            require_file(&a.input)?;
            let opts = fit_options(&a.optimizer)?;
            let table = read_table(&a.input)?;
            if !table.is_plain_sample() {
                return Err(CliError::Usage(
                    "compare expects an uncensored sample without covariates".into(),
                ));
            }
            let c = compare(&table.times, &opts)?;
            emit(a.output.as_deref(), &report::to_json(&c))?;
            let all = c.fits.iter().all(|f| f.converged);
            converged_or(all, "at least one submodel fit", report::comparison_table(&c))
        }
        Command::Sample(a) => {
            let p = GollgrParams::new(a.alpha, a.beta, a.delta, a.theta)?;
            let xs = p.sample(a.n, a.seed)?;
            let mut csv = String::from("time\n");
            for x in xs {
                csv.push_str(&format!("{x}\n"));
            }
            match &a.output {
                Some(path) => {
                    emit(Some(path), &csv)?;
                    Ok(String::new())
                }
                None => Ok(csv),
            }
        }
        Command::Simulate(a) => {
            let mut cfg = match (&a.config, a.design) {
                (Some(p), _) => read_json::<StudyConfig>(p)?,
                (None, Design::Distribution) => StudyConfig::distribution_design(1000, 0),
                (None, Design::Regression) => StudyConfig::regression_design(1000, 0),
            };
            if let Some(r) = a.reps {
                cfg.replicates = r;
            }
            if let Some(s) = &a.sizes {
                cfg.sample_sizes = s.clone();
            }
            if let Some(s) = a.seed {
                cfg.seed = s;
            }
            apply_tol(&mut cfg.fit, a.tol)?;
            let rep = match cfg.kind() {
                StudyKind::Distribution => run_distribution_study(&cfg)?,
                StudyKind::Regression => run_regression_study(&cfg)?,
            };
            emit(a.output.as_deref(), &report::to_json(&rep))?;
            eprintln!("runtime: {:.1} s", rep.runtime.as_secs_f64());
            Ok(rep.to_table())
        }
        Command::Residuals(a) => {
            require_file(&a.input)?;
            let fit: FitReport = read_json(&a.fit)?;
            let ds = read_dataset(&a.input)?;
            let r = match &fit {
                FitReport::Regression(f) => quantile_residuals(&ds, f)?,
                FitReport::Distribution(f) => {
                    if !f.converged {
                        return Err(CliError::NotConverged("the saved fit did not converge".into()));
                    }
                    let p = &f.estimates;
                    let c = RegressionCoefficients::new(
                        p.alpha(),
                        p.beta(),
                        vec![(p.delta() + 1.0).ln()],
                        vec![p.theta().ln()],
                    )?;
                    residuals_at(&ds, &c)?
                }
            };
            let rep = ResidualReport {
                summary: ResidualSummary::from_residuals(&r),
                residuals: r,
            };
            emit(a.output.as_deref(), &report::to_json(&rep))?;
            Ok(report::residual_table(&rep.summary))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flags() {
        let cli = Cli::try_parse_from([
            "gollgr",
            "simulate",
            "--design",
            "regression",
            "--reps",
            "3",
            "--sizes",
            "10,20",
            "--seed",
            "9",
        ])
        .unwrap();
        match cli.command {
            Command::Simulate(a) => {
                assert_eq!(a.design, Design::Regression);
                assert_eq!(a.sizes, Some(vec![10, 20]));
            }
            _ => panic!(),
        }
        let cli = Cli::try_parse_from([
            "gollgr", "sample", "--alpha", "0.35", "--beta", "0.55", "--delta", "-0.55", "--theta", "0.11", "--n", "5",
        ])
        .unwrap();
        assert!(matches!(cli.command, Command::Sample(SampleArgs { n: 5, .. })));
        assert!(Cli::try_parse_from(["gollgr", "fit", "--input", "x", "--submodel", "weibull"]).is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(
            main_with_args(["gollgr", "fit", "--input", "/nonexistent/file.csv"]),
            EXIT_IO
        );
        assert_eq!(main_with_args(["gollgr", "bogus"]), EXIT_PARSE);
        let e = CliError::Model(crate::Error::NonConvergence { msg: String::new() });
        assert_eq!(e.exit_code(), EXIT_NONCONVERGENCE);
    }
}
