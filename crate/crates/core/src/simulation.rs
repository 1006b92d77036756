//! Monte Carlo studies: draw, refit, and summarize AE / bias / MSE per
//! parameter and sample size.
//!
//! Replicate `r` of sample-size index `k` draws from a ChaCha8 generator
//! seeded with the master seed on stream `(k << 32) | r`, so any replicate
//! can be regenerated on its own and the report does not depend on the
//! number of worker threads.

use std::time::{Duration, Instant};

use rand::distributions::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::inference::{fit_mle, FitOptions, Submodel};
use crate::model::GollgrParams;
use crate::regression::{fit_regression, link_params, RegressionCoefficients, SurvivalDataset};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "lowercase")]
pub enum StudyTruth {
    Distribution(GollgrParams),
    Regression(RegressionCoefficients),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StudyKind {
    Distribution,
    Regression,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    pub truth: StudyTruth,
    pub sample_sizes: Vec<usize>,
    pub replicates: usize,
    pub seed: u64,
    #[serde(default = "study_fit_options")]
    pub fit: FitOptions,
    /// Start every fit at the true parameters.
    #[serde(default = "default_true")]
    pub init_at_truth: bool,
    /// A cell below this convergence rate aborts the study.
    #[serde(default = "default_min_rate")]
    pub min_convergence_rate: f64,
}

fn default_true() -> bool {
    true
}

fn default_min_rate() -> f64 {
    0.5
}

/// Single start at the supplied initial value.
pub fn study_fit_options() -> FitOptions {
    FitOptions {
        multi_start: false,
        ..FitOptions::default()
    }
}

impl StudyConfig {
    pub fn new(truth: StudyTruth, sample_sizes: Vec<usize>, replicates: usize, seed: u64) -> Self {
        Self {
            truth,
            sample_sizes,
            replicates,
            seed,
            fit: study_fit_options(),
            init_at_truth: true,
            min_convergence_rate: default_min_rate(),
        }
    }

    /// α = 0.35, β = 0.55, δ = −0.55, θ = 0.11; n ∈ {50, 150, 500}.
    pub fn distribution_design(replicates: usize, seed: u64) -> Self {
        let truth = GollgrParams::new(0.35, 0.55, -0.55, 0.11).expect("valid design");
        Self::new(StudyTruth::Distribution(truth), vec![50, 150, 500], replicates, seed)
    }

    /// α = 0.37, β = 0.61, λ_δ = (0.55, 1.75), λ_θ = (0.65, 2.75) with one
    /// Bernoulli(0.5) covariate; n ∈ {150, 350, 650}.
    pub fn regression_design(replicates: usize, seed: u64) -> Self {
        let truth = RegressionCoefficients::new(0.37, 0.61, vec![0.55, 1.75], vec![0.65, 2.75]).expect("valid design");
        Self::new(StudyTruth::Regression(truth), vec![150, 350, 650], replicates, seed)
    }

    pub fn kind(&self) -> StudyKind {
        match self.truth {
            StudyTruth::Distribution(_) => StudyKind::Distribution,
            StudyTruth::Regression(_) => StudyKind::Regression,
        }
    }

    fn validate(&self, kind: StudyKind) -> Result<()> {
        if self.kind() != kind {
            return Err(domain(
                "StudyConfig",
                format!("expected a {kind:?} study, got {:?}", self.kind()),
            ));
        }
        if self.replicates == 0 {
            return Err(domain("StudyConfig", "replicates must be at least 1"));
        }
        if self.sample_sizes.is_empty() || self.sample_sizes.contains(&0) {
            return Err(domain("StudyConfig", "sample sizes must be positive"));
        }
        if self.replicates > u32::MAX as usize || self.sample_sizes.len() > u32::MAX as usize {
            return Err(domain(
                "StudyConfig",
                "too many replicates or sample sizes for the stream split",
            ));
        }
        Ok(())
    }

    fn truth_vec(&self) -> (Vec<String>, Vec<f64>) {
        match &self.truth {
            StudyTruth::Distribution(p) => (
                ["alpha", "beta", "delta", "theta"]
                    .iter()
                    .map(|s| s.to_string())
                    .collect(),
                p.to_array().to_vec(),
            ),
            StudyTruth::Regression(c) => (c.names(), c.to_vec()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterSummary {
    pub parameter: String,
    pub truth: f64,
    pub ae: f64,
    pub bias: f64,
    pub mse: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub n: usize,
    pub attempted: usize,
    pub converged: usize,
    pub convergence_rate: f64,
    pub parameters: Vec<ParameterSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyReport {
    pub kind: StudyKind,
    pub replicates: usize,
    pub seed: u64,
    pub cells: Vec<CellSummary>,
    /// Wall-clock time; left out of serialized reports so they stay
    /// reproducible.
    #[serde(skip)]
    pub runtime: Duration,
}

impl StudyReport {
    pub fn cell(&self, n: usize) -> Option<&CellSummary> {
        self.cells.iter().find(|c| c.n == n)
    }

    /// Plain-text table: one row per parameter, AE / Bias / MSE per n.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let names: Vec<&str> = self
            .cells
            .first()
            .map(|c| c.parameters.iter().map(|p| p.parameter.as_str()).collect())
            .unwrap_or_default();
        let width = names.iter().map(|s| s.len()).max().unwrap_or(9).max(9);
        out.push_str(&format!("{:width$}", ""));
        for c in &self.cells {
            out.push_str(&format!(" | {:^32}", format!("n = {}", c.n)));
        }
        out.push('\n');
        out.push_str(&format!("{:width$}", "parameter"));
        for _ in &self.cells {
            out.push_str(&format!(" | {:>10} {:>10} {:>10}", "AE", "Bias", "MSE"));
        }
        out.push('\n');
        for (i, name) in names.iter().enumerate() {
            out.push_str(&format!("{name:width$}"));
            for c in &self.cells {
                let p = &c.parameters[i];
                out.push_str(&format!(" | {:>10.4} {:>10.4} {:>10.4}", p.ae, p.bias, p.mse));
            }
            out.push('\n');
        }
        out.push_str(&format!("{:width$}", "converged"));
        for c in &self.cells {
            out.push_str(&format!(" | {:>32}", format!("{}/{}", c.converged, c.attempted)));
        }
        out.push('\n');
        out
    }
}

/// Neumaier-compensated sum in iteration order.
pub(crate) fn neumaier_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Generator for replicate `rep` of sample-size index `size_index`.
pub fn replicate_rng(seed: u64, size_index: usize, rep: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((size_index as u64) << 32) | rep as u64);
    rng
}

/// The sample a distribution study fits for one replicate.
pub fn distribution_replicate(truth: &GollgrParams, n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
    truth.sample_with(n, rng)
}

/// The dataset a regression study fits for one replicate: every
/// non-intercept covariate is Bernoulli(0.5), then x_i is drawn by inversion
/// at the row's (δ_i, θ_i). No censoring.
pub fn regression_replicate(truth: &RegressionCoefficients, n: usize, rng: &mut ChaCha8Rng) -> Result<SurvivalDataset> {
    let q = truth.n_covariates() - 1;
    let mut times = Vec::with_capacity(n);
    let mut covs = Vec::with_capacity(n);
    for _ in 0..n {
        let v: Vec<f64> = (0..q).map(|_| if rng.gen_bool(0.5) { 1.0 } else { 0.0 }).collect();
        let mut row = vec![1.0];
        row.extend(&v);
        let p = link_params(&row, truth)?;
        let u: f64 = rng.sample(Open01);
        times.push(p.quantile(u)?);
        covs.push(v);
    }
    SurvivalDataset::with_intercept(times, vec![true; n], &covs)
}

/// Estimates from one replicate, or `None` when the fit did not converge.
type Outcome = Result<Option<Vec<f64>>>;

fn run_study<F>(cfg: &StudyConfig, fit_one: F) -> Result<StudyReport>
where
    F: Fn(usize, &mut ChaCha8Rng) -> Outcome + Sync,
{
    let start = Instant::now();
    let (names, truth) = cfg.truth_vec();
    let mut cells = Vec::with_capacity(cfg.sample_sizes.len());
    for (k, &n) in cfg.sample_sizes.iter().enumerate() {
        let outcomes: Vec<Outcome> = (0..cfg.replicates)
            .into_par_iter()
            .map(|r| fit_one(n, &mut replicate_rng(cfg.seed, k, r)))
            .collect();
        let mut estimates = Vec::with_capacity(cfg.replicates);
        for o in outcomes {
            match o {
                Ok(Some(e)) => estimates.push(e),
                Ok(None) | Err(Error::NonConvergence { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        let converged = estimates.len();
        let rate = converged as f64 / cfg.replicates as f64;
        if rate < cfg.min_convergence_rate || converged == 0 {
            return Err(Error::StudyAborted(format!(
                "n = {n}: {converged} of {} replicates converged ({:.1}%), below the {:.1}% minimum",
                cfg.replicates,
                100.0 * rate,
                100.0 * cfg.min_convergence_rate
            )));
        }
        let m = converged as f64;
        let parameters = names
            .iter()
            .zip(&truth)
            .enumerate()
            .map(|(j, (name, &t))| {
                let ae = neumaier_sum(estimates.iter().map(|e| e[j])) / m;
                let mse = neumaier_sum(estimates.iter().map(|e| (e[j] - t).powi(2))) / m;
                ParameterSummary {
                    parameter: name.clone(),
                    truth: t,
                    ae,
                    bias: ae - t,
                    mse,
                }
            })
            .collect();
        cells.push(CellSummary {
            n,
            attempted: cfg.replicates,
            converged,
            convergence_rate: rate,
            parameters,
        });
    }
    Ok(StudyReport {
        kind: cfg.kind(),
        replicates: cfg.replicates,
        seed: cfg.seed,
        cells,
        runtime: start.elapsed(),
    })
}

/// Samples by inversion and refits the full model for every replicate;
/// non-converged replicates are dropped and counted.
pub fn run_distribution_study(cfg: &StudyConfig) -> Result<StudyReport> {
    cfg.validate(StudyKind::Distribution)?;
    let StudyTruth::Distribution(truth) = cfg.truth else {
        unreachable!("validated kind")
    };
    let init = cfg.init_at_truth.then_some(truth);
    run_study(cfg, |n, rng| {
        let data = distribution_replicate(&truth, n, rng)?;
        let fit = fit_mle(&data, init, Submodel::Gollgr, &cfg.fit)?;
        Ok(fit.converged.then(|| fit.estimates.to_array().to_vec()))
    })
}

/// Regression counterpart of [`run_distribution_study`].
pub fn run_regression_study(cfg: &StudyConfig) -> Result<StudyReport> {
    cfg.validate(StudyKind::Regression)?;
    let StudyTruth::Regression(truth) = &cfg.truth else {
        unreachable!("validated kind")
    };
    let init = cfg.init_at_truth.then_some(truth);
    run_study(cfg, |n, rng| {
        let ds = regression_replicate(truth, n, rng)?;
        let fit = fit_regression(&ds, Submodel::Gollgr, init, &cfg.fit)?;
        Ok(fit.converged.then(|| fit.coefficients.to_vec()))
    })
}
