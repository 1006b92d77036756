//! GOLLGR survival regression with right censoring.
//!
//! Both links share one design matrix V (explicit intercept column):
//! δ_i = exp(v_iᵀλ_δ) − 1 and θ_i = exp(v_iᵀλ_θ), with α and β common to all
//! rows.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::inference::{criteria, maximize, moment_start, FitDiagnostics, FitOptions, Submodel};
use crate::model::GollgrParams;
use crate::optim::delta_method;
use crate::special::{std_normal_quantile, std_normal_sf};

/// Condition number above which a warning is attached to fits.
const CONDITION_WARNING: f64 = 1e8;

/// Right-censored lifetimes with covariates.
#[derive(Debug, Clone, PartialEq)]
pub struct SurvivalDataset {
    times: Vec<f64>,
    /// true = failure observed, false = censored.
    status: Vec<bool>,
    design: DMatrix<f64>,
    condition: f64,
}

impl SurvivalDataset {
    /// `design` is n×p and must contain its own intercept column.
    pub fn new(times: Vec<f64>, status: Vec<bool>, design: DMatrix<f64>) -> Result<Self> {
        let n = times.len();
        if status.len() != n {
            return Err(Error::Dimension {
                expected: n,
                found: status.len(),
            });
        }
        if design.nrows() != n {
            return Err(Error::Dimension {
                expected: n,
                found: design.nrows(),
            });
        }
        if n == 0 || design.ncols() == 0 {
            return Err(domain("SurvivalDataset::new", "dataset is empty"));
        }
        if let Some((i, t)) = times.iter().enumerate().find(|(_, t)| !(**t > 0.0) || !t.is_finite()) {
            return Err(domain(
                "SurvivalDataset::new",
                format!("time in row {i} must be positive, got {t}"),
            ));
        }
        if design.iter().any(|v| !v.is_finite()) {
            return Err(domain("SurvivalDataset::new", "covariates must be finite"));
        }
        let sv = design.clone().svd(false, false).singular_values;
        let smax = sv.max();
        let smin = sv.min();
        let rank = sv
            .iter()
            .filter(|&&s| s > smax * 1e-12 * n.max(design.ncols()) as f64)
            .count();
        if rank < design.ncols() {
            return Err(domain(
                "SurvivalDataset::new",
                format!("design matrix has rank {rank} < {} columns", design.ncols()),
            ));
        }
        Ok(Self {
            times,
            status,
            design,
            condition: smax / smin,
        })
    }

    /// Builds the design as [1, covariates].
    pub fn with_intercept(times: Vec<f64>, status: Vec<bool>, covariates: &[Vec<f64>]) -> Result<Self> {
        let n = times.len();
        if covariates.len() != n {
            return Err(Error::Dimension {
                expected: n,
                found: covariates.len(),
            });
        }
        let q = covariates.first().map_or(0, Vec::len);
        if let Some(row) = covariates.iter().find(|r| r.len() != q) {
            return Err(Error::Dimension {
                expected: q,
                found: row.len(),
            });
        }
        let design = DMatrix::from_fn(n, q + 1, |i, j| if j == 0 { 1.0 } else { covariates[i][j - 1] });
        Self::new(times, status, design)
    }

    /// Uncensored, intercept-only dataset.
    pub fn uncensored(times: Vec<f64>) -> Result<Self> {
        let n = times.len();
        Self::new(times, vec![true; n], DMatrix::from_element(n, 1, 1.0))
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn status(&self) -> &[bool] {
        &self.status
    }

    pub fn design(&self) -> &DMatrix<f64> {
        &self.design
    }

    /// Number of observed failures.
    pub fn failures(&self) -> usize {
        self.status.iter().filter(|&&s| s).count()
    }

    /// Columns of the design matrix, intercept included.
    pub fn n_covariates(&self) -> usize {
        self.design.ncols()
    }

    pub fn condition_number(&self) -> f64 {
        self.condition
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.design.row(i).iter().copied().collect()
    }

    /// Subset of rows in the given order.
    pub fn select(&self, rows: &[usize]) -> Result<Self> {
        let times = rows.iter().map(|&i| self.times[i]).collect();
        let status = rows.iter().map(|&i| self.status[i]).collect();
        let design = self.design.select_rows(rows.iter());
        Self::new(times, status, design)
    }
}

/// Regression coefficients; `lambda_delta` drives δ and `lambda_theta` drives θ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionCoefficients {
    pub alpha: f64,
    pub beta: f64,
    pub lambda_delta: Vec<f64>,
    pub lambda_theta: Vec<f64>,
}

impl RegressionCoefficients {
    pub fn new(alpha: f64, beta: f64, lambda_delta: Vec<f64>, lambda_theta: Vec<f64>) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite() && beta > 0.0 && beta.is_finite()) {
            return Err(domain(
                "RegressionCoefficients::new",
                format!("shapes must be finite and positive, got alpha={alpha}, beta={beta}"),
            ));
        }
        if lambda_delta.len() != lambda_theta.len() {
            return Err(Error::Dimension {
                expected: lambda_delta.len(),
                found: lambda_theta.len(),
            });
        }
        if lambda_delta.iter().chain(&lambda_theta).any(|v| !v.is_finite()) {
            return Err(domain("RegressionCoefficients::new", "coefficients must be finite"));
        }
        Ok(Self {
            alpha,
            beta,
            lambda_delta,
            lambda_theta,
        })
    }

    pub fn n_covariates(&self) -> usize {
        self.lambda_delta.len()
    }

    /// (α, β, λ_δ…, λ_θ…) in one vector.
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = vec![self.alpha, self.beta];
        v.extend(&self.lambda_delta);
        v.extend(&self.lambda_theta);
        v
    }

    /// Names matching [`Self::to_vec`].
    pub fn names(&self) -> Vec<String> {
        let mut v = vec!["alpha".to_string(), "beta".to_string()];
        v.extend((0..self.n_covariates()).map(|j| format!("lambda_delta[{j}]")));
        v.extend((0..self.n_covariates()).map(|j| format!("lambda_theta[{j}]")));
        v
    }
}

fn dot(v: &[f64], l: &[f64]) -> f64 {
    v.iter().zip(l).map(|(a, b)| a * b).sum()
}

/// Row-specific distribution parameters.
pub fn link_params(v: &[f64], c: &RegressionCoefficients) -> Result<GollgrParams> {
    if v.len() != c.n_covariates() {
        return Err(Error::Dimension {
            expected: c.n_covariates(),
            found: v.len(),
        });
    }
    GollgrParams::new(
        c.alpha,
        c.beta,
        dot(v, &c.lambda_delta).exp_m1(),
        dot(v, &c.lambda_theta).exp(),
    )
}

/// S(x | v) for one row.
pub fn survival(x: f64, v: &[f64], c: &RegressionCoefficients) -> Result<f64> {
    Ok(link_params(v, c)?.sf(x))
}

fn check_dims(ds: &SurvivalDataset, c: &RegressionCoefficients) -> Result<()> {
    if ds.n_covariates() != c.n_covariates() {
        return Err(Error::Dimension {
            expected: ds.n_covariates(),
            found: c.n_covariates(),
        });
    }
    Ok(())
}

/// Σ_F ln f(x_i | v_i) + Σ_C ln S(x_i | v_i); -∞ if a row has zero
/// density or survival.
pub fn censored_loglik(ds: &SurvivalDataset, c: &RegressionCoefficients) -> Result<f64> {
    check_dims(ds, c)?;
    Ok(loglik_unchecked(ds, c))
}

fn loglik_unchecked(ds: &SurvivalDataset, c: &RegressionCoefficients) -> f64 {
    let mut total = 0.0;
    let mut row = vec![0.0; ds.n_covariates()];
    // consecutive identical rows reuse the kernel
    let mut cached: Option<(Vec<f64>, crate::model::Kernel)> = None;
    for i in 0..ds.len() {
        for (j, r) in row.iter_mut().enumerate() {
            *r = ds.design[(i, j)];
        }
        let reuse = matches!(&cached, Some((v, _)) if *v == row);
        if !reuse {
            let Ok(p) = link_params(&row, c) else {
                return f64::NEG_INFINITY;
            };
            cached = Some((row.clone(), p.kernel()));
        }
        let k = &cached.as_ref().expect("kernel cached").1;
        let x = ds.times[i];
        total += if ds.status[i] { k.ln_pdf(x) } else { k.ln_sf(x) };
    }
    if total.is_nan() {
        f64::NEG_INFINITY
    } else {
        total
    }
}

/// Standard errors in original coordinates; shapes pinned by the
/// submodel are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionStdErrors {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub lambda_delta: Vec<f64>,
    pub lambda_theta: Vec<f64>,
}

/// Two-sided normal-approximation p-values for H0: λ_j = 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionPValues {
    pub lambda_delta: Vec<f64>,
    pub lambda_theta: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionFit {
    pub submodel: Submodel,
    pub coefficients: RegressionCoefficients,
    pub std_errors: Option<RegressionStdErrors>,
    pub p_values: Option<RegressionPValues>,
    pub loglik: f64,
    pub aic: f64,
    pub bic: f64,
    pub caic: f64,
    pub converged: bool,
    pub n_obs: usize,
    pub n_failures: usize,
    pub diagnostics: FitDiagnostics,
    pub warnings: Vec<String>,
}

impl RegressionFit {
    pub fn n_params(&self) -> usize {
        self.submodel.n_params() - 2 + 2 * self.coefficients.n_covariates()
    }
}

#[derive(Debug, Clone, Copy)]
struct RegCoords {
    submodel: Submodel,
    p: usize,
}

impl RegCoords {
    fn encode(&self, c: &RegressionCoefficients) -> Vec<f64> {
        let mut v = Vec::with_capacity(2 + 2 * self.p);
        if self.submodel.alpha_free() {
            v.push(c.alpha.ln());
        }
        if self.submodel.beta_free() {
            v.push(c.beta.ln());
        }
        v.extend(&c.lambda_delta);
        v.extend(&c.lambda_theta);
        v
    }

    fn decode(&self, v: &[f64]) -> Option<RegressionCoefficients> {
        let mut i = 0;
        let mut shape = |free: bool| {
            if free {
                i += 1;
                v[i - 1].exp()
            } else {
                1.0
            }
        };
        let alpha = shape(self.submodel.alpha_free());
        let beta = shape(self.submodel.beta_free());
        let ld = v.get(i..i + self.p)?.to_vec();
        let lt = v.get(i + self.p..i + 2 * self.p)?.to_vec();
        RegressionCoefficients::new(alpha, beta, ld, lt).ok()
    }

    fn jacobian(&self, c: &RegressionCoefficients) -> Vec<f64> {
        let mut j = Vec::new();
        if self.submodel.alpha_free() {
            j.push(c.alpha);
        }
        if self.submodel.beta_free() {
            j.push(c.beta);
        }
        j.extend(std::iter::repeat_n(1.0, 2 * self.p));
        j
    }
}

fn restrict(c: &RegressionCoefficients, submodel: Submodel) -> RegressionCoefficients {
    RegressionCoefficients {
        alpha: if submodel.alpha_free() { c.alpha } else { 1.0 },
        beta: if submodel.beta_free() { c.beta } else { 1.0 },
        ..c.clone()
    }
}

/// GR moment estimate placed on the intercepts, zero slopes.
fn default_start(ds: &SurvivalDataset) -> Result<RegressionCoefficients> {
    let failures: Vec<f64> = ds
        .times
        .iter()
        .zip(&ds.status)
        .filter(|(_, s)| **s)
        .map(|(t, _)| *t)
        .collect();
    let sample = if failures.len() >= 5 {
        failures
    } else {
        ds.times.clone()
    };
    let m = if sample.len() >= 2 {
        moment_start(&sample)?
    } else {
        GollgrParams::new(1.0, 1.0, 0.0, 1.0 / (sample[0] * sample[0]))?
    };
    let p = ds.n_covariates();
    let mut ld = vec![0.0; p];
    let mut lt = vec![0.0; p];
    // place the level on the intercept column when there is one
    let icol = (0..p)
        .find(|&j| ds.design.column(j).iter().all(|&v| v == 1.0))
        .unwrap_or(0);
    ld[icol] = (m.delta() + 1.0).ln();
    lt[icol] = m.theta().ln();
    RegressionCoefficients::new(1.0, 1.0, ld, lt)
}

fn fit_core(
    ds: &SurvivalDataset,
    init: &RegressionCoefficients,
    submodel: Submodel,
    opts: &FitOptions,
) -> Result<RegressionFit> {
    let coords = RegCoords {
        submodel,
        p: ds.n_covariates(),
    };
    let init = restrict(init, submodel);
    let mut starts = vec![coords.encode(&init)];
    if opts.multi_start && submodel != Submodel::Gr {
        let gr_opts = FitOptions {
            multi_start: false,
            ..*opts
        };
        let seed = fit_core(ds, &init, Submodel::Gr, &gr_opts)
            .map(|f| f.coefficients)
            .unwrap_or_else(|_| restrict(&init, Submodel::Gr));
        let base = coords.encode(&seed);
        starts.push(base.clone());
        let h = opts.perturbation;
        let free = submodel.alpha_free() as usize + submodel.beta_free() as usize;
        let shifts: &[[f64; 2]] = if free == 2 {
            &[[h, h], [h, -h], [-h, h], [-h, -h]]
        } else {
            &[[h, 0.0], [-h, 0.0]]
        };
        for s in shifts {
            let mut v = base.clone();
            for k in 0..free {
                v[k] += s[k];
            }
            starts.push(v);
        }
    }
    let objective = |v: &[f64]| match coords.decode(v) {
        Some(c) => loglik_unchecked(ds, &c),
        None => f64::NEG_INFINITY,
    };
    let max = maximize(objective, &starts, opts);
    let coefficients = coords.decode(&max.coords).ok_or_else(|| Error::NonConvergence {
        msg: format!("optimizer left the parameter space at {:?}", max.coords),
    })?;
    let p = ds.n_covariates();
    let std_errors = max.neg_hessian_inv.as_ref().map(|inv| {
        let cov = delta_method(inv, &coords.jacobian(&coefficients));
        let se: Vec<f64> = (0..cov.nrows()).map(|i| cov[(i, i)].max(0.0).sqrt()).collect();
        let mut k = 0;
        let mut next = |free: bool| {
            free.then(|| {
                k += 1;
                se[k - 1]
            })
        };
        let alpha = next(submodel.alpha_free());
        let beta = next(submodel.beta_free());
        RegressionStdErrors {
            alpha,
            beta,
            lambda_delta: se[k..k + p].to_vec(),
            lambda_theta: se[k + p..k + 2 * p].to_vec(),
        }
    });
    let p_values = std_errors.as_ref().map(|se| {
        let pv = |est: &[f64], s: &[f64]| -> Vec<f64> {
            est.iter()
                .zip(s)
                .map(|(b, s)| {
                    if *s > 0.0 {
                        2.0 * std_normal_sf((b / s).abs())
                    } else {
                        f64::NAN
                    }
                })
                .collect()
        };
        RegressionPValues {
            lambda_delta: pv(&coefficients.lambda_delta, &se.lambda_delta),
            lambda_theta: pv(&coefficients.lambda_theta, &se.lambda_theta),
        }
    });
    let n_params = submodel.n_params() - 2 + 2 * p;
    let (aic, bic, caic) = criteria(max.value, n_params, ds.len());
    let mut warnings = Vec::new();
    if ds.len() < 10 * n_params {
        warnings.push(format!(
            "{} observations for {n_params} free parameters; estimates may be unstable",
            ds.len()
        ));
    }
    if ds.condition_number() > CONDITION_WARNING {
        warnings.push(format!(
            "design matrix is ill-conditioned (condition number {:.3e}); consider rescaling covariates",
            ds.condition_number()
        ));
    }
    Ok(RegressionFit {
        submodel,
        coefficients,
        std_errors,
        p_values,
        loglik: max.value,
        aic,
        bic,
        caic,
        converged: max.converged,
        n_obs: ds.len(),
        n_failures: ds.failures(),
        diagnostics: max.diagnostics,
        warnings,
    })
}

/// Maximizes the censored likelihood. Without `init` the GR moment estimate
/// seeds a GR sub-regression whose optimum then seeds the full model.
pub fn fit_regression(
    ds: &SurvivalDataset,
    submodel: Submodel,
    init: Option<&RegressionCoefficients>,
    opts: &FitOptions,
) -> Result<RegressionFit> {
    let init = match init {
        Some(c) => {
            check_dims(ds, c)?;
            c.clone()
        }
        None => default_start(ds)?,
    };
    fit_core(ds, &init, submodel, opts)
}

/// Φ⁻¹ of the fitted cdf at every row, cdf clamped to (1e-15, 1 − 1e-15).
pub fn quantile_residuals(ds: &SurvivalDataset, fit: &RegressionFit) -> Result<Vec<f64>> {
    if !fit.converged {
        return Err(Error::NonConvergence {
            msg: "quantile residuals need a converged fit".into(),
        });
    }
    residuals_at(ds, &fit.coefficients)
}

/// Quantile residuals at arbitrary coefficients.
pub fn residuals_at(ds: &SurvivalDataset, c: &RegressionCoefficients) -> Result<Vec<f64>> {
    check_dims(ds, c)?;
    (0..ds.len())
        .map(|i| {
            let u = link_params(&ds.row(i), c)?.cdf(ds.times[i]).clamp(1e-15, 1.0 - 1e-15);
            std_normal_quantile(u)
        })
        .collect()
}
