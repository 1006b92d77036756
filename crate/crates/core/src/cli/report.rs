//! Report files (JSON, shortest round-trip floats) and stdout tables.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::inference::{Comparison, FitResult};
use crate::regression::RegressionFit;

/// Any fit a residuals run can be pointed at.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FitReport {
    Regression(RegressionFit),
    Distribution(FitResult),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualSummary {
    pub n: usize,
    pub mean: f64,
    /// Sample variance (divisor n − 1).
    pub variance: f64,
    pub min: f64,
    pub max: f64,
    pub fraction_beyond_3: f64,
}

impl ResidualSummary {
    pub fn from_residuals(r: &[f64]) -> Self {
        let n = r.len();
        let mean = r.iter().sum::<f64>() / n as f64;
        let variance = if n > 1 {
            r.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64
        } else {
            0.0
        };
        Self {
            n,
            mean,
            variance,
            min: r.iter().copied().fold(f64::INFINITY, f64::min),
            max: r.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            fraction_beyond_3: r.iter().filter(|v| v.abs() > 3.0).count() as f64 / n as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub summary: ResidualSummary,
    pub residuals: Vec<f64>,
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

pub fn write_file(path: &Path, contents: &str) -> std::io::Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(contents.as_bytes())
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |v| format!("{v:.4}"))
}

pub fn fit_table(f: &FitResult) -> String {
    let p = &f.estimates;
    let se = f.std_errors.as_ref();
    let rows = [
        ("alpha", p.alpha(), se.and_then(|s| s.alpha)),
        ("beta", p.beta(), se.and_then(|s| s.beta)),
        ("delta", p.delta(), se.map(|s| s.delta)),
        ("theta", p.theta(), se.map(|s| s.theta)),
    ];
    let mut out = format!(
        "{} fit, n = {}\n{:<10} {:>12} {:>12}\n",
        f.submodel, f.n_obs, "parameter", "MLE", "SE"
    );
    for (name, v, s) in rows {
        out.push_str(&format!("{name:<10} {v:>12.4} {:>12}\n", opt(s)));
    }
    out.push_str(&format!(
        "loglik {:.4}  AIC {:.4}  CAIC {:.4}  BIC {:.4}  converged {}\n",
        f.loglik, f.aic, f.caic, f.bic, f.converged
    ));
    out
}

pub fn regression_table(f: &RegressionFit, covariate_names: &[String]) -> String {
    let c = &f.coefficients;
    let se = f.std_errors.as_ref();
    let pv = f.p_values.as_ref();
    let mut out = format!(
        "{} regression, n = {} ({} failures)\n{:<24} {:>12} {:>12} {:>12}\n",
        f.submodel, f.n_obs, f.n_failures, "coefficient", "MLE", "SE", "p-value"
    );
    out.push_str(&format!(
        "{:<24} {:>12.4} {:>12} {:>12}\n",
        "alpha",
        c.alpha,
        opt(se.and_then(|s| s.alpha)),
        "-"
    ));
    out.push_str(&format!(
        "{:<24} {:>12.4} {:>12} {:>12}\n",
        "beta",
        c.beta,
        opt(se.and_then(|s| s.beta)),
        "-"
    ));
    let label = |j: usize| {
        if j == 0 {
            "intercept".to_string()
        } else {
            covariate_names.get(j - 1).cloned().unwrap_or_else(|| format!("x{j}"))
        }
    };
    for (link, vals, ses, pvs) in [
        (
            "delta",
            &c.lambda_delta,
            se.map(|s| &s.lambda_delta),
            pv.map(|p| &p.lambda_delta),
        ),
        (
            "theta",
            &c.lambda_theta,
            se.map(|s| &s.lambda_theta),
            pv.map(|p| &p.lambda_theta),
        ),
    ] {
        for (j, v) in vals.iter().enumerate() {
            out.push_str(&format!(
                "{:<24} {v:>12.4} {:>12} {:>12}\n",
                format!("{link}:{}", label(j)),
                opt(ses.map(|s| s[j])),
                opt(pvs.map(|p| p[j]))
            ));
        }
    }
    out.push_str(&format!(
        "loglik {:.4}  AIC {:.4}  CAIC {:.4}  BIC {:.4}  converged {}\n",
        f.loglik, f.aic, f.caic, f.bic, f.converged
    ));
    for w in &f.warnings {
        out.push_str(&format!("warning: {w}\n"));
    }
    out
}

pub fn comparison_table(c: &Comparison) -> String {
    let mut out = format!(
        "{:<8} {:>12} {:>12} {:>12} {:>12}\n",
        "model", "AIC", "CAIC", "BIC", "loglik"
    );
    for f in &c.fits {
        out.push_str(&format!(
            "{:<8} {:>12.4} {:>12.4} {:>12.4} {:>12.4}\n",
            f.submodel.name(),
            f.aic,
            f.caic,
            f.bic,
            f.loglik
        ));
    }
    out.push_str(&format!("best by AIC: {}\n\n", c.best_by_aic));
    out.push_str(&format!(
        "{:<52} {:>12} {:>4} {:>12}\n",
        "hypotheses", "LR statistic", "df", "p-value"
    ));
    for t in &c.lr_tests {
        out.push_str(&format!(
            "{:<52} {:>12.4} {:>4} {:>12.4e}\n",
            t.hypotheses, t.statistic, t.df, t.p_value
        ));
    }
    out
}

pub fn residual_table(s: &ResidualSummary) -> String {
    format!(
        "quantile residuals: n = {}, mean {:.4}, variance {:.4}, min {:.4}, max {:.4}, beyond |3|: {:.2}%\n",
        s.n,
        s.mean,
        s.variance,
        s.min,
        s.max,
        100.0 * s.fraction_beyond_3
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_statistics() {
        let s = ResidualSummary::from_residuals(&[-1.0, 0.0, 1.0, 4.0]);
        assert_eq!(s.mean, 1.0);
        assert!((s.variance - 14.0 / 3.0).abs() < 1e-15);
        assert_eq!(s.fraction_beyond_3, 0.25);
        assert_eq!((s.min, s.max), (-1.0, 4.0));
    }
}
