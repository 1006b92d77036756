//! Maximum likelihood for uncensored GOLLGR samples and nested-model
//! comparison.
//!
//! Optimization runs in unconstrained coordinates (ln α, ln β, ln(δ+1), ln θ),
//! restricted to the parameters a submodel leaves free.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::model::GollgrParams;
use crate::optim::{delta_method, gradient, hessian, nelder_mead, spd_inverse, NelderMeadOptions};
use crate::special::reg_upper_gamma;

/// Nested members of the GOLLGR family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Submodel {
    Gollgr,
    /// β = 1
    Ollgr,
    /// α = 1
    Egr,
    /// α = β = 1
    Gr,
}

impl Submodel {
    pub const ALL: [Submodel; 4] = [Submodel::Gollgr, Submodel::Ollgr, Submodel::Egr, Submodel::Gr];

    pub fn alpha_free(self) -> bool {
        matches!(self, Submodel::Gollgr | Submodel::Ollgr)
    }

    pub fn beta_free(self) -> bool {
        matches!(self, Submodel::Gollgr | Submodel::Egr)
    }

    /// Free distribution parameters (δ and θ are always free).
    pub fn n_params(self) -> usize {
        2 + self.alpha_free() as usize + self.beta_free() as usize
    }

    /// True when `self` is obtained from `full` by pinning shapes to 1.
    pub fn is_restriction_of(self, full: Submodel) -> bool {
        self != full && (!self.alpha_free() || full.alpha_free()) && (!self.beta_free() || full.beta_free())
    }

    /// Restrictions relative to the full model, e.g. "alpha = beta = 1".
    pub fn restriction(self) -> &'static str {
        match self {
            Submodel::Gollgr => "none",
            Submodel::Ollgr => "beta = 1",
            Submodel::Egr => "alpha = 1",
            Submodel::Gr => "alpha = beta = 1",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Submodel::Gollgr => "GOLLGR",
            Submodel::Ollgr => "OLLGR",
            Submodel::Egr => "EGR",
            Submodel::Gr => "GR",
        }
    }

    /// Pins the fixed shapes of `p` to 1.
    pub fn restrict(self, p: &GollgrParams) -> GollgrParams {
        let a = if self.alpha_free() { p.alpha() } else { 1.0 };
        let b = if self.beta_free() { p.beta() } else { 1.0 };
        GollgrParams::new(a, b, p.delta(), p.theta()).expect("restriction keeps parameters valid")
    }
}

impl fmt::Display for Submodel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Submodel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gollgr" => Ok(Submodel::Gollgr),
            "ollgr" => Ok(Submodel::Ollgr),
            "egr" => Ok(Submodel::Egr),
            "gr" => Ok(Submodel::Gr),
            other => Err(domain("Submodel::from_str", format!("unknown submodel '{other}'"))),
        }
    }
}

/// Standard errors in original coordinates; `None` for pinned parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StdErrors {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub delta: f64,
    pub theta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitDiagnostics {
    pub evaluations: usize,
    pub starts: usize,
    pub simplex_diameter: f64,
    pub loglik_spread: f64,
    /// Sup-norm of the finite-difference gradient in internal coordinates.
    pub gradient_norm: f64,
    pub hessian_positive_definite: bool,
    /// The best point sits on the internal-coordinate box: the likelihood
    /// keeps increasing towards the edge of the parameter space.
    pub at_boundary: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub submodel: Submodel,
    pub estimates: GollgrParams,
    pub std_errors: Option<StdErrors>,
    pub loglik: f64,
    pub aic: f64,
    pub bic: f64,
    pub caic: f64,
    pub converged: bool,
    pub n_obs: usize,
    pub diagnostics: FitDiagnostics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LrTestResult {
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
    pub hypotheses: String,
}

/// Optimizer settings for [`fit_mle`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    pub simplex: NelderMeadOptions,
    /// Add the GR-based seed and (ln α, ln β) perturbations to the user's
    /// starting point.
    pub multi_start: bool,
    /// Size of the (ln α, ln β) perturbations.
    pub perturbation: f64,
    /// Largest accepted gradient sup-norm, relative to 1 + |loglik|.
    pub grad_tol: f64,
    /// Internal coordinates are confined to [-bound, bound].
    pub coord_bound: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            simplex: NelderMeadOptions::default(),
            multi_start: true,
            perturbation: 0.7,
            grad_tol: 1e-6,
            coord_bound: 20.0,
        }
    }
}

/// Σ ln f(x_i); -∞ if any observation has zero density.
pub fn loglik(data: &[f64], p: &GollgrParams) -> f64 {
    let k = p.kernel();
    let mut s = 0.0;
    for &x in data {
        if !(x > 0.0) {
            return f64::NEG_INFINITY;
        }
        s += k.ln_pdf(x);
    }
    if s.is_nan() {
        f64::NEG_INFINITY
    } else {
        s
    }
}

/// (aic, bic, caic) for `p` free parameters and `n` observations.
pub fn criteria(loglik: f64, p: usize, n: usize) -> (f64, f64, f64) {
    let pf = p as f64;
    let ln_n = (n as f64).ln();
    (
        -2.0 * loglik + 2.0 * pf,
        -2.0 * loglik + pf * ln_n,
        -2.0 * loglik + pf * (ln_n + 1.0),
    )
}

pub fn information_criteria(fit: &FitResult) -> (f64, f64, f64) {
    criteria(fit.loglik, fit.submodel.n_params(), fit.n_obs)
}

/// Maps between parameters and internal coordinates of a submodel.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Coordinates {
    pub submodel: Submodel,
}

impl Coordinates {
    pub(crate) fn encode(&self, p: &GollgrParams) -> Vec<f64> {
        let mut c = Vec::with_capacity(4);
        if self.submodel.alpha_free() {
            c.push(p.alpha().ln());
        }
        if self.submodel.beta_free() {
            c.push(p.beta().ln());
        }
        c.push((p.delta() + 1.0).ln());
        c.push(p.theta().ln());
        c
    }

    pub(crate) fn decode(&self, c: &[f64]) -> Option<GollgrParams> {
        let mut it = c.iter();
        let alpha = if self.submodel.alpha_free() {
            it.next()?.exp()
        } else {
            1.0
        };
        let beta = if self.submodel.beta_free() {
            it.next()?.exp()
        } else {
            1.0
        };
        let delta = it.next()?.exp() - 1.0;
        let theta = it.next()?.exp();
        GollgrParams::new(alpha, beta, delta, theta).ok()
    }

    /// d(original)/d(internal) for each free coordinate.
    pub(crate) fn jacobian(&self, p: &GollgrParams) -> Vec<f64> {
        let mut j = Vec::with_capacity(4);
        if self.submodel.alpha_free() {
            j.push(p.alpha());
        }
        if self.submodel.beta_free() {
            j.push(p.beta());
        }
        j.push(p.delta() + 1.0);
        j.push(p.theta());
        j
    }
}

/// GR method-of-moments starting point: δ + 1 = 1/(m₄/m₂² - 1), θ = (δ+1)/m₂.
pub fn moment_start(data: &[f64]) -> Result<GollgrParams> {
    let n = data.len() as f64;
    let m2 = data.iter().map(|x| x * x).sum::<f64>() / n;
    let m4 = data.iter().map(|x| x.powi(4)).sum::<f64>() / n;
    let ratio = m4 / (m2 * m2) - 1.0;
    let shape = if ratio > 0.0 {
        (1.0 / ratio).clamp(0.05, 100.0)
    } else {
        1.0
    };
    GollgrParams::new(1.0, 1.0, shape - 1.0, shape / m2)
}

fn check_data(data: &[f64]) -> Result<()> {
    if data.len() < 5 {
        return Err(domain(
            "fit_mle",
            format!("need at least 5 observations, got {}", data.len()),
        ));
    }
    if let Some((i, x)) = data.iter().enumerate().find(|(_, x)| !(**x > 0.0) || !x.is_finite()) {
        return Err(domain(
            "fit_mle",
            format!("observation {i} is not a positive finite number: {x}"),
        ));
    }
    Ok(())
}

/// Generic maximizer shared with the regression: runs the simplex from each
/// start, keeps the best, and assesses convergence at the winner.
pub(crate) struct Maximum {
    pub coords: Vec<f64>,
    pub value: f64,
    pub converged: bool,
    pub diagnostics: FitDiagnostics,
    pub neg_hessian_inv: Option<nalgebra::DMatrix<f64>>,
}

pub(crate) fn maximize<F: Fn(&[f64]) -> f64>(f: F, starts: &[Vec<f64>], opts: &FitOptions) -> Maximum {
    let bound = opts.coord_bound;
    let neg = |c: &[f64]| {
        if c.iter().any(|v| v.abs() > bound) {
            return f64::INFINITY;
        }
        let v = f(c);
        if v.is_finite() {
            -v
        } else {
            f64::INFINITY
        }
    };
    let mut evals = 0;
    let mut best: Option<crate::optim::Minimum> = None;
    for s in starts {
        let m = nelder_mead(neg, s, &opts.simplex);
        evals += m.evals;
        let better = best
            .as_ref()
            .is_none_or(|b| m.f < b.f || (m.f == b.f && m.converged && !b.converged));
        if better {
            best = Some(m);
        }
    }
    let m = best.expect("at least one start");
    let value = -m.f;
    let g = gradient(neg, &m.x);
    let gnorm = g.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let h = hessian(neg, &m.x);
    let inv = spd_inverse(&h);
    let grad_ok = gnorm.is_finite() && gnorm <= opts.grad_tol * (1.0 + value.abs());
    let at_boundary = m.x.iter().any(|v| v.abs() > bound - 1.0);
    Maximum {
        converged: m.converged && grad_ok && value.is_finite() && !at_boundary,
        diagnostics: FitDiagnostics {
            evaluations: evals,
            starts: starts.len(),
            simplex_diameter: m.diameter,
            loglik_spread: m.spread,
            gradient_norm: gnorm,
            hessian_positive_definite: inv.is_some(),
            at_boundary,
        },
        coords: m.x,
        value,
        neg_hessian_inv: inv,
    }
}

/// Starting points: the user's, the GR-fit seed and (ln α, ln β)
/// perturbations of that seed.
fn starts_for(data: &[f64], init: &GollgrParams, submodel: Submodel, opts: &FitOptions) -> Vec<Vec<f64>> {
    let coords = Coordinates { submodel };
    let mut starts = vec![coords.encode(init)];
    if !opts.multi_start {
        return starts;
    }
    let gr_seed = if submodel == Submodel::Gr {
        *init
    } else {
        let gr_opts = FitOptions {
            multi_start: false,
            ..*opts
        };
        match fit_core(data, &Submodel::Gr.restrict(init), Submodel::Gr, &[], &gr_opts) {
            Ok(f) => f.estimates,
            Err(_) => Submodel::Gr.restrict(init),
        }
    };
    let base = coords.encode(&GollgrParams::new(1.0, 1.0, gr_seed.delta(), gr_seed.theta()).expect("valid seed"));
    starts.push(base.clone());
    let h = opts.perturbation;
    let shifts: Vec<(f64, f64)> = match (submodel.alpha_free(), submodel.beta_free()) {
        (true, true) => vec![(h, h), (h, -h), (-h, h), (-h, -h)],
        (true, false) | (false, true) => vec![(h, 0.0), (-h, 0.0)],
        (false, false) => vec![],
    };
    for (da, db) in shifts {
        let mut s = base.clone();
        match (submodel.alpha_free(), submodel.beta_free()) {
            (true, true) => {
                s[0] += da;
                s[1] += db;
            }
            _ => s[0] += da,
        }
        starts.push(s);
    }
    starts
}

fn fit_core(
    data: &[f64],
    init: &GollgrParams,
    submodel: Submodel,
    extra: &[GollgrParams],
    opts: &FitOptions,
) -> Result<FitResult> {
    let coords = Coordinates { submodel };
    let init = submodel.restrict(init);
    let mut starts = starts_for(data, &init, submodel, opts);
    starts.extend(extra.iter().map(|p| coords.encode(&submodel.restrict(p))));
    let objective = |c: &[f64]| match coords.decode(c) {
        Some(p) => loglik(data, &p),
        None => f64::NEG_INFINITY,
    };
    let max = maximize(objective, &starts, opts);
    let estimates = coords.decode(&max.coords).ok_or_else(|| Error::NonConvergence {
        msg: format!("optimizer left the parameter space at {:?}", max.coords),
    })?;
    let std_errors = max.neg_hessian_inv.as_ref().map(|inv| {
        let cov = delta_method(inv, &coords.jacobian(&estimates));
        let se: Vec<f64> = (0..cov.nrows()).map(|i| cov[(i, i)].max(0.0).sqrt()).collect();
        let mut it = se.into_iter();
        StdErrors {
            alpha: submodel.alpha_free().then(|| it.next().unwrap()),
            beta: submodel.beta_free().then(|| it.next().unwrap()),
            delta: it.next().unwrap(),
            theta: it.next().unwrap(),
        }
    });
    let (aic, bic, caic) = criteria(max.value, submodel.n_params(), data.len());
    Ok(FitResult {
        submodel,
        estimates,
        std_errors,
        loglik: max.value,
        aic,
        bic,
        caic,
        converged: max.converged,
        n_obs: data.len(),
        diagnostics: max.diagnostics,
    })
}

/// Maximum-likelihood fit. `init` defaults to the GR moment estimate; the
/// submodel pins α and/or β to 1. A failed convergence check is reported
/// through `converged = false` together with the best point found.
pub fn fit_mle(data: &[f64], init: Option<GollgrParams>, submodel: Submodel, opts: &FitOptions) -> Result<FitResult> {
    check_data(data)?;
    let init = match init {
        Some(p) => p,
        None => moment_start(data)?,
    };
    fit_core(data, &init, submodel, &[], opts)
}

/// Likelihood-ratio test of `nested` against `full` (same data).
pub fn lr_test(full: &FitResult, nested: &FitResult) -> Result<LrTestResult> {
    if !nested.submodel.is_restriction_of(full.submodel) {
        return Err(Error::Comparison(format!(
            "{} is not a restriction of {}",
            nested.submodel, full.submodel
        )));
    }
    if full.n_obs != nested.n_obs {
        return Err(Error::Comparison(format!(
            "fits use different sample sizes ({} vs {})",
            full.n_obs, nested.n_obs
        )));
    }
    let mut statistic = 2.0 * (full.loglik - nested.loglik);
    let tol = 1e-6 * (1.0 + full.loglik.abs());
    if statistic < -tol {
        return Err(Error::Comparison(format!(
            "negative LR statistic {statistic:e}: the {} fit is worse than its restriction {}; refit the full model \
             starting from the nested estimates",
            full.submodel, nested.submodel
        )));
    }
    statistic = statistic.max(0.0);
    let df = full.submodel.n_params() - nested.submodel.n_params();
    let p_value = if statistic == 0.0 {
        1.0
    } else {
        reg_upper_gamma(0.5 * df as f64, 0.5 * statistic)?
    };
    Ok(LrTestResult {
        statistic,
        df,
        p_value,
        hypotheses: format!(
            "{} vs {}: H0: {} vs H1: H0 is false",
            full.submodel,
            nested.submodel,
            nested.submodel.restriction()
        ),
    })
}

/// All four fits plus the three LR tests against the full model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub fits: Vec<FitResult>,
    pub lr_tests: Vec<LrTestResult>,
    /// Submodel with the smallest AIC.
    pub best_by_aic: Submodel,
}

/// Fits the nested submodels first and seeds the full model from their
/// optima as well, so the full fit is never below a restriction.
pub fn compare(data: &[f64], opts: &FitOptions) -> Result<Comparison> {
    check_data(data)?;
    let init = moment_start(data)?;
    let gr = fit_core(data, &init, Submodel::Gr, &[], opts)?;
    let ollgr = fit_core(data, &init, Submodel::Ollgr, &[gr.estimates], opts)?;
    let egr = fit_core(data, &init, Submodel::Egr, &[gr.estimates], opts)?;
    let full = fit_core(
        data,
        &init,
        Submodel::Gollgr,
        &[gr.estimates, ollgr.estimates, egr.estimates],
        opts,
    )?;
    let lr_tests = vec![lr_test(&full, &ollgr)?, lr_test(&full, &egr)?, lr_test(&full, &gr)?];
    let fits = vec![full, ollgr, egr, gr];
    let best_by_aic = fits
        .iter()
        .min_by(|a, b| a.aic.total_cmp(&b.aic))
        .map(|f| f.submodel)
        .expect("four fits");
    Ok(Comparison {
        fits,
        lr_tests,
        best_by_aic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn criteria_arithmetic() {
        let (aic, bic, caic) = criteria(-100.0, 4, 50);
        assert_eq!(aic, 208.0);
        assert!((bic - (200.0 + 4.0 * 50f64.ln())).abs() < 1e-12);
        assert!((caic - (200.0 + 4.0 * (50f64.ln() + 1.0))).abs() < 1e-12);
        assert_eq!(criteria(-100.0, 2, 50).0, 204.0);
    }

    #[test]
    fn submodel_lattice() {
        assert_eq!(Submodel::Gollgr.n_params(), 4);
        assert_eq!(Submodel::Ollgr.n_params(), 3);
        assert_eq!(Submodel::Egr.n_params(), 3);
        assert_eq!(Submodel::Gr.n_params(), 2);
        assert!(Submodel::Gr.is_restriction_of(Submodel::Gollgr));
        assert!(Submodel::Gr.is_restriction_of(Submodel::Ollgr));
        assert!(!Submodel::Ollgr.is_restriction_of(Submodel::Egr));
        assert!(!Submodel::Gollgr.is_restriction_of(Submodel::Gr));
        assert!(!Submodel::Gr.is_restriction_of(Submodel::Gr));
        assert_eq!("EGR".parse::<Submodel>().unwrap(), Submodel::Egr);
    }

    #[test]
    fn coordinates_roundtrip() {
        let p = GollgrParams::new(0.35, 0.55, -0.55, 0.11).unwrap();
        let c = Coordinates {
            submodel: Submodel::Gollgr,
        };
        let q = c.decode(&c.encode(&p)).unwrap();
        for (a, b) in p.to_array().iter().zip(q.to_array()) {
            assert!((a - b).abs() < 1e-14);
        }
        let c = Coordinates {
            submodel: Submodel::Egr,
        };
        assert_eq!(c.encode(&p).len(), 3);
        assert_eq!(c.decode(&c.encode(&p)).unwrap().alpha(), 1.0);
    }

    #[test]
    fn single_observation_loglik() {
        let p = GollgrParams::new(0.35, 0.55, -0.55, 0.11).unwrap();
        assert!((loglik(&[1.3], &p) - p.ln_pdf(1.3)).abs() < 1e-15);
        assert_eq!(loglik(&[1.3, -1.0], &p), f64::NEG_INFINITY);
    }

    #[test]
    fn identical_fits_give_unit_p_value() {
        let p = GollgrParams::new(1.0, 1.0, 0.2, 1.0).unwrap();
        let mk = |s: Submodel| FitResult {
            submodel: s,
            estimates: p,
            std_errors: None,
            loglik: -50.0,
            aic: 0.0,
            bic: 0.0,
            caic: 0.0,
            converged: true,
            n_obs: 40,
            diagnostics: FitDiagnostics {
                evaluations: 0,
                starts: 1,
                simplex_diameter: 0.0,
                loglik_spread: 0.0,
                gradient_norm: 0.0,
                hessian_positive_definite: true,
                at_boundary: false,
            },
        };
        let t = lr_test(&mk(Submodel::Gollgr), &mk(Submodel::Gr)).unwrap();
        assert_eq!((t.statistic, t.df, t.p_value), (0.0, 2, 1.0));
        assert!(lr_test(&mk(Submodel::Gr), &mk(Submodel::Gollgr)).is_err());
        let mut worse = mk(Submodel::Gollgr);
        worse.loglik = -60.0;
        assert!(matches!(
            lr_test(&worse, &mk(Submodel::Ollgr)),
            Err(Error::Comparison(_))
        ));
    }

    #[test]
    fn recovers_gr_parameters() {
        let truth = GollgrParams::new(1.0, 1.0, 0.8, 2.0).unwrap();
        let data = truth.sample(2000, 11).unwrap();
        let fit = fit_mle(&data, None, Submodel::Gr, &FitOptions::default()).unwrap();
        assert!(fit.converged, "{:?}", fit.diagnostics);
        let se = fit.std_errors.unwrap();
        assert!((fit.estimates.delta() - 0.8).abs() < 4.0 * se.delta);
        assert!((fit.estimates.theta() - 2.0).abs() < 4.0 * se.theta);
        assert_eq!(se.alpha, None);
    }
}
