mod common;

use common::p;
use gollgr::inference::{fit_mle, FitOptions};
use gollgr::regression::{
    censored_loglik, fit_regression, quantile_residuals, survival, RegressionCoefficients, SurvivalDataset,
};
use gollgr::simulation::{regression_replicate, replicate_rng};
use gollgr::Submodel;

fn design_truth() -> RegressionCoefficients {
    RegressionCoefficients::new(0.37, 0.61, vec![0.55, 1.75], vec![0.65, 2.75]).unwrap()
}

#[test]
fn intercept_only_regression_matches_distribution_fit() {
    let x = p(1.0, 1.0, 0.7, 1.3).sample(300, 8).unwrap();
    let ds = SurvivalDataset::uncensored(x.clone()).unwrap();
    let opts = FitOptions::default();
    let reg = fit_regression(&ds, Submodel::Gr, None, &opts).unwrap();
    let dist = fit_mle(&x, None, Submodel::Gr, &opts).unwrap();
    assert!(reg.converged && dist.converged);
    assert!((reg.loglik - dist.loglik).abs() < 1e-6 * dist.loglik.abs());
    let c = &reg.coefficients;
    assert!((c.lambda_delta[0].exp_m1() - dist.estimates.delta()).abs() < 1e-3);
    assert!((c.lambda_theta[0].exp() - dist.estimates.theta()).abs() < 1e-3);
}

#[test]
fn all_censored_loglik_is_sum_of_log_survival() {
    let c = design_truth();
    let times = vec![0.3, 0.9, 1.4, 0.2, 2.2, 0.6];
    let cov: Vec<Vec<f64>> = (0..6).map(|i| vec![(i % 2) as f64]).collect();
    let ds = SurvivalDataset::with_intercept(times.clone(), vec![false; 6], &cov).unwrap();
    let want: f64 = (0..6)
        .map(|i| survival(times[i], &[1.0, cov[i][0]], &c).unwrap().ln())
        .sum();
    assert!((censored_loglik(&ds, &c).unwrap() - want).abs() < 1e-12 * want.abs());
}

#[test]
fn censoring_near_zero_adds_nothing() {
    let c = design_truth();
    let mut rng = replicate_rng(3, 0, 0);
    let ds = regression_replicate(&c, 40, &mut rng).unwrap();
    let base = censored_loglik(&ds, &c).unwrap();
    let mut last = f64::INFINITY;
    for x0 in [1e-2, 1e-4, 1e-8] {
        let mut times = ds.times().to_vec();
        let mut status = ds.status().to_vec();
        let mut cov: Vec<Vec<f64>> = (0..ds.len()).map(|i| vec![ds.row(i)[1]]).collect();
        times.push(x0);
        status.push(false);
        cov.push(vec![1.0]);
        let extended = SurvivalDataset::with_intercept(times, status, &cov).unwrap();
        let change = (censored_loglik(&extended, &c).unwrap() - base).abs();
        assert!(change <= last);
        last = change;
    }
    assert!(last < 1e-6);
}

#[test]
fn survival_limits() {
    let c = design_truth();
    assert!((survival(1e-12, &[1.0, 1.0], &c).unwrap() - 1.0).abs() < 1e-9);
    assert!(survival(50.0, &[1.0, 0.0], &c).unwrap() < 1e-12);
    // α = β = 1 collapses to the GR survival function
    let gr = RegressionCoefficients::new(1.0, 1.0, vec![0.4], vec![-0.2]).unwrap();
    let g = gollgr::GrParams::new(0.4f64.exp_m1(), (-0.2f64).exp()).unwrap();
    for x in [0.3, 1.0, 2.5] {
        assert!((survival(x, &[1.0], &gr).unwrap() - (1.0 - g.cdf(x))).abs() < 1e-13);
    }
}

#[test]
fn gr_regression_error_shrinks_with_n() {
    let truth = RegressionCoefficients::new(1.0, 1.0, vec![0.3, 0.8], vec![0.2, -0.5]).unwrap();
    let opts = FitOptions::default();
    let mean_abs_err = |n: usize| {
        let mut total = 0.0;
        for r in 0..10 {
            let ds = regression_replicate(&truth, n, &mut replicate_rng(11, n, r)).unwrap();
            let fit = fit_regression(&ds, Submodel::Gr, Some(&truth), &opts).unwrap();
            let est = fit.coefficients.to_vec();
            total += est
                .iter()
                .zip(truth.to_vec())
                .skip(2)
                .map(|(a, b)| (a - b).abs())
                .sum::<f64>();
        }
        total / 10.0
    };
    assert!(mean_abs_err(800) < mean_abs_err(100));
}

#[test]
fn residuals_need_a_converged_fit() {
    let ds = regression_replicate(&design_truth(), 200, &mut replicate_rng(1, 0, 0)).unwrap();
    let mut fit = fit_regression(&ds, Submodel::Gollgr, Some(&design_truth()), &FitOptions::default()).unwrap();
    fit.converged = false;
    assert!(quantile_residuals(&ds, &fit).is_err());
}

#[test]
fn rank_deficient_design_is_rejected() {
    let cov = vec![vec![1.0], vec![1.0], vec![1.0]];
    assert!(SurvivalDataset::with_intercept(vec![1.0, 2.0, 3.0], vec![true; 3], &cov).is_err());
}
