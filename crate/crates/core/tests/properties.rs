mod common;

use common::{naive_cdf, p};
use gollgr::inference::{criteria, lr_test, FitDiagnostics, FitResult};
use gollgr::regression::{censored_loglik, RegressionCoefficients, SurvivalDataset};
use gollgr::series::generalized_binomial;
use gollgr::special::*;
use gollgr::{GollgrParams, Submodel};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = GollgrParams> {
    (0.1f64..5.0, 0.1f64..5.0, -0.9f64..4.0, 0.05f64..20.0).prop_map(|(a, b, d, t)| p(a, b, d, t))
}

/// A point in the bulk of the law, chosen through its quantile function.
fn bulk_point(q: &GollgrParams, u: f64) -> f64 {
    q.quantile(u).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn cdf_is_a_distribution_function(q in params(), u1 in 0.001f64..0.999, u2 in 0.001f64..0.999) {
        let (x1, x2) = (bulk_point(&q, u1.min(u2)), bulk_point(&q, u1.max(u2)));
        let (c1, c2) = (q.cdf(x1), q.cdf(x2));
        prop_assert!((0.0..=1.0).contains(&c1) && (0.0..=1.0).contains(&c2));
        prop_assert!(c1 <= c2);
        prop_assert_eq!(q.cdf(0.0), 0.0);
        prop_assert_eq!(q.cdf(-1.0), 0.0);
    }

    #[test]
    fn quantile_roundtrip(q in params(), u in 1e-6f64..(1.0 - 1e-6)) {
        let x = q.quantile(u).unwrap();
        prop_assert!(x > 0.0);
        prop_assert!((q.cdf(x) - u).abs() <= 1e-9, "u={u} cdf={}", q.cdf(x));
    }

    #[test]
    fn complementary_probabilities(q in params(), u in 0.0001f64..0.9999) {
        let x = bulk_point(&q, u);
        prop_assert!((q.cdf(x) + q.sf(x) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn scaling_law(q in params(), u in 0.01f64..0.99, k in 0.2f64..5.0) {
        let x = bulk_point(&q, u);
        let scaled = p(q.alpha(), q.beta(), q.delta(), q.theta() / (k * k));
        prop_assert!((q.cdf(x) - scaled.cdf(k * x)).abs() <= 1e-12);
        let t2 = p(q.alpha(), q.beta(), q.delta(), q.theta() * k * k).odds_transform(x / k);
        let t3 = q.odds_transform(x);
        prop_assert!(((t2 - t3) / t3).abs() <= 1e-9, "{t2} {t3}");
    }

    #[test]
    fn submodel_reductions(d in -0.9f64..4.0, t in 0.05f64..20.0, b in 0.1f64..5.0, u in 0.01f64..0.99) {
        let gr = p(1.0, 1.0, d, t);
        let x = gr.gr().quantile(u).unwrap();
        prop_assert!((gr.cdf(x) - gr.gr().cdf(x)).abs() <= 1e-12);
        prop_assert!(((gr.pdf(x) - gr.gr().pdf(x)) / gr.gr().pdf(x)).abs() <= 1e-12);
        let egr = p(1.0, b, d, t);
        prop_assert!((egr.cdf(x) - gr.gr().cdf(x).powf(b)).abs() <= 1e-12);
    }

    #[test]
    fn log_space_matches_naive_transform(q in params(), u in 0.01f64..0.99) {
        let x = bulk_point(&q, u);
        let g = q.gr().cdf(x);
        prop_assume!(g > 1e-6 && g < 1.0 - 1e-6);
        prop_assert!((q.cdf(x) - naive_cdf(&q, x)).abs() <= 1e-10);
    }

    #[test]
    fn hazard_is_density_over_survival(q in params(), u in 0.01f64..0.99) {
        let x = bulk_point(&q, u);
        let h = q.pdf(x) / q.sf(x);
        prop_assert!(((q.hrf(x) - h) / h).abs() <= 1e-12);
    }

    #[test]
    fn incomplete_gamma_ratios_sum_to_one(a in 0.05f64..50.0, x in 0.0f64..100.0) {
        let r = incomplete_gamma(a, x).unwrap();
        prop_assert!((r.lower + r.upper - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn gamma_quantile_roundtrip(a in 0.05f64..50.0, u in 1e-8f64..(1.0 - 1e-8)) {
        let x = gamma_quantile(a, u).unwrap();
        prop_assert!((reg_lower_gamma(a, x).unwrap() - u).abs() <= 1e-12 * u.max(1e-3));
    }

    #[test]
    fn normal_quantile_roundtrip(u in 1e-12f64..(1.0 - 1e-12)) {
        let z = std_normal_quantile(u).unwrap();
        prop_assert!(((std_normal_cdf(z) - u) / u.min(1.0 - u)).abs() <= 1e-12);
    }

    #[test]
    fn binomial_pascal_rule(r in -5.0f64..5.0, j in 1usize..30) {
        // C(r, j) = C(r-1, j) + C(r-1, j-1)
        let lhs = generalized_binomial(r, j);
        let rhs = generalized_binomial(r - 1.0, j) + generalized_binomial(r - 1.0, j - 1);
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + lhs.abs()));
    }

    #[test]
    fn sampling_is_deterministic(q in params(), seed in any::<u64>()) {
        prop_assert_eq!(q.sample(20, seed).unwrap(), q.sample(20, seed).unwrap());
    }

    #[test]
    fn loglik_permutation_and_additivity(q in params(), seed in any::<u64>(), cut in 1usize..39) {
        let x = q.sample(40, seed).unwrap();
        let full = gollgr::inference::loglik(&x, &q);
        prop_assume!(full.is_finite());
        let mut rev = x.clone();
        rev.reverse();
        let split = gollgr::inference::loglik(&x[..cut], &q) + gollgr::inference::loglik(&x[cut..], &q);
        prop_assert!((gollgr::inference::loglik(&rev, &q) - full).abs() <= 1e-10 * (1.0 + full.abs()));
        prop_assert!((split - full).abs() <= 1e-10 * (1.0 + full.abs()));
    }

    #[test]
    fn censored_loglik_additive(seed in any::<u64>(), cut in 2usize..29) {
        let c = RegressionCoefficients::new(0.37, 0.61, vec![0.55, 1.75], vec![0.65, 2.75]).unwrap();
        let q = p(0.37, 0.61, 0.5, 2.0);
        let t = q.sample(30, seed).unwrap();
        let status: Vec<bool> = (0..30).map(|i| i % 3 != 0).collect();
        let cov: Vec<Vec<f64>> = (0..30).map(|i| vec![(i % 2) as f64]).collect();
        let ds = SurvivalDataset::with_intercept(t, status, &cov).unwrap();
        let full = censored_loglik(&ds, &c).unwrap();
        // both parts keep both covariate levels, so each design has full rank
        let a: Vec<usize> = (0..cut).collect();
        let b: Vec<usize> = (cut..30).rev().collect();
        let parts = censored_loglik(&ds.select(&a).unwrap(), &c).unwrap() + censored_loglik(&ds.select(&b).unwrap(), &c).unwrap();
        prop_assert!((parts - full).abs() <= 1e-10 * (1.0 + full.abs()));
    }

    #[test]
    fn information_criteria_relations(ll in -1e4f64..1e4, k in 1usize..10, n in 8usize..5000) {
        let (aic, bic, caic) = criteria(ll, k, n);
        prop_assert!((caic - bic - k as f64).abs() <= 1e-9 * (1.0 + caic.abs()));
        // ln n > 2 for n ≥ 8
        prop_assert!(bic > aic);
    }

    #[test]
    fn lr_statistic_nonnegative(l_full in -500.0f64..0.0, gap in 0.0f64..30.0) {
        let q = p(1.0, 1.0, 0.0, 1.0);
        let diag = FitDiagnostics {
            evaluations: 0, starts: 1, simplex_diameter: 0.0, loglik_spread: 0.0,
            gradient_norm: 0.0, hessian_positive_definite: true, at_boundary: false,
        };
        let mk = |s: Submodel, ll: f64| FitResult {
            submodel: s, estimates: q, std_errors: None, loglik: ll, aic: 0.0, bic: 0.0, caic: 0.0,
            converged: true, n_obs: 100, diagnostics: diag.clone(),
        };
        for (nested, df) in [(Submodel::Ollgr, 1), (Submodel::Egr, 1), (Submodel::Gr, 2)] {
            let t = lr_test(&mk(Submodel::Gollgr, l_full), &mk(nested, l_full - gap)).unwrap();
            prop_assert!(t.statistic >= 0.0);
            prop_assert_eq!(t.df, df);
            prop_assert!((0.0..=1.0).contains(&t.p_value));
        }
    }
}
