#![allow(dead_code)]

pub mod reference;

use gollgr::GollgrParams;

pub fn p(a: f64, b: f64, d: f64, t: f64) -> GollgrParams {
    GollgrParams::new(a, b, d, t).unwrap()
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        ((got - want) / want).abs()
    }
}

/// GOLL transform of the crate's GR cdf, evaluated by the naive formula.
pub fn naive_cdf(q: &GollgrParams, x: f64) -> f64 {
    let g = q.gr().cdf(x);
    let a = g.powf(q.alpha() * q.beta());
    let b = (1.0 - g.powf(q.beta())).powf(q.alpha());
    a / (a + b)
}

/// Composite Gauss–Legendre (5 points) on `panels` equal pieces; an
/// integrator unrelated to the crate's adaptive Gauss–Kronrod.
pub fn gauss_legendre<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    const X: [f64; 5] = [
        0.0,
        -0.538_469_310_105_683_1,
        0.538_469_310_105_683_1,
        -0.906_179_845_938_664,
        0.906_179_845_938_664,
    ];
    const W: [f64; 5] = [
        0.568_888_888_888_888_9,
        0.478_628_670_499_366_5,
        0.478_628_670_499_366_5,
        0.236_926_885_056_189_1,
        0.236_926_885_056_189_1,
    ];
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let lo = a + k as f64 * h;
        let mid = lo + 0.5 * h;
        total += X.iter().zip(&W).map(|(x, w)| w * f(mid + 0.5 * h * x)).sum::<f64>() * 0.5 * h;
    }
    total
}

/// ∫_0^∞ f by the substitution x = s/(1-s) on a graded mesh in s, which
/// resolves integrable singularities at 0.
pub fn integrate_half_line<F: Fn(f64) -> f64>(f: F) -> f64 {
    let g = |s: f64| {
        if s <= 0.0 || s >= 1.0 {
            return 0.0;
        }
        let x = s / (1.0 - s);
        f(x) / ((1.0 - s) * (1.0 - s))
    };
    // geometric refinement towards s = 0
    let mut total = 0.0;
    let mut hi = 1.0;
    for _ in 0..60 {
        let lo = hi * 0.5;
        total += gauss_legendre(g, lo, hi, 40);
        hi = lo;
    }
    total
}

/// Parameter grid: the density and hazard shape families, the simulation
/// designs and a spread of other shapes (26 sets).
pub fn parameter_grid() -> Vec<GollgrParams> {
    let mut v = Vec::new();
    // δ = 1.5, θ = 15, varying (α, β)
    for (a, b) in [(0.3, 2.0), (0.5, 0.5), (2.0, 3.0)] {
        v.push(p(a, b, 1.5, 15.0));
    }
    // α = 0.3, β = 2, θ = 15, varying δ
    for d in [-0.5, 0.5, 4.0] {
        v.push(p(0.3, 2.0, d, 15.0));
    }
    // α = 0.3, β = 1.5, δ = 1.5, varying θ
    for t in [1.0, 5.0, 25.0] {
        v.push(p(0.3, 1.5, 1.5, t));
    }
    // hazard shapes: α = 0.1, δ = 1.5
    for (b, t) in [(2.0, 1.0), (5.0, 3.0)] {
        v.push(p(0.1, b, 1.5, t));
    }
    // α = 0.3, β = 2.5
    for (d, t) in [(-0.5, 1.0), (1.0, 10.0)] {
        v.push(p(0.3, 2.5, d, t));
    }
    // α = 0.1
    for (b, d, t) in [(1.0, 0.0, 1.0), (3.0, 2.0, 2.0)] {
        v.push(p(0.1, b, d, t));
    }
    // simulation designs and others
    v.push(p(0.35, 0.55, -0.55, 0.11));
    v.push(p(0.37, 0.61, 0.733, 1.916));
    v.push(p(1.0, 1.0, 0.0, 1.0));
    v.push(p(1.0, 1.0, -0.5, 0.5));
    v.push(p(2.0, 1.3, 0.0, 1.0));
    v.push(p(0.7, 0.8, 0.5, 1.0));
    v.push(p(1.0, 3.0, 0.5, 2.0));
    v.push(p(5.0, 0.2, 1.0, 0.5));
    v.push(p(0.15, 5.0, 0.5, 1.0));
    v.push(p(3.0, 3.0, -0.8, 4.0));
    v.push(p(0.8, 0.4, 3.0, 0.05));
    v
}

/// Kolmogorov–Smirnov statistic of `sample` against `cdf`.
pub fn ks_statistic<F: Fn(f64) -> f64>(mut sample: Vec<f64>, cdf: F) -> f64 {
    sample.sort_by(f64::total_cmp);
    let n = sample.len() as f64;
    sample
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i as f64 + 1.0) / n - f)
        })
        .fold(0.0, f64::max)
}
