//! Derivative-free minimization and finite-difference curvature.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// Stopping rules for [`nelder_mead`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NelderMeadOptions {
    /// Largest sup-norm distance from the best vertex.
    pub x_tol: f64,
    /// Largest spread of objective values across the simplex.
    pub f_tol: f64,
    pub max_evals: usize,
    pub initial_step: f64,
    /// Restarts from the best vertex after apparent convergence.
    pub restarts: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            x_tol: 1e-8,
            f_tol: 1e-10,
            max_evals: 20_000,
            initial_step: 0.1,
            restarts: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub f: f64,
    pub evals: usize,
    pub converged: bool,
    /// Simplex diameter at termination.
    pub diameter: f64,
    /// Objective spread at termination.
    pub spread: f64,
}

/// Minimizes `f` with the adaptive Nelder–Mead simplex. Non-finite values
/// are treated as +∞, which keeps the simplex inside the objective's domain.
pub fn nelder_mead<F: FnMut(&[f64]) -> f64>(mut f: F, x0: &[f64], opts: &NelderMeadOptions) -> Minimum {
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut start = x0.to_vec();
    let mut step = opts.initial_step;
    let mut result = None;
    for round in 0..=opts.restarts {
        let m = run_simplex(&mut eval, &start, step, opts, &mut evals);
        let done = m.converged
            && result
                .as_ref()
                .is_some_and(|prev: &Minimum| (prev.f - m.f).abs() <= opts.f_tol);
        start = m.x.clone();
        step = (opts.initial_step * 0.1).max(100.0 * opts.x_tol);
        let stop = done || !m.converged || evals >= opts.max_evals || round == opts.restarts;
        result = Some(m);
        if stop {
            break;
        }
    }
    let mut m = result.expect("at least one simplex round");
    m.evals = evals;
    m
}

fn run_simplex<E: FnMut(&[f64], &mut usize) -> f64>(
    eval: &mut E,
    x0: &[f64],
    step: f64,
    opts: &NelderMeadOptions,
    evals: &mut usize,
) -> Minimum {
    let n = x0.len();
    let nf = n as f64;
    // dimension-adaptive coefficients
    let (rho, chi, gamma, sigma) = (1.0, 1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf);

    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    pts.push(x0.to_vec());
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += step * (1.0 + x0[i].abs()).min(10.0);
        pts.push(p);
    }
    let mut vals: Vec<f64> = pts.iter().map(|p| eval(p, evals)).collect();

    let mut order: Vec<usize> = (0..=n).collect();
    loop {
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        let best = order[0];
        let worst = order[n];
        let second = order[n - 1];

        let diameter = pts
            .iter()
            .map(|p| p.iter().zip(&pts[best]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        let spread = vals[worst] - vals[best];
        let converged = diameter < opts.x_tol && spread.abs() < opts.f_tol;
        // collapsed to rounding resolution without meeting the spread test
        let scale = pts[best].iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let stalled = diameter <= 64.0 * f64::EPSILON * scale;
        if converged || stalled || *evals >= opts.max_evals {
            return Minimum {
                x: pts[best].clone(),
                f: vals[best],
                evals: *evals,
                converged,
                diameter,
                spread,
            };
        }

        let mut centroid = vec![0.0; n];
        for &i in &order[..n] {
            for (c, v) in centroid.iter_mut().zip(&pts[i]) {
                *c += v / nf;
            }
        }
        let along = |t: f64| -> Vec<f64> { centroid.iter().zip(&pts[worst]).map(|(c, w)| c + t * (c - w)).collect() };

        let xr = along(rho);
        let fr = eval(&xr, evals);
        if fr < vals[best] {
            let xe = along(rho * chi);
            let fe = eval(&xe, evals);
            if fe < fr {
                pts[worst] = xe;
                vals[worst] = fe;
            } else {
                pts[worst] = xr;
                vals[worst] = fr;
            }
            continue;
        }
        if fr < vals[second] {
            pts[worst] = xr;
            vals[worst] = fr;
            continue;
        }
        let (xc, fc) = if fr < vals[worst] {
            let xc = along(rho * gamma);
            let fc = eval(&xc, evals);
            (xc, fc)
        } else {
            let xc = along(-gamma);
            let fc = eval(&xc, evals);
            (xc, fc)
        };
        if fc < vals[worst].min(fr) {
            pts[worst] = xc;
            vals[worst] = fc;
            continue;
        }
        let xb = pts[best].clone();
        for &i in &order[1..] {
            for (p, b) in pts[i].iter_mut().zip(&xb) {
                *p = b + sigma * (*p - b);
            }
            vals[i] = eval(&pts[i], evals);
        }
    }
}

/// Finite-difference step used for curvature: 1e-4 (1 + |x|).
#[inline]
pub fn fd_step(x: f64) -> f64 {
    1e-4 * (1.0 + x.abs())
}

/// Central-difference gradient.
pub fn gradient<F: FnMut(&[f64]) -> f64>(mut f: F, x: &[f64]) -> Vec<f64> {
    let mut y = x.to_vec();
    (0..x.len())
        .map(|i| {
            let h = 1e-6 * (1.0 + x[i].abs());
            y[i] = x[i] + h;
            let fp = f(&y);
            y[i] = x[i] - h;
            let fm = f(&y);
            y[i] = x[i];
            (fp - fm) / (2.0 * h)
        })
        .collect()
}

/// Central-difference Hessian with steps [`fd_step`].
pub fn hessian<F: FnMut(&[f64]) -> f64>(mut f: F, x: &[f64]) -> DMatrix<f64> {
    let n = x.len();
    let h: Vec<f64> = x.iter().map(|&v| fd_step(v)).collect();
    let f0 = f(x);
    let mut y = x.to_vec();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        y[i] = x[i] + h[i];
        let fp = f(&y);
        y[i] = x[i] - h[i];
        let fm = f(&y);
        y[i] = x[i];
        m[(i, i)] = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
        for j in 0..i {
            let mut corner = |si: f64, sj: f64| {
                y[i] = x[i] + si * h[i];
                y[j] = x[j] + sj * h[j];
                let v = f(&y);
                y[i] = x[i];
                y[j] = x[j];
                v
            };
            let v =
                (corner(1.0, 1.0) - corner(1.0, -1.0) - corner(-1.0, 1.0) + corner(-1.0, -1.0)) / (4.0 * h[i] * h[j]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

/// Inverse of a symmetric positive-definite matrix, or `None` when the
/// Cholesky factorization fails.
pub fn spd_inverse(m: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    if m.iter().any(|v| !v.is_finite()) {
        return None;
    }
    m.clone().cholesky().map(|c| c.inverse())
}

/// Covariance in original coordinates from the Hessian of the negative
/// log-likelihood in internal coordinates and the Jacobian of the map.
pub fn delta_method(neg_hessian_inv: &DMatrix<f64>, jacobian_diag: &[f64]) -> DMatrix<f64> {
    let j = DMatrix::from_diagonal(&DVector::from_column_slice(jacobian_diag));
    &j * neg_hessian_inv * &j
}
