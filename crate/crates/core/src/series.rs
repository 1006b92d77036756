//! Power-series and GR-mixture representation of the GOLLGR law.
//!
//! With y = G(x) the cdf is expanded as F = Σ d_k y^k, where
//! y^{αβ} + (1 - y^β)^α = Σ c_k y^k and y^{αβ} = Σ a_k(αβ) y^k. Combining
//! with the power series of γ₁ gives the density as a linear combination of
//! GR densities, f(x) = Σ_{l,m} w_{l,m} g_GR(x; δ*_{l,m}, θ) with
//! δ*_{l,m} = l(δ+1) + m + δ.
//!
//! The expansion of y^r in integer powers of y exists only when r is a
//! non-negative integer (the coefficient sums diverge for k ≥ r otherwise),
//! so a table can only be built when αβ and β are integers, and it converges
//! on the reference grid G ≤ 0.9 only when F is analytic in G on a disc of
//! radius above 0.9. Anything else is reported as non-convergence.
//!
//! Sums over m alternate with polynomially growing terms once integrated
//! against x^s or e^{tx}; moments and the generating function use Euler
//! summation over m for that reason.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::gr::GrParams;
use crate::model::GollgrParams;
use crate::special::{gamma_ratios, ln_gamma_unchecked, ln_pcf_large_order, parabolic_cylinder_d_with, Accuracy};

const INTEGER_TOL: f64 = 1e-12;
const A_SERIES_MAX_TERMS: usize = 200_000;
const K_SCHEDULE: [usize; 4] = [25, 50, 100, 200];
const MIN_EULER_TERMS: usize = 64;

/// Tuning for [`mixture_weights`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpansionOptions {
    /// Largest acceptable |Σ d_k y^k - F| on the reference grid.
    pub tol: f64,
    /// Hard cap on K, L and M.
    pub max_order: usize,
    /// Largest parent cdf value on the reference grid.
    pub grid_max: f64,
}

impl Default for ExpansionOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            max_order: 200,
            grid_max: 0.9,
        }
    }
}

/// Truncated coefficient arrays with their truncation metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionTable {
    pub params: GollgrParams,
    pub c: Vec<f64>,
    pub d: Vec<f64>,
    /// e[l][m] = e_m^{(l)}; entries may underflow to zero.
    pub e: Vec<Vec<f64>>,
    /// w[l][m]
    pub w: Vec<Vec<f64>>,
    pub k_max: usize,
    pub l_max: usize,
    pub m_max: usize,
    /// Relative truncation plus rounding estimate for the mixture density
    /// on the reference grid.
    pub tail_bound: f64,
    /// Achieved max |Σ d_k G^k - F| on the reference grid.
    pub cdf_residual: f64,
    /// Signed log-magnitudes of the weights, used for evaluation.
    #[serde(skip)]
    ln_w: Vec<Vec<(f64, f64)>>,
}

fn non_convergence(msg: impl Into<String>) -> Error {
    Error::NonConvergence { msg: msg.into() }
}

fn as_integer(r: f64) -> Option<i64> {
    let n = r.round();
    ((r - n).abs() <= INTEGER_TOL * r.abs().max(1.0)).then_some(n as i64)
}

/// (ln |Γ(x)|, sign Γ(x)) for x not a non-positive integer.
fn ln_abs_gamma(x: f64) -> (f64, f64) {
    if x > 0.0 {
        return (ln_gamma_unchecked(x), 1.0);
    }
    // reflection: Γ(x) Γ(1 - x) = π / sin(πx)
    let s = (std::f64::consts::PI * x).sin();
    let ln = std::f64::consts::PI.ln() - s.abs().ln() - ln_gamma_unchecked(1.0 - x);
    (ln, s.signum())
}

/// Generalized binomial coefficient C(r, j) via log-gamma with sign tracking.
pub fn generalized_binomial(r: f64, j: usize) -> f64 {
    if let Some(n) = as_integer(r).filter(|&n| n >= 0) {
        if j as i64 > n {
            return 0.0;
        }
        let j = j.min(n as usize - j);
        return (1..=j)
            .fold(1.0, |acc, i| acc * (n as f64 - j as f64 + i as f64) / i as f64)
            .round();
    }
    if let Some(n) = as_integer(r) {
        // C(-m, j) = (-1)^j C(m + j - 1, j)
        let sign = if j.is_multiple_of(2) { 1.0 } else { -1.0 };
        return sign * generalized_binomial((j as i64 - n - 1) as f64, j);
    }
    let (ln, sign) = ln_generalized_binomial(r, j);
    sign * ln.exp()
}

fn ln_generalized_binomial(r: f64, j: usize) -> (f64, f64) {
    if j == 0 {
        return (0.0, 1.0);
    }
    if let Some(n) = as_integer(r) {
        if n >= 0 && j as i64 > n {
            return (f64::NEG_INFINITY, 0.0);
        }
        if n >= 0 {
            return (generalized_binomial(r, j).ln(), 1.0);
        }
    }
    let (l1, s1) = ln_abs_gamma(r + 1.0);
    let (l2, s2) = ln_abs_gamma(r - j as f64 + 1.0);
    (l1 - l2 - ln_gamma_unchecked(j as f64 + 1.0), s1 * s2)
}

/// a_k(r) = Σ_{j≥k} (-1)^{j+k} C(r, j) C(j, k), the coefficient of y^k in
/// the expansion of y^r. Exact for integer r; for non-integer r the sum
/// converges only when k < r, and slowly.
pub fn coeff_a(k: usize, power: f64) -> Result<f64> {
    if !(power >= 0.0) || !power.is_finite() {
        return Err(domain(
            "coeff_a",
            format!("power must be finite and non-negative, got {power}"),
        ));
    }
    if let Some(n) = as_integer(power) {
        return Ok(if k as i64 == n { 1.0 } else { 0.0 });
    }
    let kf = k as f64;
    if kf >= power {
        return Err(non_convergence(format!(
            "a_{k}({power}) diverges: terms decay like j^(k - r - 1) = j^{:.4}",
            kf - power - 1.0
        )));
    }
    let ln_ck = |j: usize| {
        ln_gamma_unchecked(j as f64 + 1.0) - ln_gamma_unchecked(kf + 1.0) - ln_gamma_unchecked((j - k) as f64 + 1.0)
    };
    let mut sum = 0.0;
    let mut comp = 0.0;
    let mut last = 0.0;
    let mut abs_sum = 0.0;
    for j in k..k + A_SERIES_MAX_TERMS {
        let (lb, sb) = ln_generalized_binomial(power, j);
        let sign = if (j + k).is_multiple_of(2) { 1.0 } else { -1.0 };
        let term = sign * sb * (lb + ln_ck(j)).exp();
        // Neumaier summation
        let t = sum + term;
        comp += if sum.abs() >= term.abs() {
            (sum - t) + term
        } else {
            (term - t) + sum
        };
        sum = t;
        last = term;
        abs_sum += term.abs();
        let jj = (j - k + 1) as f64;
        // terms eventually keep one sign and decay like j^{k-r-1}; the
        // remaining tail is bounded by |term| j / (r - k)
        let tail = last.abs() * jj / (power - kf);
        if j > k + power.ceil() as usize && tail <= 1e-9 * abs_sum {
            return Ok(sum + comp);
        }
    }
    Err(non_convergence(format!(
        "a_{k}({power}) not converged after {A_SERIES_MAX_TERMS} terms (partial sum {}, last term {last:e})",
        sum + comp
    )))
}

/// c_0..c_K of y^{αβ} + (1 - y^β)^α = Σ c_k y^k.
pub fn coeff_c(k_max: usize, alpha: f64, beta: f64) -> Result<Vec<f64>> {
    check_shapes("coeff_c", alpha, beta)?;
    let mut c = power_coeffs(alpha * beta, k_max)?;
    let alpha_int = as_integer(alpha).filter(|&n| n >= 0);
    let mut i = 0usize;
    loop {
        let r = i as f64 * beta;
        if r > k_max as f64 + 0.5 {
            break;
        }
        if let Some(n) = alpha_int {
            if i as i64 > n {
                break;
            }
        }
        let b = generalized_binomial(alpha, i) * if i.is_multiple_of(2) { 1.0 } else { -1.0 };
        if b != 0.0 {
            for (ck, ak) in c.iter_mut().zip(power_coeffs(r, k_max)?) {
                *ck += b * ak;
            }
        }
        i += 1;
    }
    Ok(c)
}

/// Coefficients 0..=k_max of y^r; errors for non-integer r (see [`coeff_a`]).
fn power_coeffs(r: f64, k_max: usize) -> Result<Vec<f64>> {
    let mut v = vec![0.0; k_max + 1];
    match as_integer(r) {
        Some(n) if n >= 0 => {
            if (n as usize) <= k_max {
                v[n as usize] = 1.0;
            }
            Ok(v)
        }
        _ => {
            for (k, vk) in v.iter_mut().enumerate() {
                *vk = coeff_a(k, r)?;
            }
            Ok(v)
        }
    }
}

fn check_shapes(func: &'static str, alpha: f64, beta: f64) -> Result<()> {
    if !(alpha > 0.0 && beta > 0.0) || !alpha.is_finite() || !beta.is_finite() {
        return Err(domain(
            func,
            format!("alpha and beta must be positive, got ({alpha}, {beta})"),
        ));
    }
    Ok(())
}

/// d_0..d_K from a_k = Σ_{r=0}^k c_r d_{k-r}:
/// d_k = (a_k - Σ_{r=1}^k c_r d_{k-r}) / c_0.
pub fn coeff_d(k_max: usize, alpha: f64, beta: f64) -> Result<Vec<f64>> {
    let c = coeff_c(k_max, alpha, beta)?;
    let a = power_coeffs(alpha * beta, k_max)?;
    d_from(&a, &c)
}

fn d_from(a: &[f64], c: &[f64]) -> Result<Vec<f64>> {
    if c[0].abs() < 1e-300 {
        return Err(domain("coeff_d", "c_0 vanishes; the series ratio is undefined"));
    }
    let mut d = Vec::with_capacity(a.len());
    for k in 0..a.len() {
        let s: f64 = (1..=k).map(|r| c[r] * d[k - r]).sum();
        d.push((a[k] - s) / c[0]);
    }
    Ok(d)
}

fn horner(coef: &[f64], y: f64) -> f64 {
    coef.iter().rev().fold(0.0, |acc, &c| acc * y + c)
}

/// Σ_{k≤K} d_k y^k.
pub fn series_cdf(d: &[f64], y: f64) -> f64 {
    horner(d, y)
}

/// F as a function of the parent cdf y.
fn transform(alpha: f64, beta: f64, y: f64) -> f64 {
    let ln_a = alpha * beta * y.ln();
    let ln_b = alpha * (-(beta * y.ln()).exp()).ln_1p();
    1.0 / (1.0 + (ln_b - ln_a).exp())
}

/// Scaled power recursion. Returns, for m = 0..=m_max, (ln|ê_m|, sign)
/// where e_m^{(l)} of (Σ q_i u^i)^l with q_i = (-1)^i / ((δ+1+i) i!) is
/// q_0^l · ê_m · l^m / m!.
fn scaled_power(l: usize, m_max: usize, shape: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(m_max + 1);
    out.push((0.0, 1.0));
    if l == 0 {
        out.extend(std::iter::repeat_n((f64::NEG_INFINITY, 0.0), m_max));
        return out;
    }
    let lf = l as f64;
    // r̂_i = (q_i / q_0) i! / l^i = (-1)^i (δ+1) / ((δ+1+i) l^i)
    let r_hat: Vec<f64> = (0..=m_max)
        .map(|i| {
            let s = if i % 2 == 0 { 1.0 } else { -1.0 };
            s * shape / (shape + i as f64) * (-(i as f64) * lf.ln()).exp()
        })
        .collect();
    let mut vals = vec![1.0f64];
    // vals are kept with a running log scale to stay in range
    let mut ln_scale = vec![0.0f64];
    for m in 1..=m_max {
        let mf = m as f64;
        let mut acc = 0.0;
        let mut binom = 1.0; // C(m, i), built incrementally
        let base = ln_scale[m - 1];
        for i in 1..=m {
            binom *= (m - i + 1) as f64 / i as f64;
            let coef = ((lf + 1.0) * i as f64 - mf) * binom * r_hat[i];
            acc += coef * vals[m - i] * (ln_scale[m - i] - base).exp();
        }
        let v = acc / mf;
        if v == 0.0 {
            vals.push(0.0);
            ln_scale.push(base);
        } else {
            let ln = v.abs().ln();
            vals.push(v.signum());
            ln_scale.push(base + ln);
        }
        out.push(if v == 0.0 {
            (f64::NEG_INFINITY, 0.0)
        } else {
            (ln_scale[m], vals[m])
        });
    }
    out
}

/// e_m^{(l)} for l = 0..=L, m = 0..=M with q_m = (-1)^m θ^m / ((δ+1+m) m!).
pub fn coeff_e(l_max: usize, m_max: usize, gr: &GrParams) -> Vec<Vec<f64>> {
    let shape = gr.delta() + 1.0;
    let ln_theta = gr.theta().ln();
    (0..=l_max)
        .map(|l| {
            scaled_power(l, m_max, shape)
                .into_iter()
                .enumerate()
                .map(|(m, (ln, s))| {
                    if s == 0.0 {
                        return 0.0;
                    }
                    let lf = l as f64;
                    let mf = m as f64;
                    let lm = if l == 0 { 0.0 } else { mf * lf.ln() };
                    s * (-(lf * shape.ln()) + ln + lm - ln_gamma_unchecked(mf + 1.0) + mf * ln_theta).exp()
                })
                .collect()
        })
        .collect()
}

/// Reference x-grid: parent quantiles at G = grid_max · j / n.
fn reference_grid(gr: &GrParams, grid_max: f64) -> Result<Vec<f64>> {
    let n = 24;
    (1..=n).map(|j| gr.quantile(grid_max * j as f64 / n as f64)).collect()
}

/// Builds the mixture representation, growing K until the cdf series
/// agrees with the closed form to `tol` on the reference grid and M until
/// the inner sums have settled.
pub fn mixture_weights(p: &GollgrParams, opts: &ExpansionOptions) -> Result<ExpansionTable> {
    let (alpha, beta) = (p.alpha(), p.beta());
    let ys: Vec<f64> = (1..=30).map(|j| opts.grid_max * j as f64 / 30.0).collect();
    let exact: Vec<f64> = ys.iter().map(|&y| transform(alpha, beta, y)).collect();

    let mut chosen = None;
    let mut residual = f64::INFINITY;
    for &k in K_SCHEDULE.iter().filter(|&&k| k <= opts.max_order) {
        let c = coeff_c(k, alpha, beta)?;
        let a = power_coeffs(alpha * beta, k)?;
        let d = d_from(&a, &c)?;
        let vals: Vec<f64> = ys.iter().map(|&y| horner(&d, y)).collect();
        residual = vals.iter().zip(&exact).map(|(v, e)| (v - e).abs()).fold(0.0, f64::max);
        // successive partial sums at the top of the grid differ by the last terms
        let y_top = opts.grid_max;
        let settled = (d[k] * y_top.powi(k as i32)).abs() + (d[k - 1] * y_top.powi(k as i32 - 1)).abs() < 1e-8;
        if !residual.is_finite() {
            break;
        }
        if settled && residual <= opts.tol {
            chosen = Some((k, c, d));
            break;
        }
    }
    let (k_max, c, d) = chosen.ok_or_else(|| {
        non_convergence(format!(
            "cdf series for alpha={alpha}, beta={beta} does not reach {} on G <= {} (residual {residual:e})",
            opts.tol, opts.grid_max
        ))
    })?;

    let gr = p.gr();
    let shape = gr.delta() + 1.0;
    let lg_shape = ln_gamma_unchecked(shape);
    let l_max = d.iter().rposition(|v| v.abs() > 1e-300).unwrap_or(1).max(1) - 1;
    let xs = reference_grid(&gr, opts.grid_max)?;

    let mut m_max = 20usize;
    let mut last: Option<Vec<f64>> = None;
    let table = loop {
        let ln_w = log_weights(&d, l_max, m_max, shape, lg_shape);
        let table = ExpansionTable {
            params: *p,
            c: c.clone(),
            d: d.clone(),
            e: coeff_e(l_max, m_max, &gr),
            w: ln_w
                .iter()
                .map(|row| row.iter().map(|&(l, s)| s * l.exp()).collect())
                .collect(),
            k_max,
            l_max,
            m_max,
            tail_bound: 0.0,
            cdf_residual: residual,
            ln_w,
        };
        if table.w.iter().flatten().any(|w| !w.is_finite()) {
            return Err(non_convergence(format!("mixture weights overflow at M={m_max}")));
        }
        let vals: Vec<f64> = xs.iter().map(|&x| table.pdf(x)).collect();
        let settled = last
            .as_ref()
            .is_some_and(|lv: &Vec<f64>| lv.iter().zip(&vals).all(|(a, b)| (a - b).abs() <= 1e-13 * b.abs()));
        if settled {
            break table;
        }
        if m_max >= opts.max_order {
            return Err(non_convergence(format!(
                "inner mixture sums unsettled at M={m_max} on the reference grid"
            )));
        }
        last = Some(vals);
        m_max = (m_max + 20).min(opts.max_order);
    };

    // the Euler-summed moment series need more inner terms than the density
    let m_eval = m_max.max(MIN_EULER_TERMS).min(opts.max_order);
    let mut table = table;
    if m_eval > m_max {
        table.ln_w = log_weights(&d, l_max, m_eval, shape, lg_shape);
        table.w = table
            .ln_w
            .iter()
            .map(|row| row.iter().map(|&(l, s)| s * l.exp()).collect())
            .collect();
        table.e = coeff_e(l_max, m_eval, &gr);
        table.m_max = m_eval;
        if table.w.iter().flatten().any(|w| !w.is_finite()) {
            return Err(non_convergence(format!("mixture weights overflow at M={m_eval}")));
        }
    }
    table.tail_bound = xs.iter().map(|&x| table.pdf_with_bound(x).1).fold(0.0, f64::max);
    Ok(table)
}

fn log_weights(d: &[f64], l_max: usize, m_max: usize, shape: f64, lg_shape: f64) -> Vec<Vec<(f64, f64)>> {
    (0..=l_max)
        .map(|l| {
            let dl = d[l + 1];
            let lf = l as f64;
            scaled_power(l, m_max, shape)
                .into_iter()
                .enumerate()
                .map(|(m, (ln_e, s))| {
                    if dl == 0.0 || s == 0.0 {
                        return (f64::NEG_INFINITY, 0.0);
                    }
                    let mf = m as f64;
                    let star1 = (lf + 1.0) * shape + mf; // δ* + 1
                    let lm = if l == 0 { 0.0 } else { mf * lf.ln() };
                    let ln_e_tilde = -lf * shape.ln() + ln_e + lm - ln_gamma_unchecked(mf + 1.0);
                    let ln = (lf + 1.0).ln() + dl.abs().ln() + ln_gamma_unchecked(star1) + ln_e_tilde
                        - (lf + 1.0) * lg_shape;
                    (ln, s * dl.signum())
                })
                .collect()
        })
        .collect()
}

/// Euler (E, q) summation: Σ_n b_n with b_n = Σ_k C(n,k) q^{n-k} a_k / (q+1)^{n+1}.
/// Sums Σ z^k whenever |q + z| < q + 1, so q is matched to the geometric
/// growth of the terms. Returns the sum and an error estimate from the last
/// transformed terms.
fn euler_sum(a: &[f64], q: f64) -> (f64, f64) {
    let n_terms = a.len();
    let last_nonzero = a.iter().rposition(|v| *v != 0.0).unwrap_or(0);
    if 2 * (last_nonzero + 1) <= n_terms {
        // finitely many terms: nothing to accelerate
        return (a.iter().sum(), 0.0);
    }
    let mut total = 0.0;
    let mut prev = f64::INFINITY;
    let mut last = f64::INFINITY;
    let mut best_err = f64::INFINITY;
    let mut best = 0.0;
    let mut avg = a.to_vec();
    for _ in 0..n_terms {
        let b = avg[0] / (q + 1.0);
        total += b;
        let err = b.abs() + last.abs().min(prev.abs());
        if err < best_err {
            best_err = err;
            best = total;
        }
        prev = last;
        last = b;
        for k in 0..avg.len() - 1 {
            avg[k] = (q * avg[k] + avg[k + 1]) / (q + 1.0);
        }
        avg.pop();
    }
    (best, best_err)
}

impl ExpansionTable {
    #[inline]
    fn ln_star1(&self, l: usize, m: usize) -> f64 {
        (l as f64 + 1.0) * (self.params.delta() + 1.0) + m as f64
    }

    /// Truncated Σ d_k G(x)^k.
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        horner(&self.d, self.params.gr().cdf(x))
    }

    /// Truncated mixture density.
    pub fn pdf(&self, x: f64) -> f64 {
        self.pdf_with_bound(x).0
    }

    /// Mixture density and its relative truncation/rounding estimate.
    fn pdf_with_bound(&self, x: f64) -> (f64, f64) {
        if x <= 0.0 {
            return (0.0, 0.0);
        }
        let theta = self.params.theta();
        let (ln_t, ln_x) = (theta.ln(), x.ln());
        let mut total = 0.0;
        let mut abs_total = 0.0;
        let mut blocks = Vec::with_capacity(self.l_max + 1);
        let mut last_terms = 0.0;
        for (l, row) in self.ln_w.iter().enumerate() {
            let mut block = 0.0;
            for (m, &(lw, s)) in row.iter().enumerate() {
                if s == 0.0 {
                    continue;
                }
                let star1 = self.ln_star1(l, m);
                let ln_g = std::f64::consts::LN_2 + star1 * ln_t + (2.0 * star1 - 1.0) * ln_x
                    - theta * x * x
                    - ln_gamma_unchecked(star1);
                let term = s * (lw + ln_g).exp();
                block += term;
                abs_total += term.abs();
                if m + 2 > row.len() {
                    last_terms += term.abs();
                }
            }
            blocks.push(block);
            total += block;
        }
        let n = blocks.len();
        // a d-series that ended well inside K is a polynomial: no block tail
        let finite = self.l_max + 6 < self.k_max;
        let block_tail = if n >= 2 && !finite {
            10.0 * (blocks[n - 1].abs() + blocks[n - 2].abs())
        } else {
            0.0
        };
        let rounding = 1e3 * f64::EPSILON * abs_total;
        let bound = (block_tail + 2.0 * last_terms + rounding) / total.abs().max(f64::MIN_POSITIVE);
        (total, bound.max(4.0 * f64::EPSILON))
    }

    /// Euler-summed Σ_{l,m} w_{l,m} h(l, m) where `ln_h` gives ln h > 0.
    fn weighted_sum<H: Fn(usize, usize) -> f64>(&self, ln_h: H, what: &str) -> Result<f64> {
        let mut total = 0.0;
        let mut err = 0.0;
        for (l, row) in self.ln_w.iter().enumerate() {
            if row.iter().all(|&(_, s)| s == 0.0) {
                continue;
            }
            let terms: Vec<f64> = row
                .iter()
                .enumerate()
                .map(|(m, &(lw, s))| if s == 0.0 { 0.0 } else { s * (lw + ln_h(l, m)).exp() })
                .collect();
            let (v, e) = euler_sum(&terms, (l as f64).max(1.0));
            total += v;
            err += e;
        }
        if !total.is_finite() || err > 1e-7 * total.abs().max(1e-300) {
            return Err(non_convergence(format!(
                "{what}: Euler-summed mixture series unsettled (value {total:e}, error estimate {err:e})"
            )));
        }
        Ok(total)
    }

    /// E(X^s) = Σ w_{l,m} Γ(s/2 + δ* + 1) / (θ^{s/2} Γ(δ* + 1)).
    pub fn moment(&self, s: f64) -> Result<f64> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(domain(
                "ExpansionTable::moment",
                format!("order must be positive, got {s}"),
            ));
        }
        let half_ln_t = 0.5 * s * self.params.theta().ln();
        self.weighted_sum(
            |l, m| {
                let star1 = self.ln_star1(l, m);
                ln_gamma_unchecked(0.5 * s + star1) - half_ln_t - ln_gamma_unchecked(star1)
            },
            "moment",
        )
    }

    /// ∫₀^x t^s f(t) dt through γ₁(δ* + s/2 + 1, θx²).
    pub fn incomplete_moment(&self, s: f64, x: f64) -> Result<f64> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(domain(
                "ExpansionTable::incomplete_moment",
                format!("order must be positive, got {s}"),
            ));
        }
        if x <= 0.0 {
            return Ok(0.0);
        }
        let theta = self.params.theta();
        let half_ln_t = 0.5 * s * theta.ln();
        let z = theta * x * x;
        self.weighted_sum(
            |l, m| {
                let star1 = self.ln_star1(l, m);
                ln_gamma_unchecked(0.5 * s + star1) - half_ln_t - ln_gamma_unchecked(star1)
                    + gamma_ratios(0.5 * s + star1, z).ln_lower
            },
            "incomplete_moment",
        )
    }

    /// Range of t over which the generating function is evaluated.
    pub fn t_max(&self) -> f64 {
        2.0 * self.params.theta().sqrt()
    }

    /// M(t) = Σ w_{l,m} 2^{-δ*} Γ(2δ*+2)/Γ(δ*+1) e^{t²/(8θ)} D_{-δ̃}(-t/√(2θ))
    /// with δ̃ = 2(δ* + 1). M(0) is the total mass, exactly 1.
    pub fn mgf(&self, t: f64) -> Result<f64> {
        if !t.is_finite() || t.abs() > self.t_max() {
            return Err(domain(
                "ExpansionTable::mgf",
                format!("|t| must not exceed {} for this table, got {t}", self.t_max()),
            ));
        }
        if t == 0.0 {
            return Ok(1.0);
        }
        let theta = self.params.theta();
        let y = -t / (2.0 * theta).sqrt();
        let acc = Accuracy::new(1e-12, 2_000)?;
        let shift = t * t / (8.0 * theta);
        let failure = std::cell::RefCell::new(None);
        let v = self.weighted_sum(
            |l, m| {
                let star1 = self.ln_star1(l, m);
                let nu = 2.0 * star1;
                let ln_d = if nu >= 1.0 {
                    ln_pcf_large_order(nu, y, &acc)
                } else {
                    parabolic_cylinder_d_with(-nu, y, &acc).map(f64::ln)
                };
                match ln_d {
                    Ok(ld) => {
                        -(star1 - 1.0) * std::f64::consts::LN_2 + ln_gamma_unchecked(nu) - ln_gamma_unchecked(star1)
                            + shift
                            + ld
                    }
                    Err(e) => {
                        failure.borrow_mut().get_or_insert(e);
                        f64::NAN
                    }
                }
            },
            "mgf",
        );
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        v
    }
}
