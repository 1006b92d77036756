//! The GOLLGR distribution: the generalized odd log-logistic transform
//! F = G^{αβ} / (G^{αβ} + (1 - G^β)^α) applied to a GR parent G.
//!
//! Every evaluation goes through logarithms of A = G^{αβ} and
//! B = (1 - G^β)^α, so neither tail loses precision: ln F = -softplus(ln B - ln A)
//! and ln S = -softplus(ln A - ln B).

use std::f64::consts::LN_2;

use rand::distributions::Open01;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, numerical, Error, Result};
use crate::gr::GrParams;
use crate::special::{gamma_ratios_lg, ln_gamma_unchecked};

/// Number of log-spaced points used to bracket critical points.
const SCAN_POINTS: usize = 3000;

/// Parameters (α, β, δ, θ) of a GOLLGR law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct GollgrParams {
    alpha: f64,
    beta: f64,
    gr: GrParams,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    alpha: f64,
    beta: f64,
    delta: f64,
    theta: f64,
}

impl TryFrom<RawParams> for GollgrParams {
    type Error = Error;
    fn try_from(r: RawParams) -> Result<Self> {
        GollgrParams::new(r.alpha, r.beta, r.delta, r.theta)
    }
}

impl From<GollgrParams> for RawParams {
    fn from(p: GollgrParams) -> Self {
        RawParams {
            alpha: p.alpha,
            beta: p.beta,
            delta: p.gr.delta(),
            theta: p.gr.theta(),
        }
    }
}

/// Behaviour of the density as x → 0⁺.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum ZeroLimit {
    Zero,
    Finite(f64),
    Infinite,
}

impl ZeroLimit {
    pub fn value(&self) -> f64 {
        match *self {
            ZeroLimit::Zero => 0.0,
            ZeroLimit::Finite(v) => v,
            ZeroLimit::Infinite => f64::INFINITY,
        }
    }

    fn is_zero(&self) -> bool {
        matches!(self, ZeroLimit::Zero)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShapeKind {
    Decreasing,
    DecreasingIncreasingDecreasing,
    Unimodal,
    Bimodal,
}

/// Shape of the density together with the interior critical points found.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapeClass {
    pub kind: ShapeKind,
    pub critical_points: Vec<f64>,
}

/// Logs of density, cdf and survival at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct LogParts {
    pub ln_pdf: f64,
    pub ln_cdf: f64,
    pub ln_sf: f64,
}

#[inline]
fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

#[inline]
fn log_add_exp(a: f64, b: f64) -> f64 {
    let m = a.max(b);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + (-(a - b).abs()).exp().ln_1p()
}

/// ln(1 - e^{a}) for a ≤ 0.
#[inline]
fn log1m_exp(a: f64) -> f64 {
    if a > -LN_2 {
        (-a.exp_m1()).ln()
    } else {
        (-a.exp()).ln_1p()
    }
}

/// Constants of one parameter vector hoisted out of per-point evaluation.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Kernel {
    alpha: f64,
    beta: f64,
    ab: f64,
    theta: f64,
    shape: f64,
    lg_shape: f64,
    ln_g_norm: f64,
    ln_ab: f64,
    odd_power: f64,
}

/// Log quantities of the parent at one point.
#[derive(Debug, Clone, Copy)]
struct Parent {
    ln_g: f64,
    ln_big_g: f64,
    ln_one_minus_gb: f64,
}

impl Kernel {
    pub(crate) fn new(p: &GollgrParams) -> Self {
        let shape = p.gr.delta() + 1.0;
        let lg_shape = ln_gamma_unchecked(shape);
        Kernel {
            alpha: p.alpha,
            beta: p.beta,
            ab: p.alpha * p.beta,
            theta: p.gr.theta(),
            shape,
            lg_shape,
            ln_g_norm: LN_2 + shape * p.gr.theta().ln() - lg_shape,
            ln_ab: (p.alpha * p.beta).ln(),
            odd_power: 2.0 * p.gr.delta() + 1.0,
        }
    }

    /// Requires x > 0.
    #[inline]
    fn parent(&self, x: f64) -> Parent {
        let z = self.theta * x * x;
        let r = gamma_ratios_lg(self.shape, z, self.lg_shape);
        let (ln_big_g, ln_one_minus_gb) = if r.upper < 0.5 {
            // ln G = ln1p(-Q); 1 - G^β = -expm1(-y) with y = -β ln G
            let ln_big_g = (-r.upper).ln_1p();
            let ratio = if r.upper > 0.0 { -ln_big_g / r.upper } else { 1.0 };
            let ln_y = self.beta.ln() + r.ln_upper + ratio.ln();
            let ln_one_minus_gb = if ln_y < -600.0 { ln_y } else { log1m_exp(-ln_y.exp()) };
            (ln_big_g, ln_one_minus_gb)
        } else {
            let ln_big_g = if r.ln_lower == f64::NEG_INFINITY && z > 0.0 {
                // leading term of the lower series when G underflows
                self.shape * z.ln() - ln_gamma_unchecked(self.shape + 1.0)
            } else {
                r.ln_lower
            };
            (ln_big_g, log1m_exp(self.beta * ln_big_g))
        };
        Parent {
            ln_g: self.ln_g_norm + self.odd_power * x.ln() - z,
            ln_big_g,
            ln_one_minus_gb,
        }
    }

    #[inline]
    pub(crate) fn parts(&self, x: f64) -> LogParts {
        let par = self.parent(x);
        let ln_a = self.ab * par.ln_big_g;
        let ln_b = self.alpha * par.ln_one_minus_gb;
        let ln_pdf = self.ln_ab + par.ln_g + (self.ab - 1.0) * par.ln_big_g + (self.alpha - 1.0) * par.ln_one_minus_gb
            - 2.0 * log_add_exp(ln_a, ln_b);
        LogParts {
            ln_pdf,
            ln_cdf: -softplus(ln_b - ln_a),
            ln_sf: -softplus(ln_a - ln_b),
        }
    }

    #[inline]
    pub(crate) fn ln_pdf(&self, x: f64) -> f64 {
        self.parts(x).ln_pdf
    }

    #[inline]
    pub(crate) fn ln_sf(&self, x: f64) -> f64 {
        let par = self.parent(x);
        -softplus(self.ab * par.ln_big_g - self.alpha * par.ln_one_minus_gb)
    }

    /// d ln f / dx written through the reverse hazard g/G, the odds
    /// T = G^β / (1 - G^β), F and S:
    /// (2δ+1)/x - 2θx + (g/G)[(αβ - 1) - (α - 1)βT - 2αβ(F - T S)].
    fn d_ln_pdf(&self, x: f64) -> f64 {
        let par = self.parent(x);
        let ln_a = self.ab * par.ln_big_g;
        let ln_b = self.alpha * par.ln_one_minus_gb;
        let ln_f = -softplus(ln_b - ln_a);
        let ln_s = -softplus(ln_a - ln_b);
        let ln_rg = par.ln_g - par.ln_big_g;
        let ln_t = self.beta * par.ln_big_g - par.ln_one_minus_gb;
        self.odd_power / x - 2.0 * self.theta * x + (self.ab - 1.0) * ln_rg.exp()
            - (self.alpha - 1.0) * self.beta * (ln_rg + ln_t).exp()
            - 2.0 * self.ab * ((ln_rg + ln_f).exp() - (ln_rg + ln_t + ln_s).exp())
    }
}

impl GollgrParams {
    pub fn new(alpha: f64, beta: f64, delta: f64, theta: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(domain(
                "GollgrParams::new",
                format!("alpha must be finite and > 0, got {alpha}"),
            ));
        }
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(domain(
                "GollgrParams::new",
                format!("beta must be finite and > 0, got {beta}"),
            ));
        }
        let gr = GrParams::new(delta, theta)?;
        Ok(Self { alpha, beta, gr })
    }

    pub fn from_gr(alpha: f64, beta: f64, gr: GrParams) -> Result<Self> {
        Self::new(alpha, beta, gr.delta(), gr.theta())
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn delta(&self) -> f64 {
        self.gr.delta()
    }

    pub fn theta(&self) -> f64 {
        self.gr.theta()
    }

    pub fn gr(&self) -> GrParams {
        self.gr
    }

    /// (α, β, δ, θ)
    pub fn to_array(&self) -> [f64; 4] {
        [self.alpha, self.beta, self.gr.delta(), self.gr.theta()]
    }

    pub(crate) fn kernel(&self) -> Kernel {
        Kernel::new(self)
    }

    /// ln F(x); -∞ for x ≤ 0.
    pub fn ln_cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return f64::NEG_INFINITY;
        }
        self.kernel().parts(x).ln_cdf
    }

    /// ln S(x) = ln(1 - F(x)).
    pub fn ln_sf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        self.kernel().ln_sf(x)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        self.ln_cdf(x).exp()
    }

    pub fn sf(&self, x: f64) -> f64 {
        self.ln_sf(x).exp()
    }

    /// ln f(x). At x = 0 the continuous limit is used.
    pub fn ln_pdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return f64::NEG_INFINITY;
        }
        if x == 0.0 {
            return self.limit_at_zero().value().ln();
        }
        self.kernel().ln_pdf(x)
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.ln_pdf(x).exp()
    }

    /// Hazard f / S; +∞ once the survival underflows.
    pub fn hrf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        if x == 0.0 {
            return self.limit_at_zero().value();
        }
        let p = self.kernel().parts(x);
        if p.ln_sf == f64::NEG_INFINITY {
            return f64::INFINITY;
        }
        (p.ln_pdf - p.ln_sf).exp()
    }

    /// Q(u) = Q_GR([T/(1 + T)]^{1/β}) with T = (u/(1 - u))^{1/α}.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(domain(
                "GollgrParams::quantile",
                format!("probability must lie in (0, 1), got {u}"),
            ));
        }
        self.quantile_ln(u.ln(), (-u).ln_1p())
    }

    /// Quantile from ln u and ln(1 - u).
    pub(crate) fn quantile_ln(&self, ln_u: f64, ln_uc: f64) -> Result<f64> {
        let ln_t = (ln_u - ln_uc) / self.alpha;
        let ln_z = -softplus(-ln_t) / self.beta;
        let ln_zc = log1m_exp(ln_z);
        self.gr.quantile_ln(ln_z, ln_zc)
    }

    /// Maps a uniform variate to a GOLLGR variate through the log-logistic
    /// representation Y = (U/(1 - U))^{1/α}.
    pub fn transform_uniform(&self, u: f64) -> Result<f64> {
        self.quantile(u)
    }

    /// `n` draws from a ChaCha8 stream seeded with `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> Result<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.sample_with(n, &mut rng)
    }

    pub fn sample_with<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Vec<f64>> {
        (0..n).map(|_| self.transform_uniform(rng.sample(Open01))).collect()
    }

    /// T(x) = G^β / (1 - G^β), evaluated in log space; +∞ only when T
    /// itself overflows.
    pub fn odds_transform(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let par = self.kernel().parent(x);
        (self.beta * par.ln_big_g - par.ln_one_minus_gb).exp()
    }

    /// Limit of the density as x → 0⁺. Near zero f(x) ∝ x^{2(δ+1)αβ - 1};
    /// when the exponent vanishes the limit is
    /// αβ · 2θ^{δ+1}/Γ(δ+1) · (θ^{δ+1}/Γ(δ+2))^{αβ-1}.
    pub fn limit_at_zero(&self) -> ZeroLimit {
        let ab = self.alpha * self.beta;
        let shape = self.gr.delta() + 1.0;
        let e = 2.0 * shape * ab - 1.0;
        if e.abs() <= 1e-12 {
            let ln_theta = self.gr.theta().ln();
            let ln_c = ab.ln() + LN_2 + shape * ln_theta - ln_gamma_unchecked(shape)
                + (ab - 1.0) * (shape * ln_theta - ln_gamma_unchecked(shape + 1.0));
            ZeroLimit::Finite(ln_c.exp())
        } else if e > 0.0 {
            ZeroLimit::Zero
        } else {
            ZeroLimit::Infinite
        }
    }

    /// Interior critical points of the density on (0, search_bound].
    /// `None` uses quantile(1 - 1e-8). A monotone density is an error.
    pub fn critical_points(&self, search_bound: Option<f64>) -> Result<Vec<f64>> {
        let pts = self.scan_critical_points(search_bound)?;
        if pts.is_empty() {
            return Err(numerical(
                "critical_points",
                "derivative of the density has no sign change: the density is monotone",
            ));
        }
        Ok(pts)
    }

    fn scan_critical_points(&self, search_bound: Option<f64>) -> Result<Vec<f64>> {
        let hi = match search_bound {
            Some(b) => {
                if !(b > 0.0) || !b.is_finite() {
                    return Err(domain(
                        "critical_points",
                        format!("search bound must be positive, got {b}"),
                    ));
                }
                if self.sf(b) >= 1e-6 {
                    return Err(domain(
                        "critical_points",
                        format!("search bound {b} leaves survival {} above 1e-6", self.sf(b)),
                    ));
                }
                b
            }
            None => self.quantile_ln((-1e-8f64).ln_1p(), 1e-8f64.ln())?,
        };
        let lo = self.quantile(1e-10)?.min(hi * 1e-6);
        let k = self.kernel();
        let (llo, lhi) = (lo.ln(), hi.ln());
        let step = (lhi - llo) / (SCAN_POINTS - 1) as f64;

        let mut out = Vec::new();
        let mut x_prev = lo;
        let mut d_prev = k.d_ln_pdf(lo);
        for i in 1..SCAN_POINTS {
            let x = (llo + step * i as f64).exp();
            let d = k.d_ln_pdf(x);
            if d_prev.is_finite() && d.is_finite() && d_prev != 0.0 && (d_prev > 0.0) != (d > 0.0) {
                let root = bisect(|t| k.d_ln_pdf(t), x_prev, x, d_prev);
                if !self.critical_residual_ok(root) {
                    return Err(numerical(
                        "critical_points",
                        format!("root at x={root} fails the critical-point equation check"),
                    ));
                }
                out.push(root);
            }
            x_prev = x;
            d_prev = d;
        }
        Ok(out)
    }

    /// Relative residual of the critical-point equation in y = G(x):
    /// y''/y'^2 + [(β+1)G^β - (αβ+1)F + (αβ-1)S] / (G(1 - G^β)) = 0.
    pub fn critical_point_residual(&self, x: f64) -> f64 {
        let k = self.kernel();
        let par = k.parent(x);
        let big_g = par.ln_big_g.exp();
        let gb = (self.beta * par.ln_big_g).exp();
        let p = k.parts(x);
        let (f, s) = (p.ln_cdf.exp(), p.ln_sf.exp());
        let g = par.ln_g.exp();
        let (l1, l2) = (k.odd_power / (x * g), 2.0 * k.theta * x / g);
        let ab = k.ab;
        let den = big_g * par.ln_one_minus_gb.exp();
        let terms = [(self.beta + 1.0) * gb, -(ab + 1.0) * f, (ab - 1.0) * s];
        let rhs: f64 = terms.iter().sum::<f64>() / den;
        let scale = l1.abs() + l2.abs() + terms.iter().map(|t| t.abs()).sum::<f64>() / den;
        (l1 - l2 + rhs).abs() / scale
    }

    fn critical_residual_ok(&self, x: f64) -> bool {
        let r = self.critical_point_residual(x);
        // not finite only where g underflows, which the scan never reaches
        // for a genuine root
        !r.is_finite() || r < 1e-6
    }

    /// Classifies the density from its critical points and its limit at 0⁺.
    pub fn classify_shape(&self) -> Result<ShapeClass> {
        let pts = self.scan_critical_points(None)?;
        let lim = self.limit_at_zero();
        let kind = match (pts.len(), lim.is_zero()) {
            (0, false) => ShapeKind::Decreasing,
            (1, true) => ShapeKind::Unimodal,
            (3, true) => ShapeKind::Bimodal,
            (2, false) => ShapeKind::DecreasingIncreasingDecreasing,
            (n, z) => {
                return Err(Error::AmbiguousShape(format!(
                    "{n} critical points with {} limit at zero",
                    if z { "zero" } else { "non-zero" }
                )))
            }
        };
        Ok(ShapeClass {
            kind,
            critical_points: pts,
        })
    }
}

/// Bisection on a bracketing pair until the bracket is at rounding level.
fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, fa: f64) -> f64 {
    let sa = fa > 0.0;
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm > 0.0) == sa {
            a = m;
        } else {
            b = m;
        }
        if b - a <= 1e-15 * b {
            break;
        }
    }
    0.5 * (a + b)
}
