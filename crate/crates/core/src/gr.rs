//! Generalized Rayleigh (GR) distribution with cdf γ₁(δ+1, θx²).
//!
//! Sub-models: Rayleigh (δ = 0), Maxwell (δ = 1/2), half-normal (δ = -1/2)
//! and scaled chi (δ = n/2 - 1).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::special::{gamma_quantile_ln, gamma_ratios, ln_gamma_unchecked, GammaRatios};

/// Shape `delta > -1` and rate `theta > 0` of a GR law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGr")]
pub struct GrParams {
    delta: f64,
    theta: f64,
}

#[derive(Deserialize)]
struct RawGr {
    delta: f64,
    theta: f64,
}

impl TryFrom<RawGr> for GrParams {
    type Error = crate::Error;
    fn try_from(raw: RawGr) -> Result<Self> {
        GrParams::new(raw.delta, raw.theta)
    }
}

impl GrParams {
    pub fn new(delta: f64, theta: f64) -> Result<Self> {
        if !(delta > -1.0) || !delta.is_finite() {
            return Err(domain(
                "GrParams::new",
                format!("delta must be finite and > -1, got {delta}"),
            ));
        }
        if !(theta > 0.0) || !theta.is_finite() {
            return Err(domain(
                "GrParams::new",
                format!("theta must be finite and > 0, got {theta}"),
            ));
        }
        Ok(Self { delta, theta })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Gamma shape δ + 1 of θX².
    #[inline]
    pub(crate) fn shape(&self) -> f64 {
        self.delta + 1.0
    }

    /// Incomplete gamma ratios at θx²; `x` must be non-negative.
    #[inline]
    pub(crate) fn ratios(&self, x: f64) -> GammaRatios {
        gamma_ratios(self.shape(), self.theta * x * x)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        self.ratios(x).lower
    }

    pub fn sf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 1.0;
        }
        self.ratios(x).upper
    }

    /// log g(x) for x > 0, evaluated directly in log space.
    #[inline]
    pub fn ln_pdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return self.pdf_at_zero().ln();
        }
        std::f64::consts::LN_2 + self.shape() * self.theta.ln() - ln_gamma_unchecked(self.shape())
            + (2.0 * self.delta + 1.0) * x.ln()
            - self.theta * x * x
    }

    pub fn pdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        self.ln_pdf(x).exp()
    }

    /// Continuous extension of the density at the origin.
    pub fn pdf_at_zero(&self) -> f64 {
        let e = 2.0 * self.delta + 1.0;
        if e > 0.0 {
            0.0
        } else if e == 0.0 {
            2.0 * (self.theta / PI).sqrt()
        } else {
            f64::INFINITY
        }
    }

    /// Q_GR(z) = [γ⁻¹(δ+1; z) / θ]^{1/2}.
    pub fn quantile(&self, z: f64) -> Result<f64> {
        if !(z > 0.0 && z < 1.0) {
            return Err(domain(
                "GrParams::quantile",
                format!("probability must lie in (0, 1), got {z}"),
            ));
        }
        self.quantile_pq(z, 1.0 - z)
    }

    /// Quantile from complementary probabilities (z, 1 - z).
    pub(crate) fn quantile_pq(&self, z: f64, zc: f64) -> Result<f64> {
        self.quantile_ln(z.ln(), zc.ln())
    }

    /// Quantile from the logs of complementary probabilities.
    pub(crate) fn quantile_ln(&self, ln_z: f64, ln_zc: f64) -> Result<f64> {
        let g = gamma_quantile_ln(self.shape(), ln_z, ln_zc)?;
        Ok((g / self.theta).sqrt())
    }

    /// E(Z^s) = Γ(s/2 + δ + 1) / (θ^{s/2} Γ(δ + 1)).
    pub fn moment(&self, s: f64) -> Result<f64> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(domain("GrParams::moment", format!("order must be positive, got {s}")));
        }
        Ok(Self::ln_moment(self.delta, self.theta, s).exp())
    }

    pub(crate) fn ln_moment(delta: f64, theta: f64, s: f64) -> f64 {
        ln_gamma_unchecked(0.5 * s + delta + 1.0) - 0.5 * s * theta.ln() - ln_gamma_unchecked(delta + 1.0)
    }
}
