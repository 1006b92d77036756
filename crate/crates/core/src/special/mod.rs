//! Special functions used throughout the crate.
//!
//! Probabilities are returned unclamped. Callers that take logarithms of
//! them are responsible for clamping into `[1e-300, 1 - 1e-16]`.

mod gamma;
mod normal;
mod pcf;
pub mod quad;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

pub use gamma::{
    gamma_quantile, gamma_quantile_upper, incomplete_gamma, ln_gamma, reg_lower_gamma, reg_upper_gamma, GammaRatios,
};
pub use normal::{std_normal_cdf, std_normal_quantile, std_normal_sf};
pub use pcf::{parabolic_cylinder_d, parabolic_cylinder_d_with};

pub(crate) use gamma::{gamma_quantile_ln, gamma_ratios, gamma_ratios_lg, ln_gamma_unchecked};
pub(crate) use pcf::ln_pcf_large_order;

/// Tolerance and iteration budget for iterative evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Accuracy {
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl Accuracy {
    pub fn new(rel_tol: f64, max_iter: usize) -> Result<Self> {
        if !(rel_tol > 0.0) {
            return Err(domain(
                "Accuracy::new",
                format!("rel_tol must be positive, got {rel_tol}"),
            ));
        }
        if max_iter == 0 {
            return Err(domain("Accuracy::new", "max_iter must be at least 1"));
        }
        Ok(Self { rel_tol, max_iter })
    }
}

impl Default for Accuracy {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            max_iter: 2_000,
        }
    }
}
