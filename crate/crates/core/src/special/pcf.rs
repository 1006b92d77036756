//! Parabolic cylinder function D_p(y) for negative order, from the integral
//!
//! D_p(y) = e^{-y²/4} / Γ(-p) ∫₀^∞ exp{-(w y + w²/2)} w^{-(p+1)} dw.
//!
//! With ν = -p the integrand is w^{ν-1} e^{-wy-w²/2}. For ν ≥ 1 the
//! integral is taken around the integrand's mode in log-scaled form so very
//! large orders do not overflow. For 0 < ν < 1 the endpoint singularity is
//! removed by subtracting the leading term on [0, 1].

use crate::error::{domain, numerical, Result};
use crate::special::gamma::ln_gamma_unchecked;
use crate::special::quad::integrate;
use crate::special::Accuracy;

/// Integrates a unimodal non-negative integrand over [lower, ∞) by marching
/// outwards from `mode` in chunks, stopping once a chunk contributes less
/// than `rel_tol` of the running integral.
fn march<F: Fn(f64) -> f64>(f: &F, lower: f64, mode: f64, width: f64, acc: &Accuracy) -> Result<f64> {
    let chunk_tol = acc.rel_tol * 1e-2;
    let mut total = 0.0;
    let mut chunks = 0usize;

    let mut step = width;
    let mut a = mode.max(lower);
    loop {
        let b = a + step;
        let r = integrate(f, a, b, 0.0, acc.rel_tol, acc.max_iter)?;
        total += r.value;
        chunks += 1;
        if r.value.abs() <= chunk_tol * total.abs() && chunks >= 2 {
            break;
        }
        if chunks > 400 {
            return Err(numerical(
                "parabolic_cylinder_d",
                format!("right tail did not decay after {chunks} chunks (integral so far {total:e})"),
            ));
        }
        a = b;
        step *= 1.5;
    }

    let mut step = width;
    let mut b = mode.max(lower);
    while b > lower {
        let a = (b - step).max(lower);
        let r = integrate(f, a, b, 0.0, acc.rel_tol, acc.max_iter)?;
        total += r.value;
        chunks += 1;
        if r.value.abs() <= chunk_tol * total.abs() && a > lower {
            break;
        }
        if chunks > 800 {
            return Err(numerical(
                "parabolic_cylinder_d",
                format!("left side did not converge after {chunks} chunks"),
            ));
        }
        b = a;
        step *= 1.5;
    }
    Ok(total)
}

fn check_order(order: f64, y: f64) -> Result<f64> {
    if !(order < 0.0) || !order.is_finite() {
        return Err(domain(
            "parabolic_cylinder_d",
            format!("only negative finite orders are supported, got {order}"),
        ));
    }
    if !y.is_finite() {
        return Err(domain(
            "parabolic_cylinder_d",
            format!("argument must be finite, got {y}"),
        ));
    }
    Ok(-order)
}

/// ln D_p(y) for p ≤ -1 (D is strictly positive there).
pub(crate) fn ln_pcf_large_order(nu: f64, y: f64, acc: &Accuracy) -> Result<f64> {
    let mode = 0.5 * (-y + (y * y + 4.0 * (nu - 1.0)).sqrt());
    let mode = mode.max(0.0);
    let log_integrand = |w: f64| {
        let lw = if nu == 1.0 { 0.0 } else { (nu - 1.0) * w.ln() };
        lw - w * y - 0.5 * w * w
    };
    let peak = if mode > 0.0 {
        log_integrand(mode)
    } else {
        log_integrand(0.0).max(0.0)
    };
    let curvature = if mode > 0.0 {
        (nu - 1.0) / (mode * mode) + 1.0
    } else {
        1.0
    };
    let width = 2.0 / curvature.sqrt();
    let f = |w: f64| {
        if w <= 0.0 {
            if nu == 1.0 {
                (-peak).exp()
            } else {
                0.0
            }
        } else {
            (log_integrand(w) - peak).exp()
        }
    };
    let integral = march(&f, 0.0, mode, width, acc)?;
    Ok(-0.25 * y * y - ln_gamma_unchecked(nu) + peak + integral.ln())
}

/// D_p(y) for order p < 0, with explicit accuracy settings.
pub fn parabolic_cylinder_d_with(order: f64, y: f64, acc: &Accuracy) -> Result<f64> {
    let nu = check_order(order, y)?;
    if nu >= 1.0 {
        return Ok(ln_pcf_large_order(nu, y, acc)?.exp());
    }
    // 0 < ν < 1: D = e^{-y²/4} [ 1/Γ(ν+1) + (I₁ + I₂)/Γ(ν) ] with
    // I₁ = ∫₀¹ w^{ν-1}(h(w) - 1) dw and I₂ = ∫₁^∞ w^{ν-1} h(w) dw.
    let h_minus_one = |w: f64| {
        if w <= 0.0 {
            0.0
        } else {
            w.powf(nu - 1.0) * (-(w * y + 0.5 * w * w)).exp_m1()
        }
    };
    let i1 = integrate(h_minus_one, 0.0, 1.0, 0.0, acc.rel_tol, acc.max_iter)?;
    let tail = |w: f64| w.powf(nu - 1.0) * (-(w * y + 0.5 * w * w)).exp();
    let mode = (-y).max(1.0);
    let i2 = march(&tail, 1.0, mode, 2.0, acc)?;
    let inv_gamma = (-ln_gamma_unchecked(nu)).exp();
    let inv_gamma1 = (-ln_gamma_unchecked(nu + 1.0)).exp();
    let value = (-0.25 * y * y).exp() * (inv_gamma1 + (i1.value + i2) * inv_gamma);
    if !value.is_finite() {
        return Err(numerical(
            "parabolic_cylinder_d",
            format!("non-finite result for order {order}, y={y}"),
        ));
    }
    Ok(value)
}

/// D_p(y) for order p < 0 with the default accuracy.
pub fn parabolic_cylinder_d(order: f64, y: f64) -> Result<f64> {
    parabolic_cylinder_d_with(order, y, &Accuracy::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::normal::std_normal_sf;

    #[test]
    fn order_minus_one_closed_form() {
        // D_{-1}(y) = e^{y²/4} √(2π) (1 - Φ(y))
        for &y in &[-2.0, -0.7, 0.0, 0.4, 3.0] {
            let d = parabolic_cylinder_d(-1.0, y).unwrap();
            let exact = (0.25 * y * y).exp() * (2.0 * std::f64::consts::PI).sqrt() * std_normal_sf(y);
            assert!(((d - exact) / exact).abs() < 1e-10, "y={y}: {d} vs {exact}");
        }
    }

    #[test]
    fn zero_order_limit() {
        let d = parabolic_cylinder_d(-1e-8, 1.0).unwrap();
        assert!((d - (-0.25f64).exp()).abs() < 1e-6);
    }

    #[test]
    fn rejects_nonnegative_order() {
        assert!(parabolic_cylinder_d(0.0, 1.0).is_err());
        assert!(parabolic_cylinder_d(0.5, 1.0).is_err());
    }
}
