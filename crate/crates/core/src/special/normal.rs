//! Standard normal distribution function and its inverse.
//!
//! Φ is expressed through the incomplete gamma ratio with shape 1/2
//! (erfc(z) = Γ₁(1/2, z²)), so it inherits that routine's tail accuracy.

use crate::error::{domain, Result};
use crate::special::gamma::gamma_ratios;

const SQRT_2PI: f64 = 2.506_628_274_631_000_7;

/// Φ(x).
pub fn std_normal_cdf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let r = gamma_ratios(0.5, 0.5 * x * x);
    if x < 0.0 {
        0.5 * r.upper
    } else {
        0.5 + 0.5 * r.lower
    }
}

/// 1 − Φ(x), accurate for large positive x.
pub fn std_normal_sf(x: f64) -> f64 {
    std_normal_cdf(-x)
}

/// Acklam's rational approximation (relative error ≈ 1e-9); used as a seed.
pub(crate) fn acklam_quantile(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.024_25;

    let tail = |q: f64| {
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    if p < P_LOW {
        tail((-2.0 * p.ln()).sqrt())
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -tail((-2.0 * (1.0 - p).ln()).sqrt())
    }
}

/// Lower-half inverse (u < 0.5), refined by Halley steps on Φ.
fn lower_quantile(u: f64) -> f64 {
    let mut x = acklam_quantile(u);
    for _ in 0..6 {
        let e = std_normal_cdf(x) - u;
        let t = e * SQRT_2PI * (0.5 * x * x).exp();
        let step = t / (1.0 + 0.5 * x * t);
        x -= step;
        if step.abs() <= 1e-16 * x.abs() {
            break;
        }
    }
    x
}

/// Φ⁻¹(u) for 0 < u < 1; exactly antisymmetric about u = 1/2.
pub fn std_normal_quantile(u: f64) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(domain(
            "std_normal_quantile",
            format!("probability must lie in (0, 1), got {u}"),
        ));
    }
    if u == 0.5 {
        Ok(0.0)
    } else if u < 0.5 {
        Ok(lower_quantile(u))
    } else {
        Ok(-lower_quantile(1.0 - u))
    }
}
