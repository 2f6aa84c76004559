//! Error function family and the Gaussian CDF/quantile built on it.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use crate::error::{Error, Result};

pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Standard normal CDF, accurate in both tails.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z * FRAC_1_SQRT_2)
}

/// Standard normal quantile, `Φ⁻¹(p)` for `p ∈ (0, 1)`.
pub fn normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!("probability {p} outside (0, 1)")));
    }
    // Φ⁻¹(p) = −√2·erf⁻¹(1 − 2p); evaluate on the lower half to keep 1 − 2p exact.
    if p <= 0.5 {
        Ok(-SQRT_2 * erf_inv_tail(p)?)
    } else {
        Ok(SQRT_2 * erf_inv_tail(1.0 - p)?)
    }
}

/// Inverse error function on `(-1, 1)`.
///
/// A rational approximation of the normal quantile supplies a starting
/// point good to about 1e-9, then one Newton step on `erf` (or `erfc` for
/// arguments near ±1) brings it to working precision.
pub fn erf_inv(x: f64) -> Result<f64> {
    if !(x.abs() < 1.0) {
        return Err(Error::domain(format!(
            "erf_inv argument {x} outside (-1, 1)"
        )));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let a = x.abs();
    let y = if a < 0.5 {
        let y0 = -acklam_lower((1.0 - a) * 0.5) * FRAC_1_SQRT_2;
        let r = erf(y0) - a;
        y0 - r * (0.5 * PI.sqrt()) * (y0 * y0).exp()
    } else {
        erf_inv_tail((1.0 - a) * 0.5)?
    };
    Ok(y.copysign(x))
}

/// `erf⁻¹(1 − 2p)` for `p ∈ (0, 1/2]`, refined against `erfc` so the small
/// tail probability keeps full relative precision.
fn erf_inv_tail(p: f64) -> Result<f64> {
    if !(p > 0.0 && p <= 0.5) {
        return Err(Error::domain(format!(
            "tail probability {p} outside (0, 0.5]"
        )));
    }
    if p == 0.5 {
        return Ok(0.0);
    }
    let y0 = -acklam_lower(p) * FRAC_1_SQRT_2;
    // Solve erfc(y) = 2p.
    let r = erfc(y0) - 2.0 * p;
    Ok(y0 + r * (0.5 * PI.sqrt()) * (y0 * y0).exp())
}

/// Acklam's rational approximation to `Φ⁻¹(p)` for `p ∈ (0, 1/2]`.
/// Relative error below 1.15e-9.
fn acklam_lower(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;

    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    }
}
