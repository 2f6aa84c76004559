//! Closed-form throughput gains under a Gaussian model of the per-state rate.
//!
//! With `R_ψ ~ N(μ, σ²)` i.i.d. across Ψ states, the best-state rate is the
//! maximum of Ψ Gaussians. The average gain is the mean of that maximum over
//! `μ`; the outage gain is the ratio of its ε-quantile to the single-state
//! ε-quantile.

use std::f64::consts::{E, FRAC_1_SQRT_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{erf_inv, erfc, integrate_to_infinity};

/// Euler–Mascheroni constant to 15 significant digits.
pub const EULER_GAMMA: f64 = 0.577215664901533;

/// Gaussian fit `N(mu, var)` of the single-state throughput (bits/s/Hz).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianRateModel {
    pub mu: f64,
    pub var: f64,
}

impl GaussianRateModel {
    pub fn new(mu: f64, var: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::domain(format!("mean {mu} is not finite")));
        }
        if !(var >= 0.0) || !var.is_finite() {
            return Err(Error::domain(format!(
                "variance {var} must be finite and nonnegative"
            )));
        }
        Ok(Self { mu, var })
    }

    pub fn sd(&self) -> f64 {
        self.var.sqrt()
    }

    /// `F⁻¹(q) = μ − √(2σ²)·erf⁻¹(1 − 2q)`.
    pub fn quantile(&self, q: f64) -> Result<f64> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::domain(format!("quantile level {q} outside (0, 1)")));
        }
        Ok(self.mu - (2.0 * self.var).sqrt() * erf_inv(1.0 - 2.0 * q)?)
    }

    /// `ln F(x)`, accurate when `F(x)` is close to 0 or to 1.
    fn ln_cdf(&self, x: f64) -> f64 {
        let z = (x - self.mu) / self.sd();
        if z > 0.0 {
            (-0.5 * erfc(z * FRAC_1_SQRT_2)).ln_1p()
        } else {
            (0.5 * erfc(-z * FRAC_1_SQRT_2)).ln()
        }
    }

    fn require_positive_mean(&self) -> Result<()> {
        if self.mu > 0.0 {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "gain is undefined for a nonpositive mean rate ({})",
                self.mu
            )))
        }
    }
}

fn require_psi(psi: usize, min: usize) -> Result<()> {
    if psi < min {
        Err(Error::domain(format!(
            "number of states must be at least {min}, got {psi}"
        )))
    } else {
        Ok(())
    }
}

/// Average gain as the integral `(1/μ)∫₀^∞ 1 − F(x)^Ψ dx`, lower limit at 0.
///
/// This treats the rate as nonnegative, so it exceeds the Gaussian
/// order-statistic mean over `μ` by `(1/μ)∫_{−∞}^0 F(x)^Ψ dx`, a term of
/// order `Φ(−μ/σ)^Ψ`. [`avg_gain_integral`] includes that term.
pub fn prop1_integral(model: &GaussianRateModel, psi: usize, abs_tol: f64) -> Result<f64> {
    require_psi(psi, 1)?;
    model.require_positive_mean()?;
    if model.var == 0.0 {
        return Ok(1.0);
    }
    let n = psi as f64;
    let upper =
        integrate_to_infinity(|x| -(n * model.ln_cdf(x)).exp_m1(), 0.0, abs_tol * model.mu)?;
    Ok(upper.value / model.mu)
}

/// Average gain `E[max of Ψ i.i.d. N(μ, σ²)] / μ`, evaluated as
/// `(1/μ)(∫₀^∞ 1 − F(x)^Ψ dx − ∫_{−∞}^0 F(x)^Ψ dx)` with adaptive quadrature.
pub fn avg_gain_integral(model: &GaussianRateModel, psi: usize, abs_tol: f64) -> Result<f64> {
    require_psi(psi, 1)?;
    model.require_positive_mean()?;
    if model.var == 0.0 {
        return Ok(1.0);
    }
    let n = psi as f64;
    let tol = 0.5 * abs_tol * model.mu;
    let upper = integrate_to_infinity(|x| -(n * model.ln_cdf(x)).exp_m1(), 0.0, tol)?;
    let lower = integrate_to_infinity(|x| (n * model.ln_cdf(-x)).exp(), 0.0, tol)?;
    Ok((upper.value - lower.value) / model.mu)
}

/// Mean of the maximum of `n` i.i.d. standard normals, `1 ≤ n ≤ 5`.
pub fn gauss_max_mean_exact(n: usize) -> Result<f64> {
    let inv_sqrt_pi = PI.sqrt().recip();
    let inv_pi_3_2 = PI.powf(-1.5);
    match n {
        1 => Ok(0.0),
        2 => Ok(inv_sqrt_pi),
        3 => Ok(1.5 * inv_sqrt_pi),
        4 => Ok(3.0 * inv_pi_3_2 * (-1.0f64 / 3.0).acos()),
        5 => Ok(2.5 * inv_pi_3_2 * (-23.0f64 / 27.0).acos()),
        _ => Err(Error::domain(format!(
            "closed form of the expected Gaussian maximum is available for 1..=5 variables, got {n}"
        ))),
    }
}

/// `1 + (σ/μ)·E_Ψ` for `Ψ ≤ 5`.
pub fn avg_gain_small(model: &GaussianRateModel, psi: usize) -> Result<f64> {
    model.require_positive_mean()?;
    Ok(1.0 + model.sd() / model.mu * gauss_max_mean_exact(psi)?)
}

/// Gumbel (extreme-value) approximation of `E_Ψ`:
/// `√2·((1−β)·erf⁻¹(1 − 2/Ψ) + β·erf⁻¹(1 − 2/(eΨ)))`.
pub fn gauss_max_mean_gumbel(psi: usize) -> Result<f64> {
    require_psi(psi, 2)?;
    let n = psi as f64;
    let location = erf_inv(1.0 - 2.0 / n)?;
    let scale_point = erf_inv(1.0 - 2.0 / (E * n))?;
    Ok(2f64.sqrt() * ((1.0 - EULER_GAMMA) * location + EULER_GAMMA * scale_point))
}

/// Large-Ψ average gain `1 + (σ/μ)·E_Ψ` with the Gumbel approximation of `E_Ψ`.
pub fn avg_gain_large(model: &GaussianRateModel, psi: usize) -> Result<f64> {
    model.require_positive_mean()?;
    Ok(1.0 + model.sd() / model.mu * gauss_max_mean_gumbel(psi)?)
}

/// Leading-order growth `(√(2σ²)/μ)·√(ln Ψ)`.
pub fn avg_gain_asymptotic(model: &GaussianRateModel, psi: usize) -> Result<f64> {
    require_psi(psi, 2)?;
    model.require_positive_mean()?;
    Ok((2.0 * model.var).sqrt() / model.mu * (psi as f64).ln().sqrt())
}

fn outage_denominator(model: &GaussianRateModel, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::domain(format!("outage level {eps} outside (0, 1)")));
    }
    let den = model.quantile(eps)?;
    if den > 0.0 {
        Ok(den)
    } else {
        Err(Error::domain(format!(
            "the {eps}-quantile of N({}, {}) is {den}; outage throughput is undefined",
            model.mu, model.var
        )))
    }
}

/// Outage gain
/// `(μ − √(2σ²)·erf⁻¹(1 − 2ε^{1/Ψ})) / (μ − √(2σ²)·erf⁻¹(1 − 2ε))`.
pub fn outage_gain(model: &GaussianRateModel, psi: usize, eps: f64) -> Result<f64> {
    require_psi(psi, 1)?;
    let den = outage_denominator(model, eps)?;
    let num = model.quantile(eps.powf(1.0 / psi as f64))?;
    Ok(num / den)
}

/// Leading-order growth of the outage gain,
/// `√(2σ²)·√(ln Ψ) / (μ − √(2σ²)·erf⁻¹(1 − 2ε))`.
pub fn outage_gain_asymptotic(model: &GaussianRateModel, psi: usize, eps: f64) -> Result<f64> {
    require_psi(psi, 2)?;
    let den = outage_denominator(model, eps)?;
    Ok((2.0 * model.var).sqrt() * (psi as f64).ln().sqrt() / den)
}
