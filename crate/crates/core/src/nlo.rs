//! Rate-resummed at-the-money volatility and the NLO variance estimate.
//!
//! At `K = A_fwd` the leading volatility with all orders of `ρ = (r − q)T`
//! kept is `σ ρ/(eᵖ − 1) √v(ρ)`, where
//! `v(ρ) = (ρe^{2ρ} − 3/2 e^{2ρ} + 2eᵖ − 1/2)/ρ³`. The NLO estimate adds the
//! `O(σ²T)` level on top of it.

use crate::error::{Error, Result};
use crate::volexp::{forward_price, MarketParams};

/// `|ρ|` must stay below this.
pub const RHO_BOUND: f64 = 5.0;

/// Below this `|ρ|`, `v` is evaluated from its Taylor series.
pub const V_SERIES_SWITCH: f64 = 1e-3;

/// Relative tolerance used to decide that a strike sits at the forward.
pub const ATM_TOLERANCE: f64 = 1e-12;

const LEVEL_VOL: f64 = -61.0 / 9450.0;

/// Accumulated drift together with the volatility it is paired with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoParams {
    pub rho: f64,
    pub sigma: f64,
    pub maturity: f64,
}

impl RhoParams {
    pub fn from_market(params: &MarketParams) -> Result<Self> {
        let rp = RhoParams {
            rho: params.rho(),
            sigma: params.sigma,
            maturity: params.maturity,
        };
        check_rho(rp.rho)?;
        Ok(rp)
    }
}

fn check_rho(rho: f64) -> Result<()> {
    if rho.is_finite() && rho.abs() < RHO_BOUND {
        Ok(())
    } else {
        Err(Error::domain(format!("|rho| must be below {RHO_BOUND}, got {rho}")))
    }
}

/// `(eˣ − 1 − x − x²/2) / x³`, accurate for all `x`.
fn exp_remainder3(x: f64) -> f64 {
    if x.abs() < 1.0 {
        // Σ_{n≥0} xⁿ/(n+3)!; 25 terms reach full precision for |x| < 1.
        let mut term = 1.0 / 6.0;
        let mut sum = term;
        for n in 1..25 {
            term *= x / (n as f64 + 3.0);
            sum += term;
        }
        sum
    } else {
        (x.exp_m1() - x - 0.5 * x * x) / (x * x * x)
    }
}

/// `v(ρ)` from its closed form (or the Taylor series near zero).
pub fn v_of_rho(rho: f64) -> Result<f64> {
    check_rho(rho)?;
    if rho.abs() < V_SERIES_SWITCH {
        return Ok(1.0 / 3.0 + rho * (5.0 / 12.0 + rho * (17.0 / 60.0 + rho * (49.0 / 360.0 + rho * (43.0 / 840.0)))));
    }
    // Expanding e^{2ρ} and eᵖ to second order cancels the constant, linear
    // and quadratic parts of the numerator exactly:
    // numerator = 2ρ³ + (ρ − 3/2) R₃(2ρ) + 2 R₃(ρ), with R₃(x) = x³ r₃(x).
    Ok(2.0 + 8.0 * (rho - 1.5) * exp_remainder3(2.0 * rho) + 2.0 * exp_remainder3(rho))
}

/// `ρ / (eᵖ − 1)`.
fn discount_ratio(rho: f64) -> f64 {
    if rho.abs() < 1e-6 {
        1.0 - rho / 2.0 + rho * rho / 12.0
    } else {
        rho / rho.exp_m1()
    }
}

/// Resummed ATM volatility `σ ρ/(eᵖ − 1) √v(ρ)`.
pub fn sigma_ln_rho_atm(sigma: f64, rho: f64) -> Result<f64> {
    if !(sigma > 0.0) {
        return Err(Error::domain(format!("sigma must be positive, got {sigma}")));
    }
    let v = v_of_rho(rho)?;
    if !(v > 0.0) {
        return Err(Error::domain(format!("v(rho) = {v} is not positive")));
    }
    Ok(sigma * discount_ratio(rho) * v.sqrt())
}

/// NLO implied variance at `K = A_fwd`:
/// `Σ²_{LN,ρ} − σ² (61/9450) σ²T`.
///
/// Only the forward strike is supported; any other strike returns
/// [`Error::UnsupportedStrike`].
pub fn nlo_variance_atm(params: &MarketParams, strike: f64) -> Result<f64> {
    params.validate()?;
    let forward = forward_price(params);
    if (strike - forward).abs() > ATM_TOLERANCE * forward {
        return Err(Error::UnsupportedStrike { strike, forward });
    }
    let rp = RhoParams::from_market(params)?;
    let s2 = rp.sigma * rp.sigma;
    let resummed = sigma_ln_rho_atm(rp.sigma, rp.rho)?;
    let total = resummed * resummed + s2 * LEVEL_VOL * s2 * rp.maturity;
    if !(total > 0.0) {
        return Err(Error::domain(format!("NLO variance {total:e} is not positive")));
    }
    Ok(total)
}
