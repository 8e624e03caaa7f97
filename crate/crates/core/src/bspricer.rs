//! Black-Scholes on a forward, Asian price assembly and implied volatility.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};
use crate::nlo::nlo_variance_atm;
use crate::solver::bracketed_newton;
use crate::volexp::{forward_price, implied_variance, MarketParams, Order};

pub const IMPLIED_VOL_LOWER: f64 = 1e-8;
pub const IMPLIED_VOL_UPPER: f64 = 5.0;
pub const IMPLIED_VOL_TOLERANCE: f64 = 1e-12;
const VEGA_FLOOR: f64 = 1e-16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OptionSide {
    #[default]
    Call,
    Put,
}

/// Standard normal CDF through the complementary error function.
pub fn norm_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z * FRAC_1_SQRT_2)
}

pub fn norm_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VanillaQuote {
    pub forward: f64,
    pub strike: f64,
    pub vol: f64,
    pub maturity: f64,
    pub df: f64,
    pub side: OptionSide,
}

impl VanillaQuote {
    pub fn validate(&self) -> Result<()> {
        if !(self.forward > 0.0 && self.strike > 0.0) {
            return Err(Error::domain("forward and strike must be positive"));
        }
        if !(self.vol >= 0.0) || !(self.maturity > 0.0) {
            return Err(Error::domain("vol must be nonnegative and maturity positive"));
        }
        if !(self.df > 0.0 && self.df <= 1.0) {
            return Err(Error::domain(format!("discount factor {} outside (0, 1]", self.df)));
        }
        Ok(())
    }

    fn intrinsic(&self) -> f64 {
        match self.side {
            OptionSide::Call => self.df * (self.forward - self.strike).max(0.0),
            OptionSide::Put => self.df * (self.strike - self.forward).max(0.0),
        }
    }

    fn upper_bound(&self) -> f64 {
        match self.side {
            OptionSide::Call => self.df * self.forward,
            OptionSide::Put => self.df * self.strike,
        }
    }
}

/// Discounted Black-Scholes price on a forward.
pub fn bs_price(quote: &VanillaQuote) -> f64 {
    let total_vol = quote.vol * quote.maturity.sqrt();
    if total_vol == 0.0 {
        return quote.intrinsic();
    }
    let d1 = ((quote.forward / quote.strike).ln() + 0.5 * total_vol * total_vol) / total_vol;
    let d2 = d1 - total_vol;
    let (f, k, df) = (quote.forward, quote.strike, quote.df);
    match quote.side {
        OptionSide::Call => df * (f * norm_cdf(d1) - k * norm_cdf(d2)),
        OptionSide::Put => df * (k * norm_cdf(-d2) - f * norm_cdf(-d1)),
    }
}

/// Derivative of [`bs_price`] with respect to `vol`.
pub fn bs_vega(quote: &VanillaQuote) -> f64 {
    let sqrt_t = quote.maturity.sqrt();
    let total_vol = quote.vol * sqrt_t;
    if total_vol == 0.0 {
        return 0.0;
    }
    let d1 = ((quote.forward / quote.strike).ln() + 0.5 * total_vol * total_vol) / total_vol;
    quote.df * quote.forward * norm_pdf(d1) * sqrt_t
}

/// Source of the equivalent log-normal volatility.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VolSource {
    Expansion(Order),
    /// Rate-resummed estimate; defined at `K = A_fwd` only.
    Nlo,
}

impl Default for VolSource {
    fn default() -> Self {
        VolSource::Expansion(Order::default())
    }
}

/// Equivalent log-normal volatility for one strike.
pub fn equivalent_vol(strike: f64, params: &MarketParams, source: VolSource) -> Result<f64> {
    let variance = match source {
        VolSource::Expansion(order) => implied_variance(strike, params, order)?.total_sq,
        VolSource::Nlo => nlo_variance_atm(params, strike)?,
    };
    Ok(variance.sqrt())
}

/// Asian option price: Black-Scholes on `A_fwd` with the equivalent
/// log-normal volatility, discounted at `r`.
pub fn asian_price(strike: f64, params: &MarketParams, source: VolSource, side: OptionSide) -> Result<f64> {
    params.validate()?;
    if !(strike > 0.0) {
        return Err(Error::domain(format!("strike must be positive, got {strike}")));
    }
    let vol = equivalent_vol(strike, params, source)?;
    Ok(bs_price(&VanillaQuote {
        forward: forward_price(params),
        strike,
        vol,
        maturity: params.maturity,
        df: params.discount_factor(),
        side,
    }))
}

/// Black-Scholes implied volatility on `[1e-8, 5]`.
pub fn implied_vol(price: f64, forward: f64, strike: f64, maturity: f64, df: f64, side: OptionSide) -> Result<f64> {
    let quote = VanillaQuote {
        forward,
        strike,
        vol: 0.0,
        maturity,
        df,
        side,
    };
    quote.validate()?;
    let (lower, upper) = (quote.intrinsic(), quote.upper_bound());
    if !(price > lower && price < upper) {
        return Err(Error::PriceOutOfBounds { price, lower, upper });
    }
    let root = bracketed_newton(
        |vol| {
            let q = VanillaQuote { vol, ..quote };
            (bs_price(&q) - price, bs_vega(&q))
        },
        IMPLIED_VOL_LOWER,
        IMPLIED_VOL_UPPER,
        IMPLIED_VOL_TOLERANCE,
        VEGA_FLOOR,
    )?;
    Ok(root.x)
}
