//! Equivalent log-normal implied variance of an arithmetic Asian option.
//!
//! The variance is assembled as a leading term plus `O(T)` corrections in
//! the log-moneyness `x = log(K / A_fwd)`:
//!
//! ```text
//! Σ² = σ² x²/(2 J_BS(eˣ))
//!    + σ² (−61/9450 σ²T + 1/12 ρ)                 level
//!    + σ² (−34/23625 σ²T) x                        skew
//!    + σ² (12073/16632000 σ²T − 5/2016 ρ) x²       convexity
//! ```
//!
//! with `ρ = (r − q)T`. The same numbers follow from the reduced problem
//! (`τ = σ²T/4`, `μ = 2(r−q)/σ² − 1`) through the expansion coefficients
//! `c₁..c₄`; both routes are exposed and must agree.

use crate::error::{Error, Result};
use crate::ratefn::{rate_function, SERIES_SWITCH};
use crate::rational::{q, to_f64, Affine, Q};

/// Below this `|(r − q)T|` the forward uses its Taylor series.
const FORWARD_SERIES_SWITCH: f64 = 1e-6;

/// Black-Scholes inputs for one pricing problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarketParams {
    pub spot: f64,
    pub rate: f64,
    pub dividend: f64,
    pub sigma: f64,
    pub maturity: f64,
}

impl MarketParams {
    pub fn new(spot: f64, rate: f64, dividend: f64, sigma: f64, maturity: f64) -> Result<Self> {
        let p = MarketParams {
            spot,
            rate,
            dividend,
            sigma,
            maturity,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [("spot", self.spot), ("sigma", self.sigma), ("maturity", self.maturity)];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::domain(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if !self.rate.is_finite() || !self.dividend.is_finite() {
            return Err(Error::domain("rate and dividend must be finite"));
        }
        Ok(())
    }

    /// Net drift `r − q`.
    pub fn drift(&self) -> f64 {
        self.rate - self.dividend
    }

    /// Accumulated drift `ρ = (r − q)T`.
    pub fn rho(&self) -> f64 {
        self.drift() * self.maturity
    }

    pub fn discount_factor(&self) -> f64 {
        (-self.rate * self.maturity).exp()
    }

    pub fn reduced(&self, strike: f64) -> ReducedParams {
        ReducedParams {
            tau: self.sigma * self.sigma * self.maturity / 4.0,
            mu: 2.0 * self.drift() / (self.sigma * self.sigma) - 1.0,
            k: strike / self.spot,
        }
    }
}

/// Standardized parameters of the canonical problem: the time-average of
/// `exp(2(W_t + μt))` over `[0, τ]` against strike ratio `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedParams {
    pub tau: f64,
    pub mu: f64,
    pub k: f64,
}

impl ReducedParams {
    /// Maturity and net drift recovered at a given volatility.
    pub fn to_physical(&self, sigma: f64) -> (f64, f64) {
        let s2 = sigma * sigma;
        (4.0 * self.tau / s2, 0.5 * (self.mu + 1.0) * s2)
    }
}

/// How many correction groups enter the implied variance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default)]
pub enum Order {
    /// `Σ₀²(K/S₀)` only.
    Leading,
    /// Adds the at-the-money `O(T)` level.
    AtmCorrection,
    /// Adds the `O(Tx)` skew.
    #[default]
    Linear,
    /// Adds the `O(Tx²)` convexity.
    Quadratic,
}

impl Order {
    pub const ALL: [Order; 4] = [Order::Leading, Order::AtmCorrection, Order::Linear, Order::Quadratic];
}

/// Pieces of an assembled implied variance. All terms are in variance units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolExpansion {
    pub order: Order,
    /// Log-moneyness `log(K / A_fwd)`.
    pub x: f64,
    /// Leading variance. For [`Order::Leading`] this is `Σ₀²(K/S₀)`; for
    /// every higher order it is evaluated at `eˣ = K/A_fwd`.
    pub sigma0_sq: f64,
    pub level: f64,
    pub skew: f64,
    pub convexity: f64,
    pub total_sq: f64,
}

impl VolExpansion {
    pub fn vol(&self) -> f64 {
        self.total_sq.sqrt()
    }
}

/// Forward of the time average, `S₀ (e^{(r−q)T} − 1)/((r−q)T)`.
pub fn forward_price(params: &MarketParams) -> f64 {
    params.spot * growth_factor(params.rho())
}

/// `(eᵖ − 1)/ρ`, with its series near zero.
pub(crate) fn growth_factor(rho: f64) -> f64 {
    if rho.abs() < FORWARD_SERIES_SWITCH {
        1.0 + rho / 2.0 * (1.0 + rho / 3.0 * (1.0 + rho / 4.0))
    } else {
        rho.exp_m1() / rho
    }
}

pub fn log_moneyness(strike: f64, forward: f64) -> Result<f64> {
    if !(strike > 0.0 && forward > 0.0) {
        return Err(Error::domain(format!(
            "strike {strike} and forward {forward} must be positive"
        )));
    }
    Ok((strike / forward).ln())
}

/// Leading variance `σ² log²k / (2 J_BS(k))`.
pub fn sigma0_sq(k_eff: f64, sigma: f64) -> Result<f64> {
    if !(k_eff > 0.0) || !k_eff.is_finite() {
        return Err(Error::domain(format!("strike ratio must be positive, got {k_eff}")));
    }
    let l = k_eff.ln();
    let s2 = sigma * sigma;
    if l.abs() < SERIES_SWITCH {
        let ratio = 1.0 + l * (1.0 / 5.0 + l * (-1.0 / 84.0 + l * (-17.0 / 10500.0)));
        return Ok(s2 / 3.0 * ratio);
    }
    let j = rate_function(k_eff)?.value;
    Ok(s2 * l * l / (2.0 * j))
}

/// The coefficients `c₁..c₄` of the expansion, exactly.
pub fn c_coeffs_exact() -> [Affine; 4] {
    [
        Affine::new(q(3, 4), q(-4, 5)),
        Affine::new(q(-3, 80), q(57, 1400)),
        Affine::new(q(1, 350), q(-1, 875)),
        Affine::new(q(11, 22400), q(3281, 6_160_000)),
    ]
}

pub fn c_coeffs(mu: f64) -> [f64; 4] {
    c_coeffs_exact().map(|c| c.eval(mu))
}

/// Reduced-variance `O(τ)` level, skew and convexity as exact affine
/// functions of `μ + 1`, assembled from `c₁..c₄`.
pub fn subleading_exact() -> [Affine; 3] {
    let [c1, c2, c3, c4] = c_coeffs_exact();
    let m = Affine::new(q(1, 1), q(0, 1));
    let one = Affine::constant(q(1, 1));

    let level = one
        .scale(q(1051, 1))
        .plus(c1.scale(q(1680, 1)))
        .plus(c2.scale(q(4200, 1)))
        .plus(m.scale(q(-315, 1)))
        .scale(q(4, 4725));
    let skew = one
        .scale(q(-91, 1))
        .plus(c1.scale(q(170, 1)))
        .plus(c2.scale(q(4200, 1)))
        .plus(c3.scale(q(10500, 1)))
        .scale(q(8, 23625));
    let convexity = one
        .scale(q(-250_193, 1))
        .plus(c1.scale(q(-517_440, 1)))
        .plus(c2.scale(q(1_047_200, 1)))
        .plus(c3.scale(q(25_872_000, 1)))
        .plus(c4.scale(q(64_680_000, 1)))
        .plus(m.scale(q(-39270, 1)))
        .scale(q(1, 18_191_250));
    [level, skew, convexity]
}

/// Coefficients of the reduced implied variance at one drift index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubleadingCoeffs {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub level: f64,
    pub skew: f64,
    pub convexity: f64,
}

pub fn reduced_subleading_coeffs(mu: f64) -> SubleadingCoeffs {
    let [c1, c2, c3, c4] = c_coeffs(mu);
    let [level, skew, convexity] = subleading_exact().map(|a| a.eval(mu));
    SubleadingCoeffs {
        c1,
        c2,
        c3,
        c4,
        level,
        skew,
        convexity,
    }
}

/// `(b₁, b₂)` or, when `shifted`, `(b̃₁, b̃₂)` as exact affine functions of
/// `μ + 1`.
pub fn b_coeffs_exact(shifted: bool) -> (Affine, Affine) {
    if shifted {
        (Affine::constant(q(0, 1)), Affine::new(q(-3, 8), q(61, 1050)))
    } else {
        (Affine::new(q(-3, 2), q(0, 1)), Affine::new(q(3, 40), q(61, 1050)))
    }
}

pub fn b_coeffs(mu: f64, shifted: bool) -> (f64, f64) {
    let (b1, b2) = b_coeffs_exact(shifted);
    (b1.eval(mu), b2.eval(mu))
}

/// The reduced level recovered from the shifted `b̃` coefficients,
/// `−(16/45)(2b̃₁ + 5b̃₂)`.
pub fn level_from_b_exact() -> Affine {
    let (b1, b2) = b_coeffs_exact(true);
    b1.scale(q(2, 1)).plus(b2.scale(q(5, 1))).scale(q(-16, 45))
}

// Physical-parameter coefficients, multiplying σ² · (σ²T) or σ² · ρ.
const LEVEL_VOL: Q = q(-61, 9450);
const LEVEL_RATE: Q = q(1, 12);
const SKEW_VOL: Q = q(-34, 23625);
const CONVEXITY_VOL: Q = q(12073, 16_632_000);
const CONVEXITY_RATE: Q = q(-5, 2016);

/// Physical coefficients as `(vol, rate)` pairs for the level, skew and
/// convexity groups: each group contributes `σ²(vol·σ²T + rate·ρ)·xⁿ`.
pub fn physical_coeffs_exact() -> [(Q, Q); 3] {
    [
        (LEVEL_VOL, LEVEL_RATE),
        (SKEW_VOL, q(0, 1)),
        (CONVEXITY_VOL, CONVEXITY_RATE),
    ]
}

fn leading_for(order: Order, strike: f64, params: &MarketParams, x: f64) -> Result<f64> {
    match order {
        Order::Leading => sigma0_sq(strike / params.spot, params.sigma),
        _ => sigma0_sq(x.exp(), params.sigma),
    }
}

fn finish(order: Order, x: f64, sigma0_sq: f64, level: f64, skew: f64, convexity: f64) -> Result<VolExpansion> {
    let total_sq = sigma0_sq + level + skew + convexity;
    if !(total_sq > 0.0) {
        return Err(Error::domain(format!(
            "implied variance {total_sq:e} is not positive; strike outside the expansion's validity"
        )));
    }
    Ok(VolExpansion {
        order,
        x,
        sigma0_sq,
        level,
        skew,
        convexity,
        total_sq,
    })
}

/// Implied variance from the physical-parameter formula.
pub fn implied_variance(strike: f64, params: &MarketParams, order: Order) -> Result<VolExpansion> {
    params.validate()?;
    let x = log_moneyness(strike, forward_price(params))?;
    let leading = leading_for(order, strike, params, x)?;
    let s2 = params.sigma * params.sigma;
    let vol_t = s2 * params.maturity;
    let rho = params.rho();
    let group = |(v, r): (Q, Q)| s2 * (to_f64(v) * vol_t + to_f64(r) * rho);
    let [lvl, skw, cvx] = physical_coeffs_exact();
    let level = if order >= Order::AtmCorrection { group(lvl) } else { 0.0 };
    let skew = if order >= Order::Linear { group(skw) * x } else { 0.0 };
    let convexity = if order >= Order::Quadratic {
        group(cvx) * x * x
    } else {
        0.0
    };
    finish(order, x, leading, level, skew, convexity)
}

/// Implied variance from the reduced problem rescaled by `σ²/4`, with the
/// corrections built from `c₁..c₄`. Numerically equivalent to
/// [`implied_variance`].
pub fn implied_variance_reduced(strike: f64, params: &MarketParams, order: Order) -> Result<VolExpansion> {
    params.validate()?;
    let x = log_moneyness(strike, forward_price(params))?;
    let red = params.reduced(strike);
    let scale = params.sigma * params.sigma / 4.0;
    // Reduced leading variance is x²/(2 J(eˣ)) with J = J_BS/4, i.e. the
    // unit-vol leading variance times 4.
    let leading = scale * 4.0 * leading_for(order, strike, &MarketParams { sigma: 1.0, ..*params }, x)?;
    let c = reduced_subleading_coeffs(red.mu);
    let level = if order >= Order::AtmCorrection {
        scale * c.level * red.tau
    } else {
        0.0
    };
    let skew = if order >= Order::Linear {
        scale * c.skew * red.tau * x
    } else {
        0.0
    };
    let convexity = if order >= Order::Quadratic {
        scale * c.convexity * red.tau * x * x
    } else {
        0.0
    };
    finish(order, x, leading, level, skew, convexity)
}
