//! Short-maturity asymptotics for arithmetic-average Asian options in the
//! Black-Scholes model.
//!
//! An Asian option is priced as a vanilla Black-Scholes option written on the
//! forward average price `A_fwd`, using an *equivalent log-normal volatility*
//! `Σ_LN(K, T)`. This crate computes that volatility from:
//!
//! * the large-deviations rate function `J_BS` ([`ratefn`]), which fixes the
//!   leading term `Σ₀²(k) = σ² log²k / (2 J_BS(k))`;
//! * the `O(T)` level, skew and convexity corrections ([`volexp`]);
//! * the rate-resummed at-the-money volatility ([`nlo`]).
//!
//! Prices come out of [`bspricer`]. [`mcoracle`] is an independent Monte
//! Carlo pricer used for validation, [`laplace`] the leading-order Laplace
//! method, and [`benchmark`] the reference cases with their harness.

// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod benchmark;
pub mod bspricer;
pub mod error;
pub mod laplace;
pub mod mcoracle;
pub mod nlo;
pub mod ratefn;
pub mod rational;
mod solver;
pub mod volexp;

pub use bspricer::{asian_price, bs_price, implied_vol, norm_cdf, OptionSide, VanillaQuote, VolSource};
pub use error::{Error, Result};
pub use mcoracle::{mc_asian_price, McConfig, McResult};
pub use nlo::{nlo_variance_atm, sigma_ln_rho_atm, v_of_rho};
pub use ratefn::{rate_function, rate_function_series, solve_beta, solve_xi, Branch, RateEval};
pub use volexp::{
    forward_price, implied_variance, log_moneyness, MarketParams, Order, ReducedParams, SubleadingCoeffs, VolExpansion,
};
