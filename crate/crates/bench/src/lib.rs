//! Shared inputs for the criterion benchmarks.

use asianvol::MarketParams;

/// A strike grid around the spot for smile-style sweeps.
pub fn strike_grid(spot: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| spot * (0.7 + 0.6 * i as f64 / (n - 1) as f64)).collect()
}

pub fn case5() -> MarketParams {
    MarketParams {
        spot: 2.0,
        rate: 0.05,
        dividend: 0.0,
        sigma: 0.5,
        maturity: 1.0,
    }
}
