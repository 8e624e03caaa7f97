//! Monte Carlo pricer for arithmetic-average Asian options under geometric
//! Brownian motion.
//!
//! Each path (or antithetic pair) draws its normals from its own ChaCha8
//! stream keyed by `(seed, index)`, so a path is a pure function of its
//! index. Per-sample payoffs are stored in index order and reduced by
//! pairwise summation, which makes the result independent of how the work
//! was split across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::bspricer::OptionSide;
use crate::error::{Error, Result};
use crate::volexp::MarketParams;

/// Default cap on `paths × steps`.
pub const DEFAULT_BUDGET: u64 = 4_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub paths: usize,
    pub steps: usize,
    pub seed: u64,
    /// Pair each driver with its sign flip. With antithetics on, `paths`
    /// counts both members, so `⌈paths/2⌉` pairs are simulated.
    pub antithetic: bool,
    /// Samples per parallel work item. Does not affect the result.
    pub chunk_size: usize,
    pub budget: u64,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            paths: 100_000,
            steps: 252,
            seed: 42,
            antithetic: true,
            chunk_size: 4096,
            budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McResult {
    pub price: f64,
    pub std_error: f64,
    /// Number of independent samples behind `std_error` (pairs when
    /// antithetic).
    pub n_effective: usize,
    /// Sample mean of the discretized average `A_T`.
    pub mean_average: f64,
    pub mean_average_std_error: f64,
}

struct Sample {
    payoff: f64,
    average: f64,
}

/// Sum with `O(log n)` error growth and an order fixed by the slice alone.
fn pairwise_sum(xs: &[f64]) -> f64 {
    const LEAF: usize = 64;
    if xs.len() <= LEAF {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = pairwise_sum(xs) / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let sq: Vec<f64> = xs.iter().map(|x| (x - mean) * (x - mean)).collect();
    let var = pairwise_sum(&sq) / (n - 1.0);
    (mean, (var / n).sqrt())
}

struct PathModel {
    spot: f64,
    drift_step: f64,
    vol_step: f64,
    steps: usize,
    strike: f64,
    side: OptionSide,
}

impl PathModel {
    /// Trapezoid average over the grid for driver signs `sign`.
    fn average(&self, normals: &[f64], sign: f64) -> f64 {
        let mut log_s = 0.0;
        let mut sum = 0.5;
        for (i, z) in normals.iter().enumerate() {
            log_s += self.drift_step + sign * self.vol_step * z;
            let w = if i + 1 == self.steps { 0.5 } else { 1.0 };
            sum += w * log_s.exp();
        }
        self.spot * sum / self.steps as f64
    }

    fn payoff(&self, average: f64) -> f64 {
        match self.side {
            OptionSide::Call => (average - self.strike).max(0.0),
            OptionSide::Put => (self.strike - average).max(0.0),
        }
    }

    fn sample(&self, seed: u64, index: u64, antithetic: bool, normals: &mut [f64]) -> Sample {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        for z in normals.iter_mut() {
            *z = StandardNormal.sample(&mut rng);
        }
        let a = self.average(normals, 1.0);
        if antithetic {
            let b = self.average(normals, -1.0);
            Sample {
                payoff: 0.5 * (self.payoff(a) + self.payoff(b)),
                average: 0.5 * (a + b),
            }
        } else {
            Sample {
                payoff: self.payoff(a),
                average: a,
            }
        }
    }
}

/// Discounted Monte Carlo price of an arithmetic-average Asian option.
pub fn mc_asian_price(strike: f64, params: &MarketParams, side: OptionSide, config: &McConfig) -> Result<McResult> {
    params.validate()?;
    if !(strike > 0.0) {
        return Err(Error::domain(format!("strike must be positive, got {strike}")));
    }
    if config.paths < 1 || config.steps < 2 || config.chunk_size < 1 {
        return Err(Error::domain("need paths >= 1, steps >= 2 and chunk_size >= 1"));
    }
    let requested = config.paths as u128 * config.steps as u128;
    if requested > config.budget as u128 {
        return Err(Error::Budget {
            requested,
            budget: config.budget,
        });
    }

    let dt = params.maturity / config.steps as f64;
    let model = PathModel {
        spot: params.spot,
        drift_step: (params.drift() - 0.5 * params.sigma * params.sigma) * dt,
        vol_step: params.sigma * dt.sqrt(),
        steps: config.steps,
        strike,
        side,
    };
    let n = if config.antithetic {
        config.paths.div_ceil(2)
    } else {
        config.paths
    };

    let mut samples: Vec<Sample> = Vec::with_capacity(n);
    (0..n)
        .into_par_iter()
        .with_min_len(config.chunk_size)
        .map_init(
            || vec![0.0; config.steps],
            |normals, i| model.sample(config.seed, i as u64, config.antithetic, normals),
        )
        .collect_into_vec(&mut samples);

    let payoffs: Vec<f64> = samples.iter().map(|s| s.payoff).collect();
    let averages: Vec<f64> = samples.iter().map(|s| s.average).collect();
    let (mean_payoff, se_payoff) = mean_and_se(&payoffs);
    let (mean_average, mean_average_std_error) = mean_and_se(&averages);
    let df = params.discount_factor();
    Ok(McResult {
        price: df * mean_payoff,
        std_error: df * se_payoff,
        n_effective: n,
        mean_average,
        mean_average_std_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::volexp::forward_price;

    fn cfg(paths: usize, steps: usize) -> McConfig {
        McConfig {
            paths,
            steps,
            seed: 7,
            antithetic: false,
            chunk_size: 256,
            budget: DEFAULT_BUDGET,
        }
    }

    #[test]
    fn pairwise_sum_matches_naive() {
        let xs: Vec<f64> = (0..1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&xs), 499_500.0);
        assert_eq!(pairwise_sum(&[]), 0.0);
    }

    #[test]
    fn deterministic_limit() {
        let p = MarketParams::new(1.0, 0.05, 0.0, 1e-8, 1.0).unwrap();
        let r = mc_asian_price(0.9, &p, OptionSide::Call, &cfg(64, 252)).unwrap();
        let expected = p.discount_factor() * (forward_price(&p) - 0.9);
        assert!((r.price - expected).abs() < 1e-8, "{} vs {expected}", r.price);
    }

    #[test]
    fn chunking_does_not_change_result() {
        let p = MarketParams::new(2.0, 0.05, 0.0, 0.5, 1.0).unwrap();
        let mut c = cfg(3001, 16);
        let base = mc_asian_price(2.0, &p, OptionSide::Call, &c).unwrap();
        for chunk in [1, 17, 1000, 5000] {
            c.chunk_size = chunk;
            assert_eq!(mc_asian_price(2.0, &p, OptionSide::Call, &c).unwrap(), base);
        }
        let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let again = single
            .install(|| mc_asian_price(2.0, &p, OptionSide::Call, &c))
            .unwrap();
        assert_eq!(again, base);
    }

    #[test]
    fn seed_changes_result() {
        let p = MarketParams::new(2.0, 0.05, 0.0, 0.5, 1.0).unwrap();
        let mut c = cfg(500, 16);
        let a = mc_asian_price(2.0, &p, OptionSide::Call, &c).unwrap();
        c.seed = 8;
        let b = mc_asian_price(2.0, &p, OptionSide::Call, &c).unwrap();
        assert_ne!(a.price, b.price);
    }

    #[test]
    fn validation_and_budget() {
        let p = MarketParams::new(1.0, 0.0, 0.0, 0.2, 1.0).unwrap();
        assert!(mc_asian_price(1.0, &p, OptionSide::Call, &cfg(0, 10)).is_err());
        assert!(mc_asian_price(1.0, &p, OptionSide::Call, &cfg(10, 1)).is_err());
        assert!(mc_asian_price(-1.0, &p, OptionSide::Call, &cfg(10, 10)).is_err());
        let mut c = cfg(1000, 100);
        c.budget = 99_999;
        assert!(matches!(
            mc_asian_price(1.0, &p, OptionSide::Call, &c),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn std_error_positive() {
        let p = MarketParams::new(1.0, 0.0, 0.0, 0.2, 1.0).unwrap();
        let r = mc_asian_price(1.0, &p, OptionSide::Put, &cfg(2, 10)).unwrap();
        assert!(r.std_error >= 0.0);
        let r = mc_asian_price(1.0, &p, OptionSide::Put, &cfg(200, 10)).unwrap();
        assert!(r.std_error > 0.0);
        assert_eq!(r.n_effective, 200);
    }
}
