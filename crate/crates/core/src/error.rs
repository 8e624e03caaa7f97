use thiserror::Error;

/// Errors raised by the pricing and expansion routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("root solver did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("unsupported strike {strike}: resummed volatility is only available at the forward {forward}")]
    UnsupportedStrike { strike: f64, forward: f64 },
    #[error("price {price} outside no-arbitrage bounds [{lower}, {upper}]")]
    PriceOutOfBounds { price: f64, lower: f64, upper: f64 },
    #[error("simulation budget exceeded: {requested} path-steps requested, budget is {budget}")]
    Budget { requested: u128, budget: u64 },
    #[error("fixture parse error at line {line}: {message}")]
    Fixture { line: usize, message: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
