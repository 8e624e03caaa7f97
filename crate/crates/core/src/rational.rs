//! Exact rational coefficients.
//!
//! Every coefficient of the subleading expansion is affine in the drift
//! index through `m = μ + 1`, so it is stored as an exact `slope·m + intercept`
//! pair and only converted to `f64` at evaluation.

use num_rational::Ratio;

pub type Q = Ratio<i128>;

pub const fn q(numer: i128, denom: i128) -> Q {
    Ratio::new_raw(numer, denom)
}

pub fn to_f64(x: Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// `slope · (μ + 1) + intercept` with exact rational parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Affine {
    pub slope: Q,
    pub intercept: Q,
}

impl Affine {
    pub fn new(slope: Q, intercept: Q) -> Self {
        Affine {
            slope: reduce(slope),
            intercept: reduce(intercept),
        }
    }

    pub fn constant(c: Q) -> Self {
        Affine::new(q(0, 1), c)
    }

    /// Evaluates at drift index `mu`.
    pub fn eval(&self, mu: f64) -> f64 {
        to_f64(self.slope) * (mu + 1.0) + to_f64(self.intercept)
    }

    /// Exact evaluation at a rational `μ + 1`.
    pub fn eval_exact(&self, mu_plus_one: Q) -> Q {
        self.slope * mu_plus_one + self.intercept
    }

    pub fn scale(self, c: Q) -> Self {
        Affine::new(self.slope * c, self.intercept * c)
    }

    pub fn plus(self, other: Affine) -> Self {
        Affine::new(self.slope + other.slope, self.intercept + other.intercept)
    }
}

fn reduce(x: Q) -> Q {
    Ratio::new(*x.numer(), *x.denom())
}
