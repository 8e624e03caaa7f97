//! Leading-order Laplace method for endpoint-dominated integrals.
//!
//! For `I(λ) = ∫ₐ^b e^{−λ f(x)} g(x) dx` with the phase minimal at the left
//! endpoint and, near it,
//!
//! ```text
//! f(x) = f(a) + a₀ (x − a)^α + …,   g(x) = b₀ (x − a)^{β−1} + …
//! ```
//!
//! the integral behaves as `e^{−λ f(a)} Γ(β/α) d₀ λ^{−β/α}` with
//! `d₀ = b₀ / (α a₀^{β/α})`. With `λ ↦ 1/τ`, `α = 1` and `β = 2` this is the
//! `τ^{3/2}/J′²`-type prefactor of an out-of-the-money option price.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceSpec {
    pub f_at_a: f64,
    pub a0: f64,
    pub b0: f64,
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
}

impl LaplaceSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("a0", self.a0),
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("lambda", self.lambda),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain(format!("{name} must be positive, got {v}")));
            }
        }
        if !self.f_at_a.is_finite() || !self.b0.is_finite() {
            return Err(Error::domain("f(a) and b0 must be finite"));
        }
        Ok(())
    }

    /// `d₀ = b₀ / (α a₀^{β/α})`.
    pub fn d0(&self) -> f64 {
        self.b0 / (self.alpha * self.a0.powf(self.beta / self.alpha))
    }
}

/// Leading term of the Laplace expansion of `I(λ)`.
pub fn leading_term(spec: &LaplaceSpec) -> Result<f64> {
    spec.validate()?;
    let ratio = spec.beta / spec.alpha;
    Ok((-spec.lambda * spec.f_at_a).exp() * libm::tgamma(ratio) * spec.d0() * spec.lambda.powf(-ratio))
}
