//! Bracketed Newton iteration with bisection fallback.

use crate::error::{Error, Result};

pub(crate) const MAX_ITERATIONS: usize = 200;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Root {
    pub x: f64,
    pub residual: f64,
}

/// Finds a root of `f` in `[lo, hi]`. `f` returns `(value, derivative)` and
/// must change sign over the bracket (or vanish at an endpoint).
///
/// A Newton step is taken whenever it lands strictly inside the current
/// bracket and the derivative is above `min_slope`; otherwise the bracket is
/// bisected. Once `|f| <= tol` a couple of extra Newton steps are allowed as
/// long as they keep reducing the residual.
pub(crate) fn bracketed_newton<F>(f: F, mut lo: f64, mut hi: f64, tol: f64, min_slope: f64) -> Result<Root>
where
    F: Fn(f64) -> (f64, f64),
{
    let (f_lo, _) = f(lo);
    let (f_hi, _) = f(hi);
    if f_lo == 0.0 {
        return Ok(Root { x: lo, residual: 0.0 });
    }
    if f_hi == 0.0 {
        return Ok(Root { x: hi, residual: 0.0 });
    }
    if f_lo.signum() == f_hi.signum() {
        // Endpoint already within tolerance counts as the root.
        let (x, r) = if f_lo.abs() <= f_hi.abs() {
            (lo, f_lo)
        } else {
            (hi, f_hi)
        };
        if r.abs() <= tol {
            return Ok(Root { x, residual: r.abs() });
        }
        return Err(Error::domain(format!("root not bracketed on [{lo}, {hi}]")));
    }
    let increasing = f_lo < 0.0;

    let mut x = 0.5 * (lo + hi);
    let mut best = Root {
        x,
        residual: f64::INFINITY,
    };
    let mut polish = 0;
    for _ in 0..MAX_ITERATIONS {
        let (fx, dfx) = f(x);
        if fx.abs() < best.residual {
            best = Root { x, residual: fx.abs() };
        } else if polish > 0 {
            return Ok(best);
        }
        if fx == 0.0 {
            return Ok(best);
        }
        if best.residual <= tol {
            polish += 1;
            if polish > 2 {
                return Ok(best);
            }
        }
        if (fx < 0.0) == increasing {
            lo = x;
        } else {
            hi = x;
        }
        let newton = if dfx.abs() > min_slope { x - fx / dfx } else { f64::NAN };
        let next = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if next == x || hi - lo <= f64::EPSILON * x.abs().max(f64::MIN_POSITIVE) {
            // Bracket collapsed to adjacent floats.
            if best.residual <= tol {
                return Ok(best);
            }
            break;
        }
        x = next;
    }
    if best.residual <= tol {
        return Ok(best);
    }
    Err(Error::NoConvergence {
        iterations: MAX_ITERATIONS,
        residual: best.residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let r = bracketed_newton(|x| (x * x - 2.0, 2.0 * x), 0.0, 2.0, 1e-14, 1e-300).unwrap();
        assert!((r.x - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn decreasing_function() {
        let r = bracketed_newton(|x| (1.0 - x.powi(3), -3.0 * x * x), 0.0, 3.0, 1e-14, 1e-300).unwrap();
        assert!((r.x - 1.0).abs() < 1e-14);
    }

    #[test]
    fn unbracketed_is_error() {
        assert!(bracketed_newton(|x| (x * x + 1.0, 2.0 * x), -1.0, 1.0, 1e-12, 1e-300).is_err());
    }

    #[test]
    fn flat_derivative_falls_back_to_bisection() {
        // Derivative vanishes at the root; Newton alone stalls.
        let r = bracketed_newton(|x| (x.powi(3), 3.0 * x * x), -1.0, 2.0, 1e-13, 1e-16).unwrap();
        assert!(r.residual <= 1e-13);
    }
}
