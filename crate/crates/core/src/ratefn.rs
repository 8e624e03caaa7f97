//! The Black-Scholes rate function `J_BS(k)` for the time-average of a
//! geometric Brownian motion.
//!
//! For `k >= 1`, `J_BS(k) = β²/2 − β tanh(β/2)` where `sinh(β)/β = k`.
//! For `0 < k <= 1`, `J_BS(k) = 2ξ (tan ξ − ξ)` where `sin(2ξ)/(2ξ) = k` and
//! `ξ ∈ [0, π/2)`. Close to `k = 1` both closed forms lose digits to
//! cancellation, so a Taylor series in `log k` is used instead.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::solver::bracketed_newton;

/// Below this `|log k|` the Taylor series replaces the closed form.
pub const SERIES_SWITCH: f64 = 1e-2;

/// Radius of convergence of the `log k` expansion of `J_BS`.
pub const SERIES_RADIUS: f64 = 3.49295;

/// Absolute tolerance on the branch-equation residual.
pub const ROOT_TOLERANCE: f64 = 1e-12;

const SMALL_ARG: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    SinhBranch,
    SinBranch,
    Series,
}

/// One evaluation of the rate function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateEval {
    pub k: f64,
    pub value: f64,
    pub branch: Branch,
    /// Residual of the branch equation at the root; zero for [`Branch::Series`].
    pub residual: f64,
}

/// `sinh(β)/β` and its derivative.
fn sinhc(beta: f64) -> (f64, f64) {
    if beta.abs() < SMALL_ARG {
        let b2 = beta * beta;
        (1.0 + b2 / 6.0 * (1.0 + b2 / 20.0), beta / 3.0 * (1.0 + b2 / 10.0))
    } else if beta.abs() < 1e-2 {
        let b2 = beta * beta;
        (beta.sinh() / beta, beta / 3.0 * (1.0 + b2 / 10.0 * (1.0 + b2 / 28.0)))
    } else {
        let s = beta.sinh();
        (s / beta, (beta * beta.cosh() - s) / (beta * beta))
    }
}

/// `sin(2ξ)/(2ξ)` and its derivative with respect to `ξ`.
fn sinc2(xi: f64) -> (f64, f64) {
    let y = 2.0 * xi;
    if y.abs() < SMALL_ARG {
        let y2 = y * y;
        (1.0 - y2 / 6.0 * (1.0 - y2 / 20.0), -2.0 * y / 3.0 * (1.0 - y2 / 10.0))
    } else if y.abs() < 1e-2 {
        let y2 = y * y;
        (y.sin() / y, -2.0 * y / 3.0 * (1.0 - y2 / 10.0 * (1.0 - y2 / 28.0)))
    } else {
        let s = y.sin();
        (s / y, 2.0 * (y * y.cos() - s) / (y * y))
    }
}

fn check_finite(k: f64) -> Result<()> {
    if k.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("strike ratio must be finite, got {k}")))
    }
}

fn solve_beta_with_residual(k: f64) -> Result<(f64, f64)> {
    check_finite(k)?;
    if k < 1.0 {
        return Err(Error::domain(format!("sinh branch needs k >= 1, got {k}")));
    }
    if k == 1.0 {
        return Ok((0.0, 0.0));
    }
    // Absolute residuals below one ulp of k are not representable for large k.
    let tol = ROOT_TOLERANCE * k.max(1.0);
    let hi = (2.0 * k).ln() + 4.0;
    let root = bracketed_newton(
        |b| {
            let (v, d) = sinhc(b);
            (v - k, d)
        },
        0.0,
        hi,
        tol,
        1e-300,
    )?;
    Ok((root.x, root.residual))
}

fn solve_xi_with_residual(k: f64) -> Result<(f64, f64)> {
    check_finite(k)?;
    if k <= 0.0 || k > 1.0 {
        return Err(Error::domain(format!("sin branch needs 0 < k <= 1, got {k}")));
    }
    if k == 1.0 {
        return Ok((0.0, 0.0));
    }
    let root = bracketed_newton(
        |xi| {
            let (v, d) = sinc2(xi);
            (v - k, d)
        },
        0.0,
        FRAC_PI_2 - 1e-15,
        ROOT_TOLERANCE,
        1e-300,
    )?;
    Ok((root.x, root.residual))
}

/// Unique nonnegative root of `sinh(β)/β = k` for `k >= 1`.
pub fn solve_beta(k: f64) -> Result<f64> {
    solve_beta_with_residual(k).map(|(b, _)| b)
}

/// Unique root in `[0, π/2)` of `sin(2ξ)/(2ξ) = k` for `0 < k <= 1`.
pub fn solve_xi(k: f64) -> Result<f64> {
    solve_xi_with_residual(k).map(|(x, _)| x)
}

/// `J_BS` as its truncated Taylor series in `log k`:
/// `(3/2) l² − (3/10) l³ + (109/1400) l⁴`.
///
/// Only trustworthy for `|log k| <= 0.5`; past [`SERIES_RADIUS`] the series
/// does not converge at all (see [`within_series_radius`]).
pub fn rate_function_series(logk: f64) -> f64 {
    let l = logk;
    l * l * (1.5 + l * (-0.3 + l * (109.0 / 1400.0)))
}

pub fn within_series_radius(logk: f64) -> bool {
    logk.abs() < SERIES_RADIUS
}

/// Evaluates `J_BS(k)`, choosing the series or the appropriate closed-form
/// branch.
pub fn rate_function(k: f64) -> Result<RateEval> {
    check_finite(k)?;
    if k <= 0.0 {
        return Err(Error::domain(format!("strike ratio must be positive, got {k}")));
    }
    let logk = k.ln();
    if logk.abs() < SERIES_SWITCH {
        return Ok(RateEval {
            k,
            value: rate_function_series(logk),
            branch: Branch::Series,
            residual: 0.0,
        });
    }
    if k > 1.0 {
        let (beta, residual) = solve_beta_with_residual(k)?;
        let value = 0.5 * beta * beta - beta * (0.5 * beta).tanh();
        Ok(RateEval {
            k,
            value,
            branch: Branch::SinhBranch,
            residual,
        })
    } else {
        let (xi, residual) = solve_xi_with_residual(k)?;
        let value = 2.0 * xi * (xi.tan() - xi);
        Ok(RateEval {
            k,
            value,
            branch: Branch::SinBranch,
            residual,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    // Reference values from 40-digit evaluations of the closed forms.
    const BETA_AT_2: f64 = 2.177_318_984_965_306_8;
    const J_AT_2: f64 = 0.636_367_494_525_240_4;
    const XI_AT_HALF: f64 = 0.947_747_133_516_990_5;
    const J_AT_HALF: f64 = 0.841_595_790_105_893_4;

    /// Plain bisection on a monotone function, independent of the solver.
    fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
        let up = f(lo) < 0.0;
        for _ in 0..400 {
            let mid = 0.5 * (lo + hi);
            if (f(mid) < 0.0) == up {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    fn j_oracle(k: f64) -> f64 {
        if k >= 1.0 {
            let b = bisect(|b| b.sinh() / b - k, 1e-9, 40.0);
            0.5 * b * b - b * (0.5 * b).tanh()
        } else {
            let x = bisect(|x| (2.0 * x).sin() / (2.0 * x) - k, 1e-9, FRAC_PI_2 - 1e-15);
            2.0 * x * (x.tan() - x)
        }
    }

    #[test]
    fn beta_examples() {
        assert_eq!(solve_beta(1.0).unwrap(), 0.0);
        assert_relative_eq!(solve_beta(1f64.sinh()).unwrap(), 1.0, epsilon = 1e-13);
        assert_relative_eq!(solve_beta(2.0).unwrap(), BETA_AT_2, epsilon = 1e-13);
    }

    #[test]
    fn xi_examples() {
        assert_eq!(solve_xi(1.0).unwrap(), 0.0);
        assert_relative_eq!(solve_xi(1f64.sin()).unwrap(), 0.5, epsilon = 1e-13);
        assert_relative_eq!(solve_xi(0.5).unwrap(), XI_AT_HALF, epsilon = 1e-13);
        let near_zero = solve_xi(1e-9).unwrap();
        assert!(FRAC_PI_2 - near_zero < 1e-6);
    }

    #[test]
    fn domain_errors() {
        assert!(solve_beta(0.99).is_err());
        assert!(solve_beta(f64::NAN).is_err());
        assert!(solve_beta(f64::INFINITY).is_err());
        assert!(solve_xi(0.0).is_err());
        assert!(solve_xi(1.01).is_err());
        assert!(rate_function(0.0).is_err());
        assert!(rate_function(-1.0).is_err());
    }

    #[test]
    fn rate_function_examples() {
        let at_one = rate_function(1.0).unwrap();
        assert_eq!(at_one.value, 0.0);
        assert_eq!(at_one.branch, Branch::Series);

        let two = rate_function(2.0).unwrap();
        assert_eq!(two.branch, Branch::SinhBranch);
        assert_relative_eq!(two.value, J_AT_2, max_relative = 1e-13);

        let half = rate_function(0.5).unwrap();
        assert_eq!(half.branch, Branch::SinBranch);
        assert_relative_eq!(half.value, J_AT_HALF, max_relative = 1e-13);
    }

    #[test]
    fn series_examples() {
        assert_eq!(rate_function_series(0.0), 0.0);
        assert_relative_eq!(
            rate_function_series(0.1),
            0.014_707_785_714_285_714,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            rate_function_series(-0.1),
            0.015_307_785_714_285_714,
            max_relative = 1e-14
        );
        assert!(within_series_radius(3.4));
        assert!(!within_series_radius(3.5));
    }

    #[test]
    fn residuals_on_named_strikes() {
        for k in [1.01, 1.1, 2.0, 5.0, 10.0, 20.0] {
            let b = solve_beta(k).unwrap();
            assert!((sinhc(b).0 - k).abs() <= ROOT_TOLERANCE, "k={k}");
        }
        for k in [0.99, 0.9, 0.5, 0.2, 0.1, 0.05] {
            let x = solve_xi(k).unwrap();
            assert!((sinc2(x).0 - k).abs() <= ROOT_TOLERANCE, "k={k}");
        }
    }

    #[test]
    fn matches_bisection_oracle_on_grid() {
        for i in 0..=200 {
            let logk = -3.0 + 6.0 * i as f64 / 200.0;
            let k = logk.exp();
            if logk.abs() < SERIES_SWITCH {
                continue;
            }
            let got = rate_function(k).unwrap().value;
            assert_relative_eq!(got, j_oracle(k), max_relative = 1e-11);
        }
    }

    #[test]
    fn series_tracks_closed_form_within_fifth_order() {
        for i in 0..100 {
            let logk = -0.3 + 0.6 * (i as f64 + 0.5) / 100.0;
            let closed = j_oracle(logk.exp());
            let series = rate_function_series(logk);
            assert!((series - closed).abs() <= logk.abs().powi(5), "logk={logk}");
        }
    }

    #[test]
    fn continuous_across_series_switch() {
        for t in [SERIES_SWITCH, -SERIES_SWITCH] {
            let inside = rate_function((t * (1.0 - 1e-4)).exp()).unwrap();
            let outside = rate_function((t * (1.0 + 1e-4)).exp()).unwrap();
            assert_eq!(inside.branch, Branch::Series);
            assert_ne!(outside.branch, Branch::Series);
            // 1e-6 either side of the switch both evaluations track the
            // closed form, so the jump at the switch is below 1e-10.
            for l in [t - 1e-6, t + 1e-6] {
                let k = l.exp();
                assert!((rate_function(k).unwrap().value - j_oracle(k)).abs() <= 1e-10, "l={l}");
            }
        }
    }

    #[test]
    fn monotone_and_positive_on_grid() {
        let grid: Vec<f64> = (0..=400)
            .map(|i| (0.05f64.ln() + (20f64 / 0.05).ln() * i as f64 / 400.0).exp())
            .collect();
        let vals: Vec<f64> = grid.iter().map(|&k| rate_function(k).unwrap().value).collect();
        for (k, v) in grid.iter().zip(&vals) {
            if *k != 1.0 {
                assert!(*v > 0.0, "k={k}");
            }
        }
        for w in grid.windows(2).zip(vals.windows(2)) {
            let (ks, vs) = w;
            if ks[1] <= 1.0 {
                assert!(vs[1] < vs[0]);
            } else if ks[0] >= 1.0 {
                assert!(vs[1] > vs[0]);
            }
        }
    }

    proptest! {
        #[test]
        fn branch_tags_match_side(logk in -3.0f64..3.0) {
            let k = logk.exp();
            let e = rate_function(k).unwrap();
            prop_assert!(e.value >= 0.0);
            match e.branch {
                Branch::SinhBranch => prop_assert!(k >= 1.0),
                Branch::SinBranch => prop_assert!(k <= 1.0),
                Branch::Series => prop_assert_eq!(e.residual, 0.0),
            }
            if e.branch != Branch::Series {
                prop_assert!(e.residual <= ROOT_TOLERANCE);
            }
        }
    }
}
