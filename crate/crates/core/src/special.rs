//! Special functions needed by the chain correlations.

use std::f64::consts::PI;

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Stopping rule for the Gauss hypergeometric series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    /// Absolute term magnitude below which the series is considered summed.
    pub tol: f64,
    /// Hard cap on the number of terms.
    pub max_terms: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl {
            tol: 1e-14,
            max_terms: 1_000_000,
        }
    }
}

/// `2F1(a, b; c; x)` by direct summation of the Gauss series with the
/// default [`SeriesControl`].
pub fn hyp2f1(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    hyp2f1_with(a, b, c, x, SeriesControl::default())
}

/// Gauss series `sum_k (a)_k (b)_k / (c)_k x^k / k!`.
///
/// Summation stops after two consecutive terms with magnitude below
/// `ctl.tol`. Terms vanish identically once `a` or `b` is a non-positive
/// integer, so polynomial cases terminate as well.
pub fn hyp2f1_with(a: f64, b: f64, c: f64, x: f64, ctl: SeriesControl) -> Result<f64> {
    if x.is_nan() || x.abs() >= 1.0 {
        return Err(Error::domain(format!("2F1 series needs |x| < 1, got {x}")));
    }
    if c <= 0.0 && c == c.round() {
        return Err(Error::domain(format!(
            "2F1 undefined for non-positive integer c = {c}"
        )));
    }

    let mut sum = 1.0;
    let mut term = 1.0;
    let mut small = 0;
    for k in 0..ctl.max_terms {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * x;
        sum += term;
        if term.abs() < ctl.tol {
            small += 1;
            if small == 2 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NoConvergence {
        terms: ctl.max_terms,
        x,
    })
}

/// `(ln |Gamma(x)|, sign Gamma(x))`. Poles return `(+inf, 0.0)`.
pub fn ln_gamma_signed(x: f64) -> (f64, f64) {
    if x > 0.0 {
        return (ln_gamma(x), 1.0);
    }
    if x == x.floor() {
        return (f64::INFINITY, 0.0);
    }
    // Gamma(x) Gamma(1 - x) = pi / sin(pi x)
    let s = (PI * x).sin();
    (PI.ln() - s.abs().ln() - ln_gamma(1.0 - x), s.signum())
}

/// Generalized binomial coefficient `(x choose k)` for real `x` and integer
/// `k >= 0`, evaluated through log-gamma so large `k` does not overflow.
///
/// When `x` is a non-negative integer smaller than `k` the coefficient is 0.
/// Negative-integer `x` is handled by the symmetric product identity.
pub fn binomial(x: f64, k: u32) -> f64 {
    let kf = f64::from(k);
    if k == 0 {
        return 1.0;
    }
    if x == x.floor() {
        if x >= 0.0 && x < kf {
            return 0.0;
        }
        if x < 0.0 {
            // (x choose k) = (-1)^k (k - x - 1 choose k)
            let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
            return sign * binomial(kf - x - 1.0, k);
        }
    }
    let (ln_num, s_num) = ln_gamma_signed(x + 1.0);
    let (ln_den, s_den) = ln_gamma_signed(x - kf + 1.0);
    let ln_kfact = ln_gamma(kf + 1.0);
    s_num * s_den * (ln_num - ln_den - ln_kfact).exp()
}
