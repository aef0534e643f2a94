//! Generalized cosine integrals `I_p(a, K) = int_K^inf cos(a k) k^-p dk`.
//!
//! Rotating the contour to `k = K + i t` gives
//! `int_K^inf e^{i a k} k^-p dk = i e^{i a K} int_0^inf e^{-a t} (K + i t)^-p dt`,
//! a smooth, non-oscillatory integral. For `a K` large its Laplace
//! expansion `i e^{i a K} K^-p / a * sum_n (p)_n (-i / (a K))^n` is used
//! directly; otherwise the rotated integral is evaluated numerically.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_to_infinity, Control};

/// Smallest `a K` at which the asymptotic series is attempted at all.
pub const ASYMPTOTIC_MIN: f64 = 40.0;

/// The asymptotic series is accepted only if its smallest term is below
/// this fraction of the sum; otherwise the rotated integral is used.
const SERIES_ACCURACY: f64 = 1e-16;

/// `int_K^inf cos(a k) / k^p dk` for `a >= 0`, `K > 0`, `p >= 1`.
///
/// `a = 0, p = 1` diverges and is reported as [`Error::LogDivergent`] with
/// `r` set to NaN; callers know which separation produced it.
pub fn cos_tail(p: u32, a: f64, k0: f64) -> Result<f64> {
    debug_assert!(p >= 1 && a >= 0.0 && k0 > 0.0);
    if a == 0.0 {
        if p == 1 {
            return Err(Error::LogDivergent { r: f64::NAN });
        }
        let q = f64::from(p - 1);
        return Ok(k0.powf(-q) / q);
    }
    let x = a * k0;
    let series = match (x >= ASYMPTOTIC_MIN).then(|| asymptotic(p, x)).flatten() {
        Some(s) => s,
        None => rotated(p, a * k0)?,
    };
    // i e^{iaK} K^-p / a * series
    let phase = Complex64::new(0.0, 1.0) * Complex64::from_polar(1.0, x);
    Ok((phase * series).re * k0.powi(-(p as i32)) / a)
}

/// `sum_n (p)_n (-i / x)^n`, or `None` if the terms start growing before
/// they fall below [`SERIES_ACCURACY`].
fn asymptotic(p: u32, x: f64) -> Option<Complex64> {
    let step = Complex64::new(0.0, -1.0 / x);
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for n in 0.. {
        let next = term * step * f64::from(p + n);
        if next.norm() >= term.norm() {
            return None;
        }
        sum += next;
        if next.norm() < SERIES_ACCURACY * sum.norm() {
            return Some(sum);
        }
        term = next;
    }
    unreachable!()
}

/// `int_0^inf e^{-u} (1 + i u / x)^-p du` with `x = a K`, the same
/// normalization as [`asymptotic`]. The bracket is of order one and smooth,
/// so it is always resolved to near machine precision.
fn rotated(p: u32, x: f64) -> Result<Complex64> {
    let kernel = |u: f64| Complex64::new(1.0, u / x).powi(-(p as i32)) * (-u).exp();
    let ctl = Control::with_tol(1e-15);
    let re = integrate_to_infinity(|u| kernel(u).re, 0.0, 1.0, ctl)?;
    let im = integrate_to_infinity(|u| kernel(u).im, 0.0, 1.0, ctl)?;
    Ok(Complex64::new(re.value, im.value))
}

/// Cosine integral `Ci(x) = -int_x^inf cos t / t dt`, `x > 0`.
pub fn ci(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::domain(format!("Ci needs x > 0, got {x}")));
    }
    Ok(-cos_tail(1, 1.0, x)?)
}
