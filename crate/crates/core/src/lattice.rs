//! Ground-state two-point functions of the harmonic chain
//! `H = (E0/2) sum_j (p_j^2 + q_j^2 - alpha q_j q_{j+1})`.
//!
//! `g_l = <q_i q_{i+l}>` and `h_l = <p_i p_{i+l}>`. The infinite-chain values
//! come from a closed form in terms of `2F1`; the finite-chain spectral sums
//! in [`finite`] are kept as an independent check.

pub mod finite;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::special::{binomial, hyp2f1_with, SeriesControl};

pub use finite::{finite_correlations, g_finite, h_finite, DEFAULT_ORACLE_N};

/// Dimensionless nearest-neighbour coupling, `0 < alpha < 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Coupling(f64);

impl Coupling {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha < 1.0 {
            Ok(Coupling(alpha))
        } else {
            Err(Error::domain(format!(
                "coupling alpha must lie in (0, 1), got {alpha}"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `z = (1 - sqrt(1 - alpha^2)) / alpha`, written without the
    /// cancellation that form suffers at small alpha.
    pub fn z(self) -> f64 {
        let a = self.0;
        a / (1.0 + (1.0 - a * a).sqrt())
    }

    /// `mu = 1 / sqrt(1 + z^2)`.
    pub fn mu(self) -> f64 {
        let z = self.z();
        1.0 / (1.0 + z * z).sqrt()
    }
}

impl TryFrom<f64> for Coupling {
    type Error = Error;

    fn try_from(alpha: f64) -> Result<Self> {
        Coupling::new(alpha)
    }
}

/// `(z, mu)` for a coupling.
pub fn reduced_coupling(alpha: Coupling) -> (f64, f64) {
    (alpha.z(), alpha.mu())
}

/// Dispersion relation `nu(theta) = sqrt(1 - alpha cos theta)`.
pub fn dispersion(theta: f64, alpha: Coupling) -> f64 {
    (1.0 - alpha.value() * theta.cos()).sqrt()
}

/// `g_l = z^l / (2 mu) (l - 1/2 choose l) 2F1(1/2, l + 1/2; l + 1; z^2)`.
pub fn g_infinite(l: u32, alpha: Coupling) -> Result<f64> {
    g_infinite_with(l, alpha, SeriesControl::default())
}

/// `h_l = mu z^l / 2 (l - 3/2 choose l) 2F1(-1/2, l - 1/2; l + 1; z^2)`.
pub fn h_infinite(l: u32, alpha: Coupling) -> Result<f64> {
    h_infinite_with(l, alpha, SeriesControl::default())
}

pub fn g_infinite_with(l: u32, alpha: Coupling, ctl: SeriesControl) -> Result<f64> {
    let (z, mu) = reduced_coupling(alpha);
    let lf = f64::from(l);
    let f = hyp2f1_with(0.5, lf + 0.5, lf + 1.0, z * z, ctl)?;
    Ok(z.powi(l as i32) / (2.0 * mu) * binomial(lf - 0.5, l) * f)
}

pub fn h_infinite_with(l: u32, alpha: Coupling, ctl: SeriesControl) -> Result<f64> {
    let (z, mu) = reduced_coupling(alpha);
    let lf = f64::from(l);
    let f = hyp2f1_with(-0.5, lf - 0.5, lf + 1.0, z * z, ctl)?;
    Ok(mu * z.powi(l as i32) / 2.0 * binomial(lf - 1.5, l) * f)
}

/// Precomputed `g_0..=g_lmax` and `h_0..=h_lmax` for one coupling.
///
/// Immutable once built; indexing by lag alone encodes the translation
/// symmetry of the chain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationTable {
    alpha: Coupling,
    g: Vec<f64>,
    h: Vec<f64>,
}

impl CorrelationTable {
    /// Wraps externally computed values. Both vectors must have the same,
    /// non-zero length.
    pub fn from_parts(alpha: Coupling, g: Vec<f64>, h: Vec<f64>) -> Result<Self> {
        if g.is_empty() || g.len() != h.len() {
            return Err(Error::domain(format!(
                "correlation table needs equal non-empty g/h, got {} and {}",
                g.len(),
                h.len()
            )));
        }
        Ok(CorrelationTable { alpha, g, h })
    }

    pub fn alpha(&self) -> Coupling {
        self.alpha
    }

    pub fn l_max(&self) -> usize {
        self.g.len() - 1
    }

    pub fn g(&self) -> &[f64] {
        &self.g
    }

    pub fn h(&self) -> &[f64] {
        &self.h
    }

    /// Lags at which the expected sign pattern (`g_l > 0` for all `l`,
    /// `h_0 > 0`, `h_l < 0` for `l >= 1`) or the single-site uncertainty
    /// bound `g_0 h_0 >= 1/4` is violated.
    pub fn sign_violations(&self) -> Vec<usize> {
        let mut bad: Vec<usize> = (0..self.g.len())
            .filter(|&l| {
                let h_ok = if l == 0 {
                    self.h[0] > 0.0
                } else {
                    self.h[l] < 0.0
                };
                !(self.g[l] > 0.0 && h_ok)
            })
            .collect();
        if self.g[0] * self.h[0] < 0.25 && !bad.contains(&0) {
            bad.insert(0, 0);
        }
        bad
    }
}

/// Builds the infinite-chain table for lags `0..=l_max`.
pub fn correlation_table(alpha: Coupling, l_max: usize) -> Result<CorrelationTable> {
    correlation_table_with(alpha, l_max, SeriesControl::default())
}

pub fn correlation_table_with(
    alpha: Coupling,
    l_max: usize,
    ctl: SeriesControl,
) -> Result<CorrelationTable> {
    let l_max = u32::try_from(l_max).map_err(|_| Error::domain("l_max too large"))?;
    let g = (0..=l_max)
        .map(|l| g_infinite_with(l, alpha, ctl))
        .collect::<Result<Vec<_>>>()?;
    let h = (0..=l_max)
        .map(|l| h_infinite_with(l, alpha, ctl))
        .collect::<Result<Vec<_>>>()?;
    Ok(CorrelationTable { alpha, g, h })
}
