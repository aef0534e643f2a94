//! Frequency-resolved collective operators as a linear map on phase space.
//!
//! For an `N`-site ring with `x = (q_0, p_0, ..., q_{N-1}, p_{N-1})`, the map
//! `X = S x` produces
//! `(Q_A^(0), P_A^(0), ..., Q_A^(n-1), P_A^(n-1), Q_B^(0), ..., q_j, p_j, ...)`
//! with `Q^(k) = n^-1/2 sum_t q_{j_t} e^{2 pi i t k / n}` and
//! `P^(k) = n^-1/2 sum_t p_{j_t} e^{-2 pi i t k / n}`, where `j_t` is the
//! `t`-th site of the block. Uninvolved sites keep their own rows in
//! ascending order. This is a verification path for small rings only.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::blocks::{block_indices, BlockSpec};
use crate::error::{Error, Result};

/// Largest ring accepted by [`collective_symplectic`].
pub const MAX_SITES: usize = 64;

/// `Omega = direct sum of [[0, 1], [-1, 0]]` on `sites` modes.
pub fn symplectic_form(sites: usize) -> DMatrix<Complex64> {
    let mut omega = DMatrix::zeros(2 * sites, 2 * sites);
    for j in 0..sites {
        omega[(2 * j, 2 * j + 1)] = Complex64::new(1.0, 0.0);
        omega[(2 * j + 1, 2 * j)] = Complex64::new(-1.0, 0.0);
    }
    omega
}

/// Builds `S` for the two blocks of `spec` placed from site 0 of an
/// `sites`-site ring.
pub fn collective_symplectic(sites: usize, spec: BlockSpec) -> Result<DMatrix<Complex64>> {
    if sites > MAX_SITES {
        return Err(Error::domain(format!(
            "symplectic check limited to {MAX_SITES} sites, got {sites}"
        )));
    }
    if spec.span() > sites {
        return Err(Error::domain(format!(
            "blocks {spec} span {} sites, ring has {sites}",
            spec.span()
        )));
    }
    let idx = block_indices(spec);
    let n = spec.n();
    let norm = 1.0 / (n as f64).sqrt();
    let mut s = DMatrix::zeros(2 * sites, 2 * sites);

    let mut row = 0;
    for block in [&idx.a, &idx.b] {
        for k in 0..n {
            for (t, &site) in block.iter().enumerate() {
                let phase = TAU * ((t * k) % n) as f64 / n as f64;
                let w = Complex64::from_polar(norm, phase);
                s[(row, 2 * site as usize)] = w;
                s[(row + 1, 2 * site as usize + 1)] = w.conj();
            }
            row += 2;
        }
    }
    for site in 0..sites as i64 {
        if idx.a.contains(&site) || idx.b.contains(&site) {
            continue;
        }
        let j = site as usize;
        s[(row, 2 * j)] = Complex64::new(1.0, 0.0);
        s[(row + 1, 2 * j + 1)] = Complex64::new(1.0, 0.0);
        row += 2;
    }
    debug_assert_eq!(row, 2 * sites);
    Ok(s)
}

/// `max |S^T Omega S - Omega|` with a plain (non-conjugating) transpose.
pub fn symplectic_defect(s: &DMatrix<Complex64>) -> f64 {
    let omega = symplectic_form(s.nrows() / 2);
    max_abs(&(s.transpose() * &omega * s - &omega))
}

/// `max |S Omega S^T - Omega|`: deviation of `[X_i, X_j]` from `i Omega_ij`.
pub fn commutator_defect(s: &DMatrix<Complex64>) -> f64 {
    let omega = symplectic_form(s.nrows() / 2);
    max_abs(&(s * &omega * s.transpose() - &omega))
}

pub fn determinant(s: &DMatrix<Complex64>) -> Complex64 {
    s.clone().determinant()
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
