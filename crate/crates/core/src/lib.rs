//! Entanglement between collective operators in the ground state of an
//! infinite harmonic chain, and between smeared regions of a (1+1)-D
//! Klein-Gordon vacuum.
//!
//! The crate is organized bottom-up:
//!
//! * [`special`] - Gauss hypergeometric series, signed log-gamma and
//!   generalized binomials.
//! * [`lattice`] - ground-state two-point functions `g_l`, `h_l` of the
//!   chain (closed form for `N -> inf`, spectral sums for finite `N`).
//! * [`blocks`] - geometry of two interleaved periodic blocks.
//! * [`entanglement`] - collective covariance, negativity degree, Duan
//!   witness and the nearest-neighbour estimate.
//! * [`symplectic`] - the frequency-resolved collective transformation and
//!   its symplectic checks.
//! * [`quadrature`] - adaptive Gauss-Kronrod integration.
//! * [`field`] - smeared Klein-Gordon propagators and field negativity.
//! * [`sweep`], [`validate`] - grid evaluation and the end-to-end
//!   validation suite used by the CLI.

pub mod blocks;
pub mod entanglement;
mod error;
pub mod field;
pub mod lattice;
pub mod quadrature;
pub mod special;
pub mod sweep;
pub mod symplectic;
pub mod validate;

pub use error::{Error, ErrorKind, Result};

pub use blocks::{block_indices, lag_multiset, BlockIndices, BlockSpec, LagCounts};
pub use entanglement::{
    approx_negativity, covariance_of_blocks, duan_witness, negativity, CollectiveCovariance,
    EntanglementResult, Normalization,
};
pub use field::{d_phi, d_pi, field_negativity, FieldRegionSpec};
pub use lattice::{
    correlation_table, dispersion, g_finite, g_infinite, h_finite, h_infinite, reduced_coupling,
    CorrelationTable, Coupling,
};
pub use special::hyp2f1;
