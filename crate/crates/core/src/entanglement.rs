//! Collective covariance of two blocks and the negativity degree of
//! entanglement between their `k = 0` collective operators
//! `Q = c sum_j q_j`, `P = c sum_j p_j`.
//!
//! For the ground state the 4x4 covariance of `(Q_A, P_A, Q_B, P_B)` has
//! vanishing position-momentum entries, so it is carried as four scalars.
//!
//! The negativity degree `(delta1 delta2)_0 / (delta1 delta2) - 1` has
//! condition number `(1 + eps) / eps` with respect to the covariance, so a
//! prefactor rounded differently in two operator conventions would show up
//! amplified near the separability threshold. The covariance therefore
//! carries its prefactor and uncertainty bound in double-double precision;
//! the prefactor then cancels to far below `f64` resolution and `eps` does
//! not depend on the convention.

use serde::ser::{Serialize, SerializeStruct, Serializer};
use twofloat::TwoFloat;

use crate::blocks::{block_indices, lag_multiset, BlockIndices, BlockSpec};
use crate::error::{Error, Result};
use crate::lattice::CorrelationTable;

/// Relative slack on `delta1 delta2 >= bound` below which a state is still
/// called separable. Absorbs rounding in the covariance sums.
pub const SEPARABILITY_SLACK: f64 = 4e-12;

/// `(G, H, G_AB, H_AB)`: `<Q_A^2> = <Q_B^2>`, `<P_A^2>`, `<Q_A Q_B>`, `<P_A P_B>`,
/// together with the uncertainty bound `(delta1 delta2)_0` of the operators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollectiveCovariance {
    // g_diag, h_diag, g_cross, h_cross, bound
    parts: [TwoFloat; 5],
}

/// `x * f`, passing infinities through (double-double arithmetic turns
/// them into NaN).
fn scale(x: TwoFloat, f: TwoFloat) -> TwoFloat {
    if x.hi().is_finite() {
        x * f
    } else {
        TwoFloat::from(x.hi() * f.hi())
    }
}

impl CollectiveCovariance {
    /// Covariance of canonical operators, `(delta1 delta2)_0 = 1/4`.
    pub fn new(g_diag: f64, h_diag: f64, g_cross: f64, h_cross: f64) -> Self {
        CollectiveCovariance {
            parts: [g_diag, h_diag, g_cross, h_cross, 0.25].map(TwoFloat::from),
        }
    }

    /// Same entries with another uncertainty bound.
    pub fn with_bound(mut self, bound: f64) -> Self {
        self.parts[4] = TwoFloat::from(bound);
        self
    }

    pub fn g_diag(&self) -> f64 {
        self.parts[0].hi()
    }

    pub fn h_diag(&self) -> f64 {
        self.parts[1].hi()
    }

    pub fn g_cross(&self) -> f64 {
        self.parts[2].hi()
    }

    pub fn h_cross(&self) -> f64 {
        self.parts[3].hi()
    }

    /// `(delta1 delta2)_0 = (|<[Q, P]>| / 2)^2`.
    pub fn bound(&self) -> f64 {
        self.parts[4].hi()
    }

    /// `G - |G_AB|`.
    pub fn delta1(&self) -> f64 {
        self.g_diag() - self.g_cross().abs()
    }

    /// `H - |H_AB|`.
    pub fn delta2(&self) -> f64 {
        self.h_diag() - self.h_cross().abs()
    }

    /// Covariance of `(c_q Q, c_p P)`; the bound scales with `(c_q c_p)^2`.
    pub fn rescaled(&self, q_scale: f64, p_scale: f64) -> CollectiveCovariance {
        let q2 = TwoFloat::new_mul(q_scale, q_scale);
        let p2 = TwoFloat::new_mul(p_scale, p_scale);
        let [g, h, gab, hab, bound] = self.parts;
        CollectiveCovariance {
            parts: [
                scale(g, q2),
                scale(h, p2),
                scale(gab, q2),
                scale(hab, p2),
                bound * q2 * p2,
            ],
        }
    }

    /// `bound / (delta1 delta2) - 1`, unclamped.
    fn raw_negativity(&self) -> f64 {
        let [g, h, gab, hab, bound] = self.parts;
        if self.parts.iter().all(|x| x.hi().is_finite()) {
            // (bound - product) / product: the cancellation happens in
            // double-double, the final quotient is well conditioned
            let product = (g - gab.abs()) * (h - hab.abs());
            (bound - product).hi() / product.hi()
        } else {
            self.bound() / (self.delta1() * self.delta2()) - 1.0
        }
    }
}

impl Serialize for CollectiveCovariance {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("CollectiveCovariance", 5)?;
        st.serialize_field("g_diag", &self.g_diag())?;
        st.serialize_field("h_diag", &self.h_diag())?;
        st.serialize_field("g_cross", &self.g_cross())?;
        st.serialize_field("h_cross", &self.h_cross())?;
        st.serialize_field("bound", &self.bound())?;
        st.end()
    }
}

/// Prefactor convention for the collective operators of an `n`-site block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Normalization {
    /// `1/sqrt(n)`: canonical, `[Q, P] = i`.
    Unitary,
    /// Plain sum, `[Q, P] = i n`.
    Sum,
    /// Average, `[Q, P] = i / n`.
    Mean,
}

impl Normalization {
    pub const ALL: [Normalization; 3] = [
        Normalization::Unitary,
        Normalization::Sum,
        Normalization::Mean,
    ];

    /// `c^2` for `Q = c sum q_j`.
    fn square_prefactor(self, n: usize) -> TwoFloat {
        let n = n as f64;
        match self {
            Normalization::Unitary => TwoFloat::new_div(1.0, n),
            Normalization::Sum => TwoFloat::from(1.0),
            Normalization::Mean => TwoFloat::new_div(1.0, n) / n,
        }
    }

    fn exact_bound(self, n: usize) -> TwoFloat {
        let half = self.square_prefactor(n) * (0.5 * n as f64);
        half * half
    }

    /// `(|<[Q, P]>| / 2)^2` for an `n`-site block.
    pub fn uncertainty_bound(self, n: usize) -> f64 {
        self.exact_bound(n).hi()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct EntanglementResult {
    pub epsilon: f64,
    pub delta1: f64,
    pub delta2: f64,
    /// Duan variance sum `<(Q_A - Q_B)^2> + <(P_A + P_B)^2>`.
    pub duan: f64,
    /// `(delta1 delta2)_0`, 1/4 in the canonical normalization.
    pub bound: f64,
    pub cov: CollectiveCovariance,
}

impl EntanglementResult {
    pub fn product(&self) -> f64 {
        self.delta1 * self.delta2
    }

    /// Negativity criterion with [`SEPARABILITY_SLACK`].
    pub fn is_entangled(&self) -> bool {
        self.product() < self.bound * (1.0 - SEPARABILITY_SLACK)
    }

    /// Threshold below which the Duan sum certifies entanglement
    /// (2 in the canonical normalization).
    pub fn duan_threshold(&self) -> f64 {
        4.0 * self.bound.sqrt()
    }

    pub fn duan_certifies(&self) -> bool {
        self.duan < self.duan_threshold()
    }
}

/// Covariance for the canonical `1/sqrt(n)` operators of `spec`.
pub fn covariance_of_blocks(
    table: &CorrelationTable,
    spec: BlockSpec,
) -> Result<CollectiveCovariance> {
    covariance_with(table, &block_indices(spec), Normalization::Unitary)
}

/// Covariance for arbitrary equal-size index sets and a chosen prefactor.
///
/// Each double sum `sum_{i in X, j in Y} f_{|i-j|}` is evaluated from lag
/// multiplicities.
pub fn covariance_with(
    table: &CorrelationTable,
    idx: &BlockIndices,
    norm: Normalization,
) -> Result<CollectiveCovariance> {
    let n = idx.a.len();
    if n == 0 || idx.b.len() != n {
        return Err(Error::domain(format!(
            "blocks must be non-empty and equal in size, got {} and {}",
            idx.a.len(),
            idx.b.len()
        )));
    }
    let within = lag_multiset(&idx.a, &idx.a);
    let across = lag_multiset(&idx.a, &idx.b);
    let needed = within.max_lag().max(across.max_lag()).unwrap_or(0);
    if needed > table.l_max() {
        return Err(Error::LagOutOfRange {
            needed,
            available: table.l_max(),
        });
    }
    let c2 = norm.square_prefactor(n);
    let sums = [
        within.weighted_sum(table.g()),
        within.weighted_sum(table.h()),
        across.weighted_sum(table.g()),
        across.weighted_sum(table.h()),
    ];
    let [g, h, gab, hab] = sums.map(|x| c2 * x);
    Ok(CollectiveCovariance {
        parts: [g, h, gab, hab, norm.exact_bound(n)],
    })
}

/// Negativity degree `max(0, (delta1 delta2)_0 / (delta1 delta2) - 1)`,
/// with the bound the covariance carries (1/4 for canonical operators).
pub fn negativity(cov: CollectiveCovariance) -> Result<EntanglementResult> {
    let (delta1, delta2) = (cov.delta1(), cov.delta2());
    if !(delta1 > 0.0 && delta2 > 0.0) {
        return Err(Error::InvalidState { delta1, delta2 });
    }
    Ok(EntanglementResult {
        epsilon: cov.raw_negativity().max(0.0),
        delta1,
        delta2,
        duan: duan_witness(cov),
        bound: cov.bound(),
        cov,
    })
}

/// `Delta = 2 (G - G_AB + H + H_AB)`; `Delta < 2` certifies entanglement.
pub fn duan_witness(cov: CollectiveCovariance) -> f64 {
    2.0 * (cov.g_diag() - cov.g_cross() + cov.h_diag() + cov.h_cross())
}

/// Nearest-neighbour estimate of the negativity for adjacent (`d = 0`)
/// periodic blocks with `n` sites in `m` subblocks:
/// `1 / (4 [g0 + (2 - (4m - 1)/n) g1] [h0 + (2 - 1/n) h1]) - 1`.
///
/// Not clamped at zero.
pub fn approx_negativity(g0: f64, g1: f64, h0: f64, h1: f64, n: usize, m: usize) -> f64 {
    let (n, m) = (n as f64, m as f64);
    let x = g0 + (2.0 - (4.0 * m - 1.0) / n) * g1;
    let p = h0 + (2.0 - 1.0 / n) * h1;
    1.0 / (4.0 * x * p) - 1.0
}

/// Table size sufficient for `spec`.
pub fn required_l_max(spec: BlockSpec) -> usize {
    spec.max_lag()
}

/// Covariance and negativity for one geometry.
pub fn evaluate(table: &CorrelationTable, spec: BlockSpec) -> Result<EntanglementResult> {
    negativity(covariance_of_blocks(table, spec)?)
}
