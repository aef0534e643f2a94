//! Two interleaved periodic blocks on the infinite chain.
//!
//! Block A and block B each consist of `m` subblocks of `s` contiguous
//! sites. Subblocks alternate A, B, A, B, ... with `d` unused sites between
//! neighbours. `m = 1` is the plain two-block geometry.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct BlockSpec {
    m: usize,
    s: usize,
    d: usize,
}

impl BlockSpec {
    pub fn new(m: usize, s: usize, d: usize) -> Result<Self> {
        if m == 0 || s == 0 {
            return Err(Error::domain(format!(
                "block spec needs m >= 1 and s >= 1, got m = {m}, s = {s}"
            )));
        }
        m.checked_mul(s)
            .and_then(|n| n.checked_mul(2))
            .and_then(|occupied| occupied.checked_add((2 * m - 1).checked_mul(d)?))
            .ok_or_else(|| Error::domain("block geometry overflows"))?;
        Ok(BlockSpec { m, s, d })
    }

    /// Contiguous blocks of `n` sites separated by `d`.
    pub fn contiguous(n: usize, d: usize) -> Result<Self> {
        BlockSpec::new(1, n, d)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Sites per block, `n = m s`.
    pub fn n(&self) -> usize {
        self.m * self.s
    }

    /// Sites from the first to the last occupied position inclusive.
    pub fn span(&self) -> usize {
        2 * self.m * self.s + (2 * self.m - 1) * self.d
    }

    /// Largest separation between any two involved sites.
    pub fn max_lag(&self) -> usize {
        self.span() - 1
    }
}

impl fmt::Display for BlockSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.m, self.s, self.d)
    }
}

impl FromStr for BlockSpec {
    type Err = Error;

    /// Parses the canonical `m:s:d` form.
    fn from_str(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.trim().split(':').collect();
        let [m, s, d] = parts.as_slice() else {
            return Err(Error::domain(format!(
                "block spec must be m:s:d, got {text:?}"
            )));
        };
        let num = |field: &str, name: &str| {
            field
                .trim()
                .parse::<usize>()
                .map_err(|_| Error::domain(format!("bad {name} in block spec {text:?}")))
        };
        BlockSpec::new(num(m, "m")?, num(s, "s")?, num(d, "d")?)
    }
}

/// Sorted chain positions of the two blocks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockIndices {
    pub a: Vec<i64>,
    pub b: Vec<i64>,
}

impl BlockIndices {
    /// The same layout with the roles of A and B exchanged.
    pub fn swapped(&self) -> BlockIndices {
        BlockIndices {
            a: self.b.clone(),
            b: self.a.clone(),
        }
    }
}

/// Lays the blocks out from position 0, leftmost subblock in A.
pub fn block_indices(spec: BlockSpec) -> BlockIndices {
    let n = spec.n();
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    let mut start = 0i64;
    for i in 0..2 * spec.m {
        let target = if i % 2 == 0 { &mut a } else { &mut b };
        target.extend(start..start + spec.s as i64);
        start += (spec.s + spec.d) as i64;
    }
    BlockIndices { a, b }
}

/// Multiplicity of each lag `|i - j|` over all pairs `(i, j)` in `x * y`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LagCounts(BTreeMap<usize, u64>);

impl LagCounts {
    pub fn get(&self, lag: usize) -> u64 {
        self.0.get(&lag).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.0.iter().map(|(&l, &c)| (l, c))
    }

    /// Number of pairs counted.
    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn max_lag(&self) -> Option<usize> {
        self.0.keys().next_back().copied()
    }

    /// `sum_l count(l) * values[l]`. Panics if a lag is outside `values`.
    pub fn weighted_sum(&self, values: &[f64]) -> f64 {
        self.iter().map(|(l, c)| c as f64 * values[l]).sum()
    }
}

pub fn lag_multiset(x: &[i64], y: &[i64]) -> LagCounts {
    let mut counts = BTreeMap::new();
    for &i in x {
        for &j in y {
            *counts.entry(i.abs_diff(j) as usize).or_insert(0) += 1;
        }
    }
    LagCounts(counts)
}
