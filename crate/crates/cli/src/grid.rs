//! Grid-valued command-line arguments.
//!
//! Integer axes accept comma-separated items, each a single value or an
//! inclusive range `a..b` (`1..4` is 1, 2, 3, 4). Real axes accept
//! comma-separated values.

use std::str::FromStr;

use anyhow::{bail, Context, Result};

/// Inclusive integer ranges and single values, e.g. `1,3..5`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntList(pub Vec<usize>);

impl FromStr for IntList {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut out = Vec::new();
        for item in s.split(',').map(str::trim) {
            if let Some((lo, hi)) = item.split_once("..") {
                let lo: usize = lo
                    .trim()
                    .parse()
                    .with_context(|| format!("bad range start in {item:?}"))?;
                let hi: usize = hi
                    .trim()
                    .trim_start_matches('=')
                    .parse()
                    .with_context(|| format!("bad range end in {item:?}"))?;
                if hi < lo {
                    bail!("empty range {item:?}");
                }
                out.extend(lo..=hi);
            } else {
                out.push(
                    item.parse()
                        .with_context(|| format!("bad integer {item:?}"))?,
                );
            }
        }
        Ok(IntList(out))
    }
}

/// Comma-separated reals, e.g. `0.5,0.9,0.99`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealList(pub Vec<f64>);

impl FromStr for RealList {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split(',')
            .map(str::trim)
            .map(|item| {
                let x: f64 = item
                    .parse()
                    .with_context(|| format!("bad number {item:?}"))?;
                if !x.is_finite() {
                    bail!("non-finite value {item:?}");
                }
                Ok(x)
            })
            .collect::<Result<_>>()
            .map(RealList)
    }
}
