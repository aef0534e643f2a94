//! Grid evaluation behind the CLI.
//!
//! Every grid point is independent, so points are evaluated in parallel and
//! the rows are sorted before they are returned. The result does not depend
//! on the number of worker threads: each row is computed by the same
//! sequence of floating-point operations whichever thread runs it.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::blocks::BlockSpec;
use crate::entanglement::{
    approx_negativity, evaluate, negativity, required_l_max, CollectiveCovariance,
    EntanglementResult,
};
use crate::error::{Error, Result};
use crate::field::{
    regularized_propagator, FieldRegionSpec, PropagatorControl, Quadrature, Regularization,
};
use crate::lattice::{correlation_table_with, finite_correlations, CorrelationTable, Coupling};
use crate::special::SeriesControl;

/// A `(coupling x geometry)` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub alphas: Vec<Coupling>,
    pub specs: Vec<BlockSpec>,
    /// Chain length of the finite-ring cross-check, if requested.
    pub oracle_n: Option<usize>,
    /// Correlation table size; defaults to what the geometries need.
    pub l_max: Option<usize>,
    pub series: SeriesControl,
}

impl SweepConfig {
    pub fn new(alphas: Vec<Coupling>, specs: Vec<BlockSpec>) -> Result<Self> {
        if alphas.is_empty() || specs.is_empty() {
            return Err(Error::domain(
                "sweep grid must have at least one coupling and one geometry",
            ));
        }
        Ok(SweepConfig {
            alphas,
            specs,
            oracle_n: None,
            l_max: None,
            series: SeriesControl::default(),
        })
    }

    /// Table size: the override if given, else the largest lag any
    /// geometry needs; at least 1 so the nearest-neighbour estimate is
    /// always available. A too-small override surfaces as
    /// [`Error::LagOutOfRange`].
    pub fn l_max(&self) -> usize {
        self.l_max
            .unwrap_or_else(|| {
                self.specs
                    .iter()
                    .map(|&s| required_l_max(s))
                    .max()
                    .unwrap_or(0)
            })
            .max(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub alpha: f64,
    pub m: usize,
    pub s: usize,
    pub d: usize,
    pub n: usize,
    pub g_diag: f64,
    pub h_diag: f64,
    pub g_cross: f64,
    pub h_cross: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub epsilon: f64,
    pub duan: f64,
    /// Nearest-neighbour estimate, adjacent blocks (`d = 0`) only.
    pub epsilon_approx: Option<f64>,
    /// Same negativity from finite-ring correlations, when requested.
    pub epsilon_oracle: Option<f64>,
}

impl SweepRow {
    fn new(spec: BlockSpec, table: &CorrelationTable, res: &EntanglementResult) -> Self {
        let epsilon_approx = (spec.d() == 0).then(|| {
            let (g, h) = (table.g(), table.h());
            approx_negativity(g[0], g[1], h[0], h[1], spec.n(), spec.m())
        });
        SweepRow {
            alpha: table.alpha().value(),
            m: spec.m(),
            s: spec.s(),
            d: spec.d(),
            n: spec.n(),
            g_diag: res.cov.g_diag(),
            h_diag: res.cov.h_diag(),
            g_cross: res.cov.g_cross(),
            h_cross: res.cov.h_cross(),
            delta1: res.delta1,
            delta2: res.delta2,
            epsilon: res.epsilon,
            duan: res.duan,
            epsilon_approx,
            epsilon_oracle: None,
        }
    }

    fn key(&self) -> (f64, usize, usize, usize) {
        (self.alpha, self.m, self.s, self.d)
    }
}

fn cmp_rows(x: &SweepRow, y: &SweepRow) -> std::cmp::Ordering {
    let (a, b) = (x.key(), y.key());
    a.0.total_cmp(&b.0)
        .then(a.1.cmp(&b.1))
        .then(a.2.cmp(&b.2))
        .then(a.3.cmp(&b.3))
}

/// Correlation tables for each distinct coupling in the grid.
fn tables(
    config: &SweepConfig,
    build: impl Fn(Coupling) -> Result<CorrelationTable> + Sync,
) -> Result<BTreeMap<u64, CorrelationTable>> {
    let mut alphas = config.alphas.clone();
    alphas.sort_by(|a, b| a.value().total_cmp(&b.value()));
    alphas.dedup();
    let built = alphas
        .par_iter()
        .map(|&a| build(a))
        .collect::<Result<Vec<_>>>()?;
    Ok(built
        .into_iter()
        .map(|t| (t.alpha().value().to_bits(), t))
        .collect())
}

/// Evaluates the whole grid; fails if any point fails. Duplicate grid
/// points are reported once.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    let l_max = config.l_max();
    let infinite = tables(config, |a| correlation_table_with(a, l_max, config.series))?;
    let finite = match config.oracle_n {
        Some(n) => Some(tables(config, |a| {
            let (g, h) = finite_correlations(a, l_max, n)?;
            CorrelationTable::from_parts(a, g, h)
        })?),
        None => None,
    };

    let mut specs = config.specs.clone();
    specs.sort();
    specs.dedup();
    let points: Vec<(&CorrelationTable, BlockSpec)> = infinite
        .values()
        .flat_map(|t| specs.iter().map(move |&s| (t, s)))
        .collect();

    let mut rows = points
        .par_iter()
        .map(|&(table, spec)| {
            let mut row = SweepRow::new(spec, table, &evaluate(table, spec)?);
            if let Some(finite) = &finite {
                let oracle = &finite[&table.alpha().value().to_bits()];
                row.epsilon_oracle = Some(evaluate(oracle, spec)?.epsilon);
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(cmp_rows);
    Ok(rows)
}

/// One correlation-table row; the finite-ring columns are filled when an
/// oracle size is given.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationRow {
    pub l: usize,
    pub g: f64,
    pub h: f64,
    pub g_fin: Option<f64>,
    pub h_fin: Option<f64>,
}

pub fn correlation_rows(
    alpha: Coupling,
    l_max: usize,
    oracle_n: Option<usize>,
    series: SeriesControl,
) -> Result<Vec<CorrelationRow>> {
    let table = correlation_table_with(alpha, l_max, series)?;
    let finite = oracle_n
        .map(|n| finite_correlations(alpha, l_max, n))
        .transpose()?;
    Ok((0..=l_max)
        .map(|l| CorrelationRow {
            l,
            g: table.g()[l],
            h: table.h()[l],
            g_fin: finite.as_ref().map(|(g, _)| g[l]),
            h_fin: finite.as_ref().map(|(_, h)| h[l]),
        })
        .collect())
}

/// Grid of field windows: every mass x length x separation combination.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid {
    pub masses: Vec<f64>,
    pub lengths: Vec<f64>,
    pub separations: Vec<Separation>,
    pub regularization: Regularization,
    pub control: PropagatorControl,
}

/// Center distance given directly or as a multiple of the window length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Separation {
    Absolute(f64),
    Relative(f64),
}

impl Separation {
    fn resolve(self, length: f64) -> f64 {
        match self {
            Separation::Absolute(r) => r,
            Separation::Relative(q) => q * length,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldRow {
    pub mass: f64,
    pub length: f64,
    pub r: f64,
    pub d_phi0: f64,
    pub d_pi0: f64,
    pub d_phi_r: f64,
    pub d_pi_r: f64,
    /// Defined for disjoint windows (`r > L`) only.
    pub epsilon: Option<f64>,
}

/// Evaluates the field grid; divergent momentum propagators are reported
/// as signed infinities (or cut off, under [`Regularization::Cutoff`]).
pub fn run_field_grid(grid: &FieldGrid) -> Result<Vec<FieldRow>> {
    if grid.masses.is_empty() || grid.lengths.is_empty() || grid.separations.is_empty() {
        return Err(Error::domain(
            "field grid must be non-empty in mass, length and separation",
        ));
    }
    let mut points = Vec::new();
    for &mass in &grid.masses {
        for &length in &grid.lengths {
            for &sep in &grid.separations {
                let r = sep.resolve(length);
                points.push(FieldRegionSpec::new(mass, length, r)?);
            }
        }
    }
    let (reg, ctl) = (grid.regularization, grid.control);
    let mut rows = points
        .par_iter()
        .map(|spec| {
            let (m, l, r) = (spec.mass(), spec.length(), spec.separation());
            let at = |kind, r| regularized_propagator(kind, m, l, r, reg, ctl);
            let cov = CollectiveCovariance::new(
                at(Quadrature::Field, 0.0)?,
                at(Quadrature::Momentum, 0.0)?,
                at(Quadrature::Field, r)?,
                at(Quadrature::Momentum, r)?,
            );
            let epsilon = if spec.is_disjoint() {
                Some(negativity(cov)?.epsilon)
            } else {
                None
            };
            Ok(FieldRow {
                mass: m,
                length: l,
                r,
                d_phi0: cov.g_diag(),
                d_pi0: cov.h_diag(),
                d_phi_r: cov.g_cross(),
                d_pi_r: cov.h_cross(),
                epsilon,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|x, y| {
        x.mass
            .total_cmp(&y.mass)
            .then(x.length.total_cmp(&y.length))
            .then(x.r.total_cmp(&y.r))
    });
    rows.dedup();
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alphas(xs: &[f64]) -> Vec<Coupling> {
        xs.iter().map(|&a| Coupling::new(a).unwrap()).collect()
    }

    fn specs(xs: &[&str]) -> Vec<BlockSpec> {
        xs.iter().map(|s| s.parse().unwrap()).collect()
    }

    #[test]
    fn rows_are_sorted_and_deduplicated() {
        let cfg = SweepConfig::new(
            alphas(&[0.9, 0.5, 0.9]),
            specs(&["2:1:0", "1:1:1", "1:1:0", "1:1:0"]),
        )
        .unwrap();
        let rows = run_sweep(&cfg).unwrap();
        let keys: Vec<_> = rows.iter().map(|r| (r.alpha, r.m, r.s, r.d)).collect();
        assert_eq!(
            keys,
            vec![
                (0.5, 1, 1, 0),
                (0.5, 1, 1, 1),
                (0.5, 2, 1, 0),
                (0.9, 1, 1, 0),
                (0.9, 1, 1, 1),
                (0.9, 2, 1, 0)
            ]
        );
    }

    #[test]
    fn approximation_only_for_adjacent_blocks() {
        let cfg = SweepConfig::new(alphas(&[0.3]), specs(&["4:1:0", "4:1:1"])).unwrap();
        let rows = run_sweep(&cfg).unwrap();
        assert!(rows[0].epsilon_approx.is_some());
        assert!(rows[1].epsilon_approx.is_none());
    }

    #[test]
    fn identical_across_thread_counts() {
        let cfg = SweepConfig::new(
            alphas(&[0.5, 0.99]),
            (1..=6).map(|n| BlockSpec::new(n, 2, 1).unwrap()).collect(),
        )
        .unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| run_sweep(&cfg).unwrap())
        };
        let one = run(1);
        assert_eq!(one, run(4));
        assert_eq!(one, run(7));
    }

    #[test]
    fn oracle_column_tracks_infinite_chain() {
        let mut cfg = SweepConfig::new(alphas(&[0.9]), specs(&["3:1:0"])).unwrap();
        cfg.oracle_n = Some(1 << 16);
        let row = run_sweep(&cfg).unwrap()[0];
        assert!((row.epsilon_oracle.unwrap() - row.epsilon).abs() < 1e-8);
    }

    #[test]
    fn field_rows_mark_overlap_and_divergence() {
        let grid = FieldGrid {
            masses: vec![1.0],
            lengths: vec![1.0],
            separations: vec![
                Separation::Absolute(0.0),
                Separation::Relative(1.0),
                Separation::Absolute(2.0),
            ],
            regularization: Regularization::None,
            control: PropagatorControl::default(),
        };
        let rows = run_field_grid(&grid).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0].epsilon, None);
        assert_eq!(rows[0].d_pi_r, f64::INFINITY);
        assert_eq!(rows[1].d_pi_r, f64::NEG_INFINITY);
        assert_eq!(rows[2].epsilon, Some(0.0));
        assert!(rows[2].d_pi_r.is_finite());
    }

    #[test]
    fn empty_grids_are_rejected() {
        assert!(SweepConfig::new(vec![], specs(&["1:1:0"])).is_err());
        assert!(SweepConfig::new(alphas(&[0.5]), vec![]).is_err());
    }
}
