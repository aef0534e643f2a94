//! Shared fixtures for the criterion benches.

use collective_core::{BlockSpec, Coupling};

/// Couplings of the plotted chain sweeps.
pub const PLOT_ALPHAS: [f64; 3] = [0.5, 0.9, 0.99];

pub fn couplings() -> Vec<Coupling> {
    PLOT_ALPHAS
        .iter()
        .map(|&a| Coupling::new(a).expect("plot couplings are in range"))
        .collect()
}

/// The periodic-block grid of the sweep benchmarks: `m, s in 1..=10`,
/// `d in 0..=3`.
pub fn periodic_grid() -> Vec<BlockSpec> {
    let mut specs = Vec::new();
    for m in 1..=10 {
        for s in 1..=10 {
            for d in 0..=3 {
                specs.push(BlockSpec::new(m, s, d).expect("grid specs are valid"));
            }
        }
    }
    specs
}
