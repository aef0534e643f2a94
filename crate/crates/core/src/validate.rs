//! End-to-end self checks: the closed-form correlations against the finite
//! ring, the collective map against the symplectic form, the negativity
//! against operator rescalings, and the field null result.

use serde::Serialize;

use crate::blocks::{block_indices, BlockSpec};
use crate::entanglement::{covariance_with, evaluate, negativity, Normalization};
use crate::error::Result;
use crate::field::{field_covariance, FieldRegionSpec, PropagatorControl, Regularization};
use crate::lattice::{
    correlation_table, finite_correlations, CorrelationTable, Coupling, DEFAULT_ORACLE_N,
};
use crate::symplectic::{collective_symplectic, determinant, symplectic_defect};

/// Couplings of the oracle check.
pub const ORACLE_ALPHAS: [f64; 5] = [0.1, 0.3, 0.5, 0.9, 0.99];
/// Largest lag of the oracle check.
pub const ORACLE_L_MAX: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidateOptions {
    pub oracle_n: usize,
    /// Largest accepted `|g_inf - g_fin|`, `|h_inf - h_fin|`.
    pub oracle_tol: f64,
    /// Fault injection: flip the sign of `g_1` in the closed-form tables.
    pub corrupt_g1_sign: bool,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions {
            oracle_n: DEFAULT_ORACLE_N,
            oracle_tol: 1e-8,
            corrupt_g1_sign: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Largest observed deviation (meaning depends on the check).
    pub worst: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, worst: f64, tolerance: f64, detail: String) -> Self {
        Check {
            name,
            passed: worst <= tolerance,
            worst,
            tolerance,
            detail,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub passed: bool,
    pub checks: Vec<Check>,
}

/// Runs every check. Numerical failures inside a check are reported as
/// errors, not as failed checks.
pub fn run(opts: &ValidateOptions) -> Result<Report> {
    let tables = ORACLE_ALPHAS
        .iter()
        .map(|&a| closed_form_table(Coupling::new(a)?, opts))
        .collect::<Result<Vec<_>>>()?;
    let checks = vec![
        oracle_equivalence(&tables, opts)?,
        correlation_signs(&tables),
        symplectic()?,
        rescaling_invariance()?,
        exchange_symmetry()?,
        periodic_cutoff()?,
        field_null_result()?,
    ];
    Ok(Report {
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

fn closed_form_table(alpha: Coupling, opts: &ValidateOptions) -> Result<CorrelationTable> {
    let table = correlation_table(alpha, ORACLE_L_MAX)?;
    if !opts.corrupt_g1_sign {
        return Ok(table);
    }
    let mut g = table.g().to_vec();
    g[1] = -g[1];
    CorrelationTable::from_parts(alpha, g, table.h().to_vec())
}

fn oracle_equivalence(tables: &[CorrelationTable], opts: &ValidateOptions) -> Result<Check> {
    let mut worst = (0.0, 0.0, 0);
    for table in tables {
        let (g, h) = finite_correlations(table.alpha(), ORACLE_L_MAX, opts.oracle_n)?;
        for l in 0..=ORACLE_L_MAX {
            let dev = (table.g()[l] - g[l]).abs().max((table.h()[l] - h[l]).abs());
            if dev > worst.0 {
                worst = (dev, table.alpha().value(), l);
            }
        }
    }
    Ok(Check::new(
        "oracle_equivalence",
        worst.0,
        opts.oracle_tol,
        format!(
            "closed form vs {}-site ring, l <= {ORACLE_L_MAX}; worst at alpha = {}, l = {}",
            opts.oracle_n, worst.1, worst.2
        ),
    ))
}

fn correlation_signs(tables: &[CorrelationTable]) -> Check {
    let bad: Vec<String> = tables
        .iter()
        .flat_map(|t| {
            let a = t.alpha().value();
            t.sign_violations()
                .into_iter()
                .map(move |l| format!("alpha = {a}, l = {l}"))
        })
        .collect();
    let detail = if bad.is_empty() {
        "g_l > 0, h_0 > 0, h_l < 0 and g_0 h_0 >= 1/4 everywhere".to_string()
    } else {
        format!("violations: {}", bad.join("; "))
    };
    Check::new("correlation_signs", bad.len() as f64, 0.0, detail)
}

fn symplectic() -> Result<Check> {
    let cases = [
        (8, "1:2:1"),
        (8, "2:1:0"),
        (8, "2:1:1"),
        (12, "2:2:0"),
        (16, "3:1:2"),
        (10, "1:3:1"),
    ];
    let mut worst: f64 = 0.0;
    for (sites, spec) in cases {
        let spec: BlockSpec = spec.parse()?;
        let s = collective_symplectic(sites, spec)?;
        worst = worst
            .max(symplectic_defect(&s))
            .max((determinant(&s) - 1.0).norm());
    }
    Ok(Check::new(
        "symplectic",
        worst,
        1e-12,
        format!(
            "max of |S^T Omega S - Omega| and |det S - 1| over {} rings",
            cases.len()
        ),
    ))
}

fn chain_grid() -> Result<Vec<(CorrelationTable, Vec<BlockSpec>)>> {
    let specs: Vec<BlockSpec> = [
        "1:1:0", "1:4:0", "1:3:1", "4:1:0", "3:2:0", "2:3:1", "5:2:2", "6:1:3",
    ]
    .iter()
    .map(|s| s.parse())
    .collect::<Result<_>>()?;
    let l_max = specs.iter().map(|s| s.max_lag()).max().unwrap_or(1);
    [0.5, 0.9, 0.99]
        .iter()
        .map(|&a| Ok((correlation_table(Coupling::new(a)?, l_max)?, specs.clone())))
        .collect()
}

fn relative(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn rescaling_invariance() -> Result<Check> {
    let mut worst: f64 = 0.0;
    for (table, specs) in chain_grid()? {
        for spec in specs {
            let idx = block_indices(spec);
            let base = evaluate(&table, spec)?.epsilon;
            for norm in Normalization::ALL {
                let cov = covariance_with(&table, &idx, norm)?;
                worst = worst.max(relative(base, negativity(cov)?.epsilon));
                for c in [0.25, 3.0, 1.0 / 7.0] {
                    let eps_c = negativity(cov.rescaled(c, 1.0 / c))?.epsilon;
                    worst = worst.max(relative(base, eps_c));
                }
            }
        }
    }
    Ok(Check::new(
        "rescaling_invariance",
        worst,
        1e-14,
        "relative change of epsilon across 1/sqrt(n), 1 and 1/n prefactors and reciprocal Q/P scaling".into(),
    ))
}

fn exchange_symmetry() -> Result<Check> {
    let mut worst: f64 = 0.0;
    for (table, specs) in chain_grid()? {
        for spec in specs {
            let idx = block_indices(spec);
            let ab = negativity(covariance_with(&table, &idx, Normalization::Unitary)?)?.epsilon;
            let ba = negativity(covariance_with(
                &table,
                &idx.swapped(),
                Normalization::Unitary,
            )?)?
            .epsilon;
            worst = worst.max(relative(ab, ba));
        }
    }
    Ok(Check::new(
        "exchange_symmetry",
        worst,
        1e-14,
        "relative change of epsilon when A and B swap roles".into(),
    ))
}

fn periodic_cutoff() -> Result<Check> {
    let table = correlation_table(Coupling::new(0.99)?, BlockSpec::new(6, 4, 8)?.max_lag())?;
    let mut entangled = Vec::new();
    for d in 3..=8 {
        for m in 1..=6 {
            for s in 1..=4 {
                let spec = BlockSpec::new(m, s, d)?;
                if evaluate(&table, spec)?.is_entangled() {
                    entangled.push(spec.to_string());
                }
            }
        }
    }
    let detail = if entangled.is_empty() {
        "no entanglement for d >= 3 at alpha = 0.99".to_string()
    } else {
        format!("entangled: {}", entangled.join(", "))
    };
    Ok(Check::new(
        "periodic_cutoff",
        entangled.len() as f64,
        0.0,
        detail,
    ))
}

fn field_null_result() -> Result<Check> {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for mass in [0.1, 1.0, 10.0] {
        for length in [0.5, 1.0, 2.0] {
            for ratio in [1.1, 2.0, 5.0] {
                let spec = FieldRegionSpec::new(mass, length, ratio * length)?;
                let cov =
                    field_covariance(spec, Regularization::None, PropagatorControl::default())?;
                worst = worst.max(negativity(cov)?.epsilon);
                count += 1;
            }
        }
    }
    Ok(Check::new(
        "field_null_result",
        worst,
        0.0,
        format!("largest epsilon over {count} disjoint window pairs"),
    ))
}
