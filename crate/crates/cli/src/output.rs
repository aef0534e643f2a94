//! CSV and JSON rendering of result tables.
//!
//! Both formats are produced from the same cell list so they always agree.
//! CSV starts with a `# collective-<table> v<N>` line followed by the fixed
//! header; reals are written with 17 significant digits. JSON documents
//! carry the same table name and version and follow the schemas in
//! `schemas/`. Infinite propagators are `inf`/`-inf` in CSV and `null` in
//! JSON; missing values are empty in CSV and `null` in JSON.

use std::io::Write;

use anyhow::Result;
use clap::ValueEnum;
use serde_json::{json, Map, Value};

use collective_core::sweep::{CorrelationRow, FieldRow, SweepRow};

/// Negativities below this are written as exactly zero.
pub const EPSILON_FLOOR: f64 = 1e-12;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(usize),
    Real(f64),
    /// A negativity degree: floored to zero below [`EPSILON_FLOOR`].
    Epsilon(f64),
    Missing,
}

impl Cell {
    fn opt(x: Option<f64>) -> Cell {
        x.map_or(Cell::Missing, Cell::Real)
    }

    fn opt_epsilon(x: Option<f64>) -> Cell {
        x.map_or(Cell::Missing, Cell::Epsilon)
    }

    fn floored(x: f64) -> f64 {
        if x.abs() < EPSILON_FLOOR {
            0.0
        } else {
            x
        }
    }

    fn csv(self) -> String {
        match self {
            Cell::Int(n) => n.to_string(),
            Cell::Real(x) => format!("{x:.16e}"),
            Cell::Epsilon(x) => format!("{:.16e}", Cell::floored(x)),
            Cell::Missing => String::new(),
        }
    }

    fn json(self) -> Value {
        match self {
            Cell::Int(n) => json!(n),
            // serde_json maps non-finite floats to null
            Cell::Real(x) => json!(x),
            Cell::Epsilon(x) => json!(Cell::floored(x)),
            Cell::Missing => Value::Null,
        }
    }
}

/// A row type with a fixed column layout.
pub trait Record {
    const TABLE: &'static str;
    const HEADER: &'static [&'static str];
    fn cells(&self) -> Vec<Cell>;
}

impl Record for CorrelationRow {
    const TABLE: &'static str = "correlations";
    const HEADER: &'static [&'static str] = &["l", "g", "h", "g_fin", "h_fin"];

    fn cells(&self) -> Vec<Cell> {
        vec![
            Cell::Int(self.l),
            Cell::Real(self.g),
            Cell::Real(self.h),
            Cell::opt(self.g_fin),
            Cell::opt(self.h_fin),
        ]
    }
}

impl Record for SweepRow {
    const TABLE: &'static str = "sweep";
    const HEADER: &'static [&'static str] = &[
        "alpha",
        "m",
        "s",
        "d",
        "n",
        "G",
        "H",
        "G_AB",
        "H_AB",
        "delta1",
        "delta2",
        "epsilon",
        "Delta",
        "epsilon_approx",
        "epsilon_oracle",
    ];

    fn cells(&self) -> Vec<Cell> {
        vec![
            Cell::Real(self.alpha),
            Cell::Int(self.m),
            Cell::Int(self.s),
            Cell::Int(self.d),
            Cell::Int(self.n),
            Cell::Real(self.g_diag),
            Cell::Real(self.h_diag),
            Cell::Real(self.g_cross),
            Cell::Real(self.h_cross),
            Cell::Real(self.delta1),
            Cell::Real(self.delta2),
            Cell::Epsilon(self.epsilon),
            Cell::Real(self.duan),
            // the estimate is deliberately unclamped and unfloored
            Cell::opt(self.epsilon_approx),
            Cell::opt_epsilon(self.epsilon_oracle),
        ]
    }
}

impl Record for FieldRow {
    const TABLE: &'static str = "field";
    const HEADER: &'static [&'static str] = &[
        "m", "L", "r", "D_phi0", "D_pi0", "D_phi_r", "D_pi_r", "epsilon",
    ];

    fn cells(&self) -> Vec<Cell> {
        vec![
            Cell::Real(self.mass),
            Cell::Real(self.length),
            Cell::Real(self.r),
            Cell::Real(self.d_phi0),
            Cell::Real(self.d_pi0),
            Cell::Real(self.d_phi_r),
            Cell::Real(self.d_pi_r),
            Cell::opt_epsilon(self.epsilon),
        ]
    }
}

pub fn render<R: Record>(rows: &[R], format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Csv => render_csv(rows),
        Format::Json => render_json(rows),
    }
}

fn render_csv<R: Record>(rows: &[R]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    writeln!(buf, "# collective-{} v{FORMAT_VERSION}", R::TABLE)?;
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(buf);
    w.write_record(R::HEADER)?;
    for row in rows {
        w.write_record(row.cells().into_iter().map(Cell::csv))?;
    }
    Ok(w.into_inner().map_err(|e| e.into_error())?)
}

fn render_json<R: Record>(rows: &[R]) -> Result<Vec<u8>> {
    let rows: Vec<Value> = rows
        .iter()
        .map(|row| {
            let obj: Map<String, Value> = R::HEADER
                .iter()
                .zip(row.cells())
                .map(|(&k, c)| (k.to_string(), c.json()))
                .collect();
            Value::Object(obj)
        })
        .collect();
    let doc = json!({
        "table": R::TABLE,
        "version": FORMAT_VERSION,
        "columns": R::HEADER,
        "rows": rows,
    });
    let mut buf = serde_json::to_vec_pretty(&doc)?;
    buf.push(b'\n');
    Ok(buf)
}
