//! `collective`: parameter sweeps, field grids and self validation for
//! collective-operator entanglement in harmonic chains and Klein-Gordon
//! fields. Emits plot-ready CSV or JSON.
//!
//! Exit codes: 0 success, 1 validation failure, 2 usage or domain error,
//! 3 numerical failure.

mod grid;
mod output;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use collective_core::field::{PropagatorControl, Regularization};
use collective_core::special::SeriesControl;
use collective_core::sweep::{self, FieldGrid, Separation, SweepConfig};
use collective_core::validate::{self, ValidateOptions};
use collective_core::{BlockSpec, Coupling, ErrorKind};

use grid::{IntList, RealList};
use output::{render, Format};

#[derive(Parser)]
#[command(version, about, long_about = None)]
struct Cli {
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Two-point functions g_l, h_l of the infinite chain
    Correlations(CorrelationsArgs),
    /// Collective negativity over a (alpha, m, s, d) grid
    Sweep(SweepArgs),
    /// Smeared Klein-Gordon propagators and window negativity
    Field(FieldArgs),
    /// Run the end-to-end self checks
    Validate(ValidateArgs),
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Write to FILE instead of stdout
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CorrelationsArgs {
    /// Coupling strength, 0 < alpha < 1
    #[arg(long)]
    alpha: f64,

    /// Largest lag
    #[arg(long)]
    l_max: usize,

    /// Add finite-ring columns g_fin, h_fin from an N-site ring (validation only)
    #[arg(long, value_name = "N")]
    oracle_n: Option<usize>,

    /// Hypergeometric series tolerance
    #[arg(long)]
    tol: Option<f64>,

    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// Couplings, comma separated
    #[arg(long, visible_alias = "alphas")]
    alpha: RealList,

    /// Subblocks per block: values and inclusive ranges, e.g. 1..10
    #[arg(long, default_value = "1")]
    m: IntList,

    /// Sites per subblock
    #[arg(long, default_value = "1")]
    s: IntList,

    /// Gap between neighbouring subblocks
    #[arg(long, default_value = "0")]
    d: IntList,

    /// Explicit geometries m:s:d (repeatable); replaces the --m/--s/--d product
    #[arg(long, value_name = "M:S:D", conflicts_with_all = ["m", "s", "d"])]
    spec: Vec<BlockSpec>,

    /// Correlation table size (default: what the geometries need)
    #[arg(long)]
    l_max: Option<usize>,

    /// Add epsilon_oracle from an N-site ring (validation only)
    #[arg(long, value_name = "N")]
    oracle_n: Option<usize>,

    /// Hypergeometric series tolerance
    #[arg(long)]
    tol: Option<f64>,

    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("separation").required(true).args(["r", "ratio"]))]
struct FieldArgs {
    /// Field masses, comma separated
    #[arg(long)]
    mass: RealList,

    /// Window lengths L, comma separated
    #[arg(long)]
    length: RealList,

    /// Center distances r
    #[arg(long)]
    r: Option<RealList>,

    /// Center distances as multiples of L
    #[arg(long)]
    ratio: Option<RealList>,

    /// Sharp momentum cutoff; without it divergent D_pi values are +-inf
    #[arg(long)]
    cutoff: Option<f64>,

    /// Absolute tolerance per propagator
    #[arg(long)]
    tol: Option<f64>,

    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Human,
    Json,
}

#[derive(Args)]
struct ValidateArgs {
    /// Ring size of the oracle check
    #[arg(long, value_name = "N")]
    oracle_n: Option<usize>,

    /// Tolerance of the oracle check
    #[arg(long)]
    tol: Option<f64>,

    /// Fault injection: flip the sign of g_1 before checking
    #[arg(long)]
    corrupt_g1_sign: bool,

    #[arg(long, value_enum, default_value_t = ReportFormat::Human)]
    format: ReportFormat,

    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

fn series_control(tol: Option<f64>) -> Result<SeriesControl> {
    let mut ctl = SeriesControl::default();
    if let Some(tol) = tol {
        ctl.tol = positive(tol, "--tol")?;
    }
    Ok(ctl)
}

fn positive(x: f64, what: &str) -> Result<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(collective_core::Error::Domain(format!("{what} must be > 0, got {x}")).into())
    }
}

fn couplings(alphas: &[f64]) -> Result<Vec<Coupling>> {
    Ok(alphas
        .iter()
        .map(|&a| Coupling::new(a))
        .collect::<collective_core::Result<_>>()?)
}

fn emit(bytes: &[u8], out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, bytes).with_context(|| format!("cannot write {}", path.display()))
        }
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(bytes)?;
            Ok(stdout.flush()?)
        }
    }
}

fn correlations(args: CorrelationsArgs) -> Result<ExitCode> {
    let alpha = Coupling::new(args.alpha)?;
    let rows =
        sweep::correlation_rows(alpha, args.l_max, args.oracle_n, series_control(args.tol)?)?;
    emit(
        &render(&rows, args.output.format)?,
        args.output.out.as_ref(),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn run_sweep(args: SweepArgs) -> Result<ExitCode> {
    let specs = if args.spec.is_empty() {
        let mut specs = Vec::new();
        for &m in &args.m.0 {
            for &s in &args.s.0 {
                for &d in &args.d.0 {
                    specs.push(BlockSpec::new(m, s, d)?);
                }
            }
        }
        specs
    } else {
        args.spec
    };
    let mut config = SweepConfig::new(couplings(&args.alpha.0)?, specs)?;
    config.oracle_n = args.oracle_n;
    config.l_max = args.l_max;
    config.series = series_control(args.tol)?;
    // all rows are computed before anything is written
    let rows = sweep::run_sweep(&config)?;
    emit(
        &render(&rows, args.output.format)?,
        args.output.out.as_ref(),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn field(args: FieldArgs) -> Result<ExitCode> {
    let separations = match (args.r, args.ratio) {
        (Some(r), _) => r.0.into_iter().map(Separation::Absolute).collect(),
        (None, Some(q)) => q.0.into_iter().map(Separation::Relative).collect(),
        (None, None) => unreachable!("clap requires one of --r, --ratio"),
    };
    let regularization = match args.cutoff {
        Some(c) => Regularization::Cutoff(positive(c, "--cutoff")?),
        None => Regularization::None,
    };
    let mut control = PropagatorControl::default();
    if let Some(tol) = args.tol {
        control.tol = positive(tol, "--tol")?;
    }
    let grid = FieldGrid {
        masses: args.mass.0,
        lengths: args.length.0,
        separations,
        regularization,
        control,
    };
    let rows = sweep::run_field_grid(&grid)?;
    emit(
        &render(&rows, args.output.format)?,
        args.output.out.as_ref(),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn human_report(report: &validate::Report) -> String {
    let width = report
        .checks
        .iter()
        .map(|c| c.name.len())
        .max()
        .unwrap_or(0);
    let mut s = String::new();
    for c in &report.checks {
        let verdict = if c.passed { "PASS" } else { "FAIL" };
        s += &format!(
            "{verdict} {:width$}  worst {:.3e} (tol {:.1e})  {}\n",
            c.name, c.worst, c.tolerance, c.detail
        );
    }
    let passed = report.checks.iter().filter(|c| c.passed).count();
    let verdict = if report.passed { "passed" } else { "FAILED" };
    s += &format!(
        "validation {verdict}: {passed}/{} checks\n",
        report.checks.len()
    );
    s
}

fn run_validate(args: ValidateArgs) -> Result<ExitCode> {
    let mut opts = ValidateOptions::default();
    if let Some(n) = args.oracle_n {
        opts.oracle_n = n;
    }
    if let Some(tol) = args.tol {
        opts.oracle_tol = positive(tol, "--tol")?;
    }
    opts.corrupt_g1_sign = args.corrupt_g1_sign;
    let report = validate::run(&opts)?;
    let bytes = match args.format {
        ReportFormat::Human => human_report(&report).into_bytes(),
        ReportFormat::Json => {
            let doc = serde_json::json!({
                "table": "validate",
                "version": output::FORMAT_VERSION,
                "passed": report.passed,
                "checks": report.checks,
            });
            let mut buf = serde_json::to_vec_pretty(&doc)?;
            buf.push(b'\n');
            buf
        }
    };
    emit(&bytes, args.out.as_ref())?;
    Ok(if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

/// 2 for domain errors and anything outside the library (I/O, bad
/// arguments), 3 for numerical failures.
fn exit_code(err: &anyhow::Error) -> u8 {
    match err
        .downcast_ref::<collective_core::Error>()
        .map(|e| e.kind())
    {
        Some(ErrorKind::Numerical) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
        {
            eprintln!("error: cannot start {jobs} worker threads: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match cli.command {
        Command::Correlations(args) => correlations(args),
        Command::Sweep(args) => run_sweep(args),
        Command::Field(args) => field(args),
        Command::Validate(args) => run_validate(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
