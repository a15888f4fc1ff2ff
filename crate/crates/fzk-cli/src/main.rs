//! Command-line front end for the fractional solver library.
//!
//! One binary, five subcommands: point evaluation, comparison tables,
//! coefficient dumps, surface sampling, and residual evaluation. Problems
//! arrive as JSON files; results leave as JSON or CSV on stdout or in a
//! file named by --out.

mod problem_file;
mod report;
mod series_json;

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fzk_core::{
    pia_solve_bounded, reference_residual, residual, rpsm_solve_bounded, FracSeries, Method,
    ProblemSpec, SeriesError, SolutionSeries, SolverError, SIZE_GUARD_NODES,
};

use problem_file::{load_problem, ProblemFileError};
use report::{
    build_table, format_surface_csv, format_table_csv, AxisRange, GridSpec, Pairing, ReportError,
    SurfaceSource,
};

#[derive(Parser)]
#[command(
    name = "fzk",
    version,
    about = "Analytic-approximate solvers for fractional dispersive equations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Pia,
    Rpsm,
}

impl MethodArg {
    fn method(self) -> Method {
        match self {
            MethodArg::Pia => Method::Pia,
            MethodArg::Rpsm => Method::Rpsm,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SourceArg {
    Pia,
    Rpsm,
    Reference,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

fn parse_at(text: &str) -> Result<(f64, f64, f64), String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected x,y,t, got '{text}'"));
    }
    let mut v = [0.0; 3];
    for (slot, part) in v.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|e| format!("bad coordinate '{}': {e}", part.trim()))?;
    }
    Ok((v[0], v[1], v[2]))
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one method's series at a single point.
    Solve {
        /// Problem description (JSON file).
        #[arg(long)]
        problem: PathBuf,
        /// Which solver to run.
        #[arg(long, value_enum)]
        method: MethodArg,
        /// Iteration / expansion order.
        #[arg(long, default_value_t = 3)]
        order: u32,
        /// Fractional order of the time derivative, in (0, 1].
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// Evaluation point as x,y,t.
        #[arg(long, value_parser = parse_at)]
        at: (f64, f64, f64),
        /// Output format.
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
        /// Abort if the symbolic series grows past this many nodes.
        #[arg(long, default_value_t = SIZE_GUARD_NODES)]
        node_budget: usize,
    },
    /// Tabulate both methods against the reference over a grid.
    Table {
        /// Problem description (JSON file).
        #[arg(long)]
        problem: PathBuf,
        /// Iteration / expansion order.
        #[arg(long, default_value_t = 3)]
        order: u32,
        /// Alpha columns, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "0.67,0.75,1.0")]
        alphas: Vec<f64>,
        /// Sample axes as "x=...;y=...;t=..." with comma-separated values.
        #[arg(long, default_value = "x=0.1,0.6,0.9;y=0.1,0.6,0.9;t=0.2,0.3,0.4")]
        grid: String,
        /// Keep only points with x = y instead of the full cross product.
        #[arg(long)]
        diag: bool,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Abort if the symbolic series grows past this many nodes.
        #[arg(long, default_value_t = SIZE_GUARD_NODES)]
        node_budget: usize,
    },
    /// Dump one method's series coefficients as JSON.
    Coeffs {
        /// Problem description (JSON file).
        #[arg(long)]
        problem: PathBuf,
        /// Which solver to run.
        #[arg(long, value_enum)]
        method: MethodArg,
        /// Iteration / expansion order.
        #[arg(long, default_value_t = 3)]
        order: u32,
        /// Abort if the symbolic series grows past this many nodes.
        #[arg(long, default_value_t = SIZE_GUARD_NODES)]
        node_budget: usize,
    },
    /// Sample u(x, y) on a uniform grid at a fixed time, as CSV.
    Surface {
        /// Problem description (JSON file).
        #[arg(long)]
        problem: PathBuf,
        /// Which solver to sample, or the closed-form reference.
        #[arg(long, value_enum)]
        method: SourceArg,
        /// Iteration / expansion order.
        #[arg(long, default_value_t = 3)]
        order: u32,
        /// Fractional order of the time derivative, in (0, 1].
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// Time slice to sample.
        #[arg(long)]
        t: f64,
        /// Axis range for both x and y, as lo:hi:points.
        #[arg(long, default_value = "0:1:50")]
        range: String,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Abort if the symbolic series grows past this many nodes.
        #[arg(long, default_value_t = SIZE_GUARD_NODES)]
        node_budget: usize,
    },
    /// Evaluate the equation residual of a solution at a point.
    Residual {
        /// Problem description (JSON file).
        #[arg(long)]
        problem: PathBuf,
        /// Which solution to test: a solver's series, or the closed-form
        /// reference under the classical (alpha = 1) operator.
        #[arg(long, value_enum)]
        method: SourceArg,
        /// Iteration / expansion order (ignored for the reference).
        #[arg(long, default_value_t = 3)]
        order: u32,
        /// Fractional order of the time derivative, in (0, 1].
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// Evaluation point as x,y,t.
        #[arg(long, value_parser = parse_at)]
        at: (f64, f64, f64),
        /// Abort if the symbolic series grows past this many nodes.
        #[arg(long, default_value_t = SIZE_GUARD_NODES)]
        node_budget: usize,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    SizeGuard(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::SizeGuard(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::SizeGuard(m) | CliError::Io(m) => write!(out, "{m}"),
        }
    }
}

impl From<ProblemFileError> for CliError {
    fn from(err: ProblemFileError) -> CliError {
        CliError::Usage(err.to_string())
    }
}

impl From<SolverError> for CliError {
    fn from(err: SolverError) -> CliError {
        match err {
            SolverError::SizeGuard { .. } => CliError::SizeGuard(err.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<ReportError> for CliError {
    fn from(err: ReportError) -> CliError {
        match err {
            ReportError::Solver(solver) => solver.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<SeriesError> for CliError {
    fn from(err: SeriesError) -> CliError {
        CliError::Usage(err.to_string())
    }
}

impl From<fzk_core::ProblemError> for CliError {
    fn from(err: fzk_core::ProblemError) -> CliError {
        CliError::Usage(err.to_string())
    }
}

impl From<fzk_core::EvalError> for CliError {
    fn from(err: fzk_core::EvalError) -> CliError {
        CliError::Usage(err.to_string())
    }
}

fn check_alpha(alpha: f64) -> Result<(), CliError> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "alpha = {alpha} outside the admissible range (0, 1]"
        )))
    }
}

fn solve_with(
    method: Method,
    spec: &ProblemSpec,
    order: u32,
    node_budget: usize,
) -> Result<SolutionSeries, SolverError> {
    match method {
        Method::Pia => pia_solve_bounded(spec, order, node_budget),
        Method::Rpsm => rpsm_solve_bounded(spec, order, node_budget),
    }
}

/// Copies a series into a wider truncation window so that the residual
/// operator keeps every term the squaring produces.
fn widen(series: &FracSeries) -> Result<FracSeries, SeriesError> {
    let mut out = FracSeries::new(series.max_order() * 2 + 1);
    for (exp, coeff) in series.terms() {
        out.insert_add(*exp, coeff.clone())?;
    }
    Ok(out)
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(format!("writing stdout: {e}"))),
    }
}

fn point_record(
    method: &str,
    order: Option<u32>,
    alpha: f64,
    at: (f64, f64, f64),
    key: &str,
    value: f64,
) -> String {
    let mut record = serde_json::Map::new();
    record.insert("method".into(), method.into());
    if let Some(order) = order {
        record.insert("order".into(), order.into());
    }
    record.insert("alpha".into(), alpha.into());
    record.insert("x".into(), at.0.into());
    record.insert("y".into(), at.1.into());
    record.insert("t".into(), at.2.into());
    record.insert(key.into(), value.into());
    let mut text = serde_json::to_string_pretty(&serde_json::Value::Object(record))
        .expect("records are plain scalars");
    text.push('\n');
    text
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Solve {
            problem,
            method,
            order,
            alpha,
            at,
            format,
            node_budget,
        } => {
            check_alpha(alpha)?;
            let spec = load_problem(&problem)?;
            let solution = solve_with(method.method(), &spec, order, node_budget)?;
            let value = solution.eval_at(at.0, at.1, at.2, alpha)?;
            let text = match format {
                FormatArg::Json => point_record(
                    solution.method.name(),
                    Some(order),
                    alpha,
                    at,
                    "value",
                    value,
                ),
                FormatArg::Csv => format!(
                    "method,order,alpha,x,y,t,value\n{},{},{},{},{},{},{value}\n",
                    solution.method.name(),
                    order,
                    alpha,
                    at.0,
                    at.1,
                    at.2,
                ),
            };
            emit(None, &text)
        }
        Command::Table {
            problem,
            order,
            alphas,
            grid,
            diag,
            out,
            node_budget,
        } => {
            let spec = load_problem(&problem)?;
            let grid = GridSpec::parse(&grid, &alphas)?;
            let pairing = if diag { Pairing::Diagonal } else { Pairing::Cross };
            let rows = build_table(&spec, order, &grid, pairing, node_budget)?;
            let csv = format_table_csv(&rows)?;
            emit(out.as_ref(), &csv)
        }
        Command::Coeffs {
            problem,
            method,
            order,
            node_budget,
        } => {
            let spec = load_problem(&problem)?;
            let solution = solve_with(method.method(), &spec, order, node_budget)?;
            emit(None, &series_json::solution_to_json(&solution))
        }
        Command::Surface {
            problem,
            method,
            order,
            alpha,
            t,
            range,
            out,
            node_budget,
        } => {
            check_alpha(alpha)?;
            if t < 0.0 {
                return Err(CliError::Usage(format!("t = {t} is negative")));
            }
            let spec = load_problem(&problem)?;
            let axis = AxisRange::parse(&range)?;
            let source = match method {
                SourceArg::Pia => SurfaceSource::Solver(Method::Pia),
                SourceArg::Rpsm => SurfaceSource::Solver(Method::Rpsm),
                SourceArg::Reference => SurfaceSource::Reference,
            };
            let csv =
                format_surface_csv(&spec, source, order, alpha, axis, axis, t, node_budget)?;
            emit(out.as_ref(), &csv)
        }
        Command::Residual {
            problem,
            method,
            order,
            alpha,
            at,
            node_budget,
        } => {
            check_alpha(alpha)?;
            let spec = load_problem(&problem)?;
            let text = match method {
                SourceArg::Reference => {
                    if alpha != 1.0 {
                        return Err(CliError::Usage(format!(
                            "the reference residual uses the classical time \
                             derivative; alpha must be 1, got {alpha}"
                        )));
                    }
                    let res = reference_residual(&spec)?;
                    let value = res.evaluate(&spec.bindings_at(at.0, at.1, at.2))?;
                    point_record("reference", None, alpha, at, "residual", value)
                }
                SourceArg::Pia | SourceArg::Rpsm => {
                    let method = if method == SourceArg::Pia {
                        Method::Pia
                    } else {
                        Method::Rpsm
                    };
                    let solution = solve_with(method, &spec, order, node_budget)?;
                    let res = residual(&spec, &widen(&solution.series)?)?;
                    let value = res.eval(&spec.bindings_at(at.0, at.1, at.2), alpha)?;
                    point_record(method.name(), Some(order), alpha, at, "residual", value)
                }
            };
            emit(None, &text)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.code())
        }
    }
}
