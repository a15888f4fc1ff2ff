//! Grid evaluation, comparison tables against the reference solution, and
//! figure-data emission.
//!
//! A table run solves each method once; the solutions are symbolic in
//! alpha, so every requested alpha column is just another evaluation of
//! the same series. Errors are recomputed from the emitted values rather
//! than stored, so a printed row is self-consistent by construction.

use fzk_core::{
    pia_solve_bounded, reference_eval, rpsm_solve_bounded, Method, ProblemSpec, SolutionSeries,
    SolverError,
};

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("grid: {0}")]
    Grid(String),
    #[error("no rows to emit")]
    EmptyRows,
    #[error("error columns need a problem with a reference solution")]
    MissingReference,
    #[error("{0}")]
    Solver(SolverError),
    #[error("{0}")]
    Series(fzk_core::SeriesError),
    #[error("{0}")]
    Problem(fzk_core::ProblemError),
}

impl From<SolverError> for ReportError {
    fn from(err: SolverError) -> ReportError {
        ReportError::Solver(err)
    }
}

impl From<fzk_core::SeriesError> for ReportError {
    fn from(err: fzk_core::SeriesError) -> ReportError {
        ReportError::Series(err)
    }
}

impl From<fzk_core::ProblemError> for ReportError {
    fn from(err: fzk_core::ProblemError) -> ReportError {
        ReportError::Problem(err)
    }
}

/// Sample points for a table: a cross product of axes plus the alpha
/// columns to evaluate.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub ts: Vec<f64>,
    pub alphas: Vec<f64>,
}

fn parse_values(axis: &str, text: &str) -> Result<Vec<f64>, ReportError> {
    let values: Result<Vec<f64>, _> = text.split(',').map(|v| v.trim().parse::<f64>()).collect();
    let values = values.map_err(|e| ReportError::Grid(format!("axis {axis}: {e}")))?;
    if values.is_empty() {
        return Err(ReportError::Grid(format!("axis {axis} is empty")));
    }
    Ok(values)
}

impl GridSpec {
    /// Parses the "x=0.1,0.6,0.9;y=0.1,0.6,0.9;t=0.2,0.3,0.4" form.
    pub fn parse(grid: &str, alphas: &[f64]) -> Result<GridSpec, ReportError> {
        let (mut xs, mut ys, mut ts) = (None, None, None);
        for part in grid.split(';') {
            let (axis, values) = part
                .split_once('=')
                .ok_or_else(|| ReportError::Grid(format!("expected axis=values, got '{part}'")))?;
            let slot = match axis.trim() {
                "x" => &mut xs,
                "y" => &mut ys,
                "t" => &mut ts,
                other => return Err(ReportError::Grid(format!("unknown axis '{other}'"))),
            };
            if slot.is_some() {
                return Err(ReportError::Grid(format!("axis '{}' given twice", axis.trim())));
            }
            *slot = Some(parse_values(axis.trim(), values)?);
        }
        let missing = |axis: &str| ReportError::Grid(format!("axis {axis} is missing"));
        let spec = GridSpec {
            xs: xs.ok_or_else(|| missing("x"))?,
            ys: ys.ok_or_else(|| missing("y"))?,
            ts: ts.ok_or_else(|| missing("t"))?,
            alphas: normalized_alphas(alphas)?,
        };
        if let Some(t) = spec.ts.iter().find(|t| **t < 0.0) {
            return Err(ReportError::Grid(format!("t = {t} is negative")));
        }
        Ok(spec)
    }
}

/// Sorts, deduplicates, and range-checks the alpha columns.
fn normalized_alphas(alphas: &[f64]) -> Result<Vec<f64>, ReportError> {
    if alphas.is_empty() {
        return Err(ReportError::Grid("no alpha columns requested".into()));
    }
    if let Some(a) = alphas.iter().find(|a| !(0.0 < **a && **a <= 1.0)) {
        return Err(ReportError::Grid(format!(
            "alpha = {a} outside the admissible range (0, 1]"
        )));
    }
    let mut sorted = alphas.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    sorted.dedup();
    Ok(sorted)
}

/// One table row: both method values per alpha column, plus the reference
/// value when the alpha = 1 comparison is requested.
#[derive(Debug, Clone)]
pub struct TableRow {
    pub x: f64,
    pub y: f64,
    pub t: f64,
    /// (alpha, pia value, rpsm value), in the grid's alpha order.
    pub values: Vec<(f64, f64, f64)>,
    pub reference: Option<f64>,
}

impl TableRow {
    fn alpha_one(&self) -> Option<&(f64, f64, f64)> {
        self.values.iter().find(|(a, _, _)| *a == 1.0)
    }

    /// |pia(alpha=1) - reference|, recomputed from the stored values.
    pub fn pia_error(&self) -> Option<f64> {
        Some((self.alpha_one()?.1 - self.reference?).abs())
    }

    /// |rpsm(alpha=1) - reference|, recomputed from the stored values.
    pub fn rpsm_error(&self) -> Option<f64> {
        Some((self.alpha_one()?.2 - self.reference?).abs())
    }
}

/// How the x and y axes combine into sample points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pairing {
    /// Every (x, y) combination.
    Cross,
    /// Only combinations with x = y.
    Diagonal,
}

/// Runs both solvers once and evaluates them over the grid. Reference and
/// error columns appear when alpha = 1 is among the columns; that requires
/// the problem to carry a reference solution.
pub fn build_table(
    spec: &ProblemSpec,
    order: u32,
    grid: &GridSpec,
    pairing: Pairing,
    node_limit: usize,
) -> Result<Vec<TableRow>, ReportError> {
    let with_reference = grid.alphas.contains(&1.0);
    if with_reference && spec.reference.is_none() {
        return Err(ReportError::MissingReference);
    }
    let pia = pia_solve_bounded(spec, order, node_limit)?;
    let rpsm = rpsm_solve_bounded(spec, order, node_limit)?;
    let mut rows = Vec::new();
    for &x in &grid.xs {
        for &y in &grid.ys {
            if pairing == Pairing::Diagonal && x != y {
                continue;
            }
            for &t in &grid.ts {
                let mut values = Vec::with_capacity(grid.alphas.len());
                for &alpha in &grid.alphas {
                    values.push((alpha, pia.eval_at(x, y, t, alpha)?, rpsm.eval_at(x, y, t, alpha)?));
                }
                let reference = if with_reference {
                    Some(reference_eval(spec, &spec.bindings_at(x, y, t))?)
                } else {
                    None
                };
                rows.push(TableRow {
                    x,
                    y,
                    t,
                    values,
                    reference,
                });
            }
        }
    }
    Ok(rows)
}

/// Scientific notation with 6 significant digits, the table's precision.
pub fn sci(v: f64) -> String {
    format!("{v:.5e}")
}

/// Renders rows as CSV: a header line, then one line per row, columns
/// x, y, t, per-alpha value pairs in ascending alpha order, then the
/// reference and both recomputed absolute errors when present.
pub fn format_table_csv(rows: &[TableRow]) -> Result<String, ReportError> {
    let first = rows.first().ok_or(ReportError::EmptyRows)?;
    let mut header = vec!["x".to_string(), "y".to_string(), "t".to_string()];
    for (alpha, _, _) in &first.values {
        header.push(format!("pia_{alpha}"));
        header.push(format!("rpsm_{alpha}"));
    }
    if first.reference.is_some() {
        header.extend(["reference".into(), "pia_error".into(), "rpsm_error".into()]);
    }
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let mut cells = vec![sci(row.x), sci(row.y), sci(row.t)];
        for (_, pia, rpsm) in &row.values {
            cells.push(sci(*pia));
            cells.push(sci(*rpsm));
        }
        if let Some(reference) = row.reference {
            cells.push(sci(reference));
            cells.push(sci(row.pia_error().expect("alpha one present")));
            cells.push(sci(row.rpsm_error().expect("alpha one present")));
        }
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Ok(out)
}

/// What a surface samples: one of the solvers or the reference solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfaceSource {
    Solver(Method),
    Reference,
}

/// A uniform n-point axis from lo to hi inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisRange {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl AxisRange {
    /// Parses the "lo:hi:points" form; needs at least two points.
    pub fn parse(text: &str) -> Result<AxisRange, ReportError> {
        let parts: Vec<&str> = text.split(':').collect();
        let bad = || ReportError::Grid(format!("expected lo:hi:points, got '{text}'"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let points: usize = parts[2].trim().parse().map_err(|_| bad())?;
        if points < 2 {
            return Err(ReportError::Grid(format!(
                "a surface needs at least 2 points per axis, got {points}"
            )));
        }
        Ok(AxisRange { lo, hi, points })
    }

    pub fn at(&self, i: usize) -> f64 {
        self.lo + (self.hi - self.lo) * (i as f64) / ((self.points - 1) as f64)
    }
}

/// Samples u(x, y, t) on a uniform grid at a fixed time and renders the
/// triples as CSV.
pub fn format_surface_csv(
    spec: &ProblemSpec,
    source: SurfaceSource,
    order: u32,
    alpha: f64,
    xs: AxisRange,
    ys: AxisRange,
    t: f64,
    node_limit: usize,
) -> Result<String, ReportError> {
    let solution: Option<SolutionSeries> = match source {
        SurfaceSource::Solver(Method::Pia) => Some(pia_solve_bounded(spec, order, node_limit)?),
        SurfaceSource::Solver(Method::Rpsm) => Some(rpsm_solve_bounded(spec, order, node_limit)?),
        SurfaceSource::Reference => {
            if spec.reference.is_none() {
                return Err(ReportError::MissingReference);
            }
            None
        }
    };
    let mut out = String::from("x,y,u\n");
    for i in 0..xs.points {
        for j in 0..ys.points {
            let (x, y) = (xs.at(i), ys.at(j));
            let u = match &solution {
                Some(sol) => sol.eval_at(x, y, t, alpha)?,
                None => reference_eval(spec, &spec.bindings_at(x, y, t))?,
            };
            out.push_str(&format!("{},{},{}\n", sci(x), sci(y), sci(u)));
        }
    }
    Ok(out)
}
