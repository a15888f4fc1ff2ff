//! Problem descriptions as JSON files.
//!
//! A problem file names one member of the equation family
//!
//!   D_t^alpha u + a (u^p)_x + b3 (u^q)_xxx + bm (u^r)_xyy = 0
//!
//! together with its initial profile and an optional reference solution:
//!
//! ```json
//! {
//!   "alpha": 1.0,
//!   "a": "1",
//!   "b3": "1/8",
//!   "bm": "1/8",
//!   "p": 2, "q": 2, "r": 2,
//!   "initial": "(4/3)*rho*sinh(x+y)^2",
//!   "params": { "rho": 0.001 },
//!   "reference": "(4/3)*rho*sinh(x+y-rho*t)^2"
//! }
//! ```
//!
//! Coefficients are strings so they stay exact rationals; `initial` and
//! `reference` use the expression grammar of the core crate; `params`
//! binds named constants appearing in those expressions.

use std::collections::BTreeMap;
use std::path::Path;

use fzk_core::{parse, parse_rational, Bindings, ProblemError, ProblemSpec};
use serde::Deserialize;

#[derive(Debug, thiserror::Error)]
pub enum ProblemFileError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid problem JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("field {field}: {message}")]
    Field { field: &'static str, message: String },
    #[error("{0}")]
    Invalid(ProblemError),
}

impl From<ProblemError> for ProblemFileError {
    fn from(err: ProblemError) -> ProblemFileError {
        ProblemFileError::Invalid(err)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemFile {
    #[serde(default = "default_alpha")]
    alpha: f64,
    a: String,
    b3: String,
    bm: String,
    p: u32,
    q: u32,
    r: u32,
    initial: String,
    #[serde(default)]
    params: BTreeMap<String, f64>,
    #[serde(default)]
    reference: Option<String>,
}

fn default_alpha() -> f64 {
    1.0
}

macro_rules! rational_field {
    ($file:expr, $field:ident) => {
        parse_rational(&$file.$field).map_err(|message| ProblemFileError::Field {
            field: stringify!($field),
            message,
        })?
    };
}

fn expr_field(field: &'static str, text: &str) -> Result<fzk_core::Expr, ProblemFileError> {
    parse(text).map_err(|e| ProblemFileError::Field {
        field,
        message: e.to_string(),
    })
}

/// Builds a validated problem from JSON text.
pub fn problem_from_json(text: &str) -> Result<ProblemSpec, ProblemFileError> {
    let file: ProblemFile = serde_json::from_str(text)?;
    let mut params = Bindings::new();
    for (name, value) in &file.params {
        params.set(name, *value);
    }
    let spec = ProblemSpec {
        alpha: file.alpha,
        a: rational_field!(file, a),
        b3: rational_field!(file, b3),
        bm: rational_field!(file, bm),
        p: file.p,
        q: file.q,
        r: file.r,
        initial: expr_field("initial", &file.initial)?,
        params,
        reference: file
            .reference
            .as_deref()
            .map(|r| expr_field("reference", r))
            .transpose()?,
    };
    spec.validate()?;
    Ok(spec)
}

/// Reads and validates a problem file.
pub fn load_problem(path: &Path) -> Result<ProblemSpec, ProblemFileError> {
    let text = std::fs::read_to_string(path).map_err(|source| ProblemFileError::Read {
        path: path.display().to_string(),
        source,
    })?;
    problem_from_json(&text)
}
