//! Floating-point evaluation and sampled numeric comparison.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_traits::ToPrimitive;
#[allow(unused_imports)]
use num_traits::Float;

use super::{Expr, Func};

/// Name -> value map covering both variables and parameters.
#[derive(Debug, Clone, Default)]
pub struct Bindings {
    values: BTreeMap<String, f64>,
}

impl Bindings {
    pub fn new() -> Bindings {
        Bindings::default()
    }

    /// Builder-style insert; later values win.
    pub fn with(mut self, name: &str, value: f64) -> Bindings {
        self.values.insert(name.to_string(), value);
        self
    }

    pub fn set(&mut self, name: &str, value: f64) {
        self.values.insert(name.to_string(), value);
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.values.get(name).copied()
    }

    /// Convenience for the common x, y, t triple.
    pub fn point(x: f64, y: f64, t: f64) -> Bindings {
        Bindings::new().with("x", x).with("y", y).with("t", t)
    }

    pub fn merged_over(&self, base: &Bindings) -> Bindings {
        let mut out = base.clone();
        for (k, v) in &self.values {
            out.values.insert(k.clone(), *v);
        }
        out
    }
}

/// Evaluation failure: a variable or parameter had no binding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalError {
    Unbound(String),
}

impl fmt::Display for EvalError {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::Unbound(name) => write!(out, "unbound symbol '{name}'"),
        }
    }
}

impl Expr {
    pub fn evaluate(&self, bindings: &Bindings) -> Result<f64, EvalError> {
        match self {
            Expr::Constant(c) => Ok(c.to_f64().unwrap_or(f64::NAN)),
            Expr::Parameter(name) => bindings
                .get(name)
                .ok_or_else(|| EvalError::Unbound(name.clone())),
            Expr::Variable(v) => bindings
                .get(v.name())
                .ok_or_else(|| EvalError::Unbound(v.name().to_string())),
            Expr::Sum(terms) => {
                let mut acc = 0.0;
                for t in terms {
                    acc += t.evaluate(bindings)?;
                }
                Ok(acc)
            }
            Expr::Product(factors) => {
                let mut acc = 1.0;
                for f in factors {
                    acc *= f.evaluate(bindings)?;
                }
                Ok(acc)
            }
            Expr::IntPower(base, n) => {
                let b = base.evaluate(bindings)?;
                let clamped = (*n).clamp(i32::MIN as i64, i32::MAX as i64) as i32;
                Ok(b.powi(clamped))
            }
            Expr::Call(func, arg) => {
                let a = arg.evaluate(bindings)?;
                Ok(match func {
                    Func::Sinh => a.sinh(),
                    Func::Cosh => a.cosh(),
                    Func::Exp => a.exp(),
                })
            }
        }
    }
}

/// Axis-aligned box of symbol ranges used for sampled comparisons.
#[derive(Debug, Clone)]
pub struct SampleDomain {
    ranges: Vec<(String, f64, f64)>,
}

impl SampleDomain {
    pub fn new() -> SampleDomain {
        SampleDomain { ranges: Vec::new() }
    }

    pub fn with(mut self, name: &str, lo: f64, hi: f64) -> SampleDomain {
        self.ranges.push((name.to_string(), lo, hi));
        self
    }

    /// Deterministic low-discrepancy sample points: coordinate `d` of point
    /// `i` is the fractional part of `(i + 1) * sqrt(p_d)` for the `d`-th
    /// prime, mapped onto the axis range.
    pub fn sample(&self, index: usize) -> Bindings {
        const PRIMES: [f64; 12] = [2.0, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0, 19.0, 23.0, 29.0, 31.0, 37.0];
        let mut b = Bindings::new();
        for (d, (name, lo, hi)) in self.ranges.iter().enumerate() {
            let root = PRIMES[d % PRIMES.len()].sqrt();
            let u = ((index as f64 + 1.0) * root).fract();
            b.set(name, lo + (hi - lo) * u);
        }
        b
    }
}

impl Default for SampleDomain {
    fn default() -> SampleDomain {
        SampleDomain::new()
    }
}

/// Number of sample points used by [`numeric_equal`].
pub const SAMPLE_POINTS: usize = 48;

/// Compares two expressions numerically over `domain`: true when
/// `|e1 - e2| <= tol * (1 + |e1|)` at every sample point. Any evaluation
/// failure (an unbound symbol) makes the comparison fail.
pub fn numeric_equal(e1: &Expr, e2: &Expr, domain: &SampleDomain, tol: f64) -> bool {
    for i in 0..SAMPLE_POINTS {
        let b = domain.sample(i);
        let (v1, v2) = match (e1.evaluate(&b), e2.evaluate(&b)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => return false,
        };
        if !v1.is_finite() || !v2.is_finite() {
            return false;
        }
        if (v1 - v2).abs() > tol * (1.0 + v1.abs()) {
            return false;
        }
    }
    true
}
