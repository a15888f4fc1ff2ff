//! Fractional power series in t over the exponent lattice {a + b*alpha}.
//!
//! A series is a finite map from lattice exponents to coefficients. Each
//! coefficient is a sum of (gamma token, expression) parts, where a gamma
//! token is a ratio of Gamma values at lattice points kept symbolic in
//! alpha. The Caputo derivative and Riemann-Liouville integral act
//! termwise through the power rule, pushing Gamma ratios into the tokens;
//! alpha enters numerically only at evaluation, so one symbolic solve
//! serves every alpha column of a results table.
//!
//! Coefficients are stored raw: the series is sum of c_lambda(x,y) t^lambda.
//! The conventional normalization f_n = c_(0,n) * Gamma(1 + n*alpha) is
//! available through [`Coeff::scaled_by_gamma`] / [`Coeff::divided_by_gamma`].

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
#[allow(unused_imports)]
use num_traits::Float;

use crate::expr::{Bindings, EvalError, Expr, Var};
use crate::gamma::{gamma, GammaPole};

/// Lattice exponent a + b*alpha. Valid exponents are nonnegative for every
/// alpha in (0, 1], which is exactly a >= 0 and a + b >= 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct FracExponent {
    pub int_part: i64,
    pub alpha_part: i64,
}

impl FracExponent {
    pub fn new(int_part: i64, alpha_part: i64) -> Result<FracExponent, SeriesError> {
        if int_part < 0 || int_part + alpha_part < 0 {
            return Err(SeriesError::InvalidExponent {
                int_part,
                alpha_part,
            });
        }
        Ok(FracExponent {
            int_part,
            alpha_part,
        })
    }

    pub const ZERO: FracExponent = FracExponent {
        int_part: 0,
        alpha_part: 0,
    };

    pub fn is_constant(self) -> bool {
        self.int_part == 0 && self.alpha_part == 0
    }

    pub fn value(self, alpha: f64) -> f64 {
        self.int_part as f64 + self.alpha_part as f64 * alpha
    }

    /// Exponent value at alpha = 1; the truncation measure.
    pub fn order_weight(self) -> i64 {
        self.int_part + self.alpha_part
    }

    fn add(self, other: FracExponent) -> FracExponent {
        FracExponent {
            int_part: self.int_part + other.int_part,
            alpha_part: self.alpha_part + other.alpha_part,
        }
    }
}

impl fmt::Display for FracExponent {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.int_part, self.alpha_part) {
            (i, 0) => write!(out, "{i}"),
            (0, 1) => write!(out, "a"),
            (0, b) => write!(out, "{b}a"),
            (i, 1) => write!(out, "{i}+a"),
            (i, b) if b > 0 => write!(out, "{i}+{b}a"),
            (i, -1) => write!(out, "{i}-a"),
            (i, b) => write!(out, "{i}-{}a", -b),
        }
    }
}

/// Argument of a Gamma factor: Gamma(int_part + alpha_part*alpha).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct GammaArg {
    pub int_part: i64,
    pub alpha_part: i64,
}

impl GammaArg {
    pub fn new(int_part: i64, alpha_part: i64) -> GammaArg {
        GammaArg {
            int_part,
            alpha_part,
        }
    }

    pub fn value(self, alpha: f64) -> f64 {
        self.int_part as f64 + self.alpha_part as f64 * alpha
    }
}

impl fmt::Display for GammaArg {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = FracExponent {
            int_part: self.int_part,
            alpha_part: self.alpha_part,
        };
        write!(out, "gamma({e})")
    }
}

fn factorial_rational(n: i64) -> BigRational {
    let mut acc = BigInt::from(1);
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    BigRational::from_integer(acc)
}

/// Deferred scalar token: a product of Gamma values over a product of Gamma
/// values, each argument on the alpha lattice. Arguments without an alpha
/// part are folded away exactly (Gamma of a positive integer is a
/// factorial), so tokens stay in a canonical fully-cancelled form and
/// structurally equal tokens are semantically equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GammaRatio {
    numer: Vec<GammaArg>,
    denom: Vec<GammaArg>,
}

impl GammaRatio {
    pub fn one() -> GammaRatio {
        GammaRatio {
            numer: Vec::new(),
            denom: Vec::new(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.numer.is_empty() && self.denom.is_empty()
    }

    pub fn numer(&self) -> &[GammaArg] {
        &self.numer
    }

    pub fn denom(&self) -> &[GammaArg] {
        &self.denom
    }

    /// Multiplies extra Gamma factors in, folding constant arguments into
    /// the returned rational and cancelling matched tokens.
    fn compose(
        &self,
        extra_numer: &[GammaArg],
        extra_denom: &[GammaArg],
    ) -> Result<(GammaRatio, BigRational), SeriesError> {
        let mut scalar = BigRational::one();
        let mut numer = self.numer.clone();
        let mut denom = self.denom.clone();
        for arg in extra_numer {
            if arg.alpha_part == 0 {
                if arg.int_part < 1 {
                    return Err(SeriesError::Pole(GammaPole {
                        argument: arg.int_part as f64,
                    }));
                }
                scalar *= factorial_rational(arg.int_part - 1);
            } else {
                numer.push(*arg);
            }
        }
        for arg in extra_denom {
            if arg.alpha_part == 0 {
                if arg.int_part < 1 {
                    return Err(SeriesError::Pole(GammaPole {
                        argument: arg.int_part as f64,
                    }));
                }
                scalar /= factorial_rational(arg.int_part - 1);
            } else {
                denom.push(*arg);
            }
        }
        numer.sort();
        denom.sort();
        // multiset cancellation of identical arguments
        let mut kept_numer = Vec::with_capacity(numer.len());
        let mut di = 0;
        let mut remaining_denom: Vec<Option<GammaArg>> = denom.into_iter().map(Some).collect();
        'outer: for n in numer {
            while di < remaining_denom.len() {
                match remaining_denom[di] {
                    Some(d) if d < n => di += 1,
                    Some(d) if d == n => {
                        remaining_denom[di] = None;
                        di += 1;
                        continue 'outer;
                    }
                    _ => break,
                }
            }
            kept_numer.push(n);
        }
        let kept_denom: Vec<GammaArg> = remaining_denom.into_iter().flatten().collect();
        Ok((
            GammaRatio {
                numer: kept_numer,
                denom: kept_denom,
            },
            scalar,
        ))
    }

    pub fn mul(&self, other: &GammaRatio) -> GammaRatio {
        let (ratio, scalar) = self
            .compose(&other.numer, &other.denom)
            .expect("token arguments carry alpha parts");
        debug_assert!(scalar.is_one());
        ratio
    }

    pub fn eval(&self, alpha: f64) -> Result<f64, SeriesError> {
        let mut acc = 1.0;
        for arg in &self.numer {
            acc *= gamma(arg.value(alpha)).map_err(SeriesError::Pole)?;
        }
        for arg in &self.denom {
            acc /= gamma(arg.value(alpha)).map_err(SeriesError::Pole)?;
        }
        Ok(acc)
    }

    /// Exact rational value at alpha = 1, where every argument is an
    /// integer and each Gamma is a factorial.
    pub fn resolve_alpha_one(&self) -> Result<BigRational, SeriesError> {
        let mut acc = BigRational::one();
        for arg in &self.numer {
            let v = arg.int_part + arg.alpha_part;
            if v < 1 {
                return Err(SeriesError::Pole(GammaPole { argument: v as f64 }));
            }
            acc *= factorial_rational(v - 1);
        }
        for arg in &self.denom {
            let v = arg.int_part + arg.alpha_part;
            if v < 1 {
                return Err(SeriesError::Pole(GammaPole { argument: v as f64 }));
            }
            acc /= factorial_rational(v - 1);
        }
        Ok(acc)
    }
}

impl fmt::Display for GammaRatio {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(out, "1");
        }
        if self.numer.is_empty() {
            write!(out, "1")?;
        } else {
            for (i, arg) in self.numer.iter().enumerate() {
                if i > 0 {
                    write!(out, "*")?;
                }
                write!(out, "{arg}")?;
            }
        }
        for arg in &self.denom {
            write!(out, "/{arg}")?;
        }
        Ok(())
    }
}

/// A series coefficient: a sum of spatial expressions, each scaled by a
/// deferred Gamma token. Parts with equal tokens are merged; zero parts
/// are pruned.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coeff {
    parts: BTreeMap<GammaRatio, Expr>,
}

impl Coeff {
    pub fn zero() -> Coeff {
        Coeff {
            parts: BTreeMap::new(),
        }
    }

    pub fn from_expr(e: Expr) -> Coeff {
        let simplified = e.simplify();
        let mut parts = BTreeMap::new();
        if !simplified.is_zero() {
            parts.insert(GammaRatio::one(), simplified);
        }
        Coeff { parts }
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn parts(&self) -> impl Iterator<Item = (&GammaRatio, &Expr)> {
        self.parts.iter()
    }

    fn insert_part(&mut self, ratio: GammaRatio, expr: Expr) {
        if expr.is_zero() {
            return;
        }
        match self.parts.remove(&ratio) {
            None => {
                self.parts.insert(ratio, expr);
            }
            Some(existing) => {
                let merged = (existing + expr).simplify();
                if !merged.is_zero() {
                    self.parts.insert(ratio, merged);
                }
            }
        }
    }

    pub fn add(&self, other: &Coeff) -> Coeff {
        let mut out = self.clone();
        for (ratio, expr) in &other.parts {
            out.insert_part(ratio.clone(), expr.clone());
        }
        out
    }

    pub fn scale_rational(&self, s: &BigRational) -> Coeff {
        if s.is_zero() {
            return Coeff::zero();
        }
        let scale = Expr::Constant(s.clone());
        let mut out = Coeff::zero();
        for (ratio, expr) in &self.parts {
            out.insert_part(ratio.clone(), (scale.clone() * expr.clone()).simplify());
        }
        out
    }

    pub fn neg(&self) -> Coeff {
        self.scale_rational(&-BigRational::one())
    }

    pub fn mul_expr(&self, e: &Expr) -> Coeff {
        let mut out = Coeff::zero();
        for (ratio, expr) in &self.parts {
            out.insert_part(ratio.clone(), (e.clone() * expr.clone()).simplify());
        }
        out
    }

    pub fn mul(&self, other: &Coeff) -> Coeff {
        let mut out = Coeff::zero();
        for (r1, e1) in &self.parts {
            for (r2, e2) in &other.parts {
                out.insert_part(r1.mul(r2), (e1.clone() * e2.clone()).simplify());
            }
        }
        out
    }

    /// Multiplies every part by the given extra Gamma factors.
    pub fn mul_gamma(
        &self,
        extra_numer: &[GammaArg],
        extra_denom: &[GammaArg],
    ) -> Result<Coeff, SeriesError> {
        let mut out = Coeff::zero();
        for (ratio, expr) in &self.parts {
            let (r, s) = ratio.compose(extra_numer, extra_denom)?;
            let scaled = if s.is_one() {
                expr.clone()
            } else {
                (Expr::Constant(s) * expr.clone()).simplify()
            };
            out.insert_part(r, scaled);
        }
        Ok(out)
    }

    /// Conversion raw -> canonical: multiplies by Gamma(1 + n*alpha).
    pub fn scaled_by_gamma(&self, arg: GammaArg) -> Result<Coeff, SeriesError> {
        self.mul_gamma(&[arg], &[])
    }

    /// Conversion canonical -> raw: divides by Gamma(1 + n*alpha).
    pub fn divided_by_gamma(&self, arg: GammaArg) -> Result<Coeff, SeriesError> {
        self.mul_gamma(&[], &[arg])
    }

    pub fn map_expr<F: Fn(&Expr) -> Expr>(&self, f: F) -> Coeff {
        let mut out = Coeff::zero();
        for (ratio, expr) in &self.parts {
            out.insert_part(ratio.clone(), f(expr));
        }
        out
    }

    pub fn eval(&self, bindings: &Bindings, alpha: f64) -> Result<f64, SeriesError> {
        let mut acc = 0.0;
        for (ratio, expr) in &self.parts {
            acc += ratio.eval(alpha)? * expr.evaluate(bindings)?;
        }
        Ok(acc)
    }

    /// Collapses the deferred tokens at alpha = 1 into exact rationals and
    /// returns the resulting plain expression.
    pub fn resolve_alpha_one(&self) -> Result<Expr, SeriesError> {
        let mut terms = Vec::new();
        for (ratio, expr) in &self.parts {
            let scale = ratio.resolve_alpha_one()?;
            terms.push(Expr::Constant(scale) * expr.clone());
        }
        Ok(Expr::sum(terms).simplify())
    }

    pub fn node_count(&self) -> usize {
        self.parts.values().map(Expr::node_count).sum()
    }
}

/// Evaluation and algebra errors for fractional series.
#[derive(Debug, Clone, PartialEq)]
pub enum SeriesError {
    InvalidExponent { int_part: i64, alpha_part: i64 },
    MaxOrderMismatch { left: i64, right: i64 },
    ExponentUnderflow { int_part: i64, alpha_part: i64 },
    InvalidIntegralOrder { int_part: i64, alpha_part: i64 },
    PowerBelowOne,
    Pole(GammaPole),
    Eval(EvalError),
    NegativeTime(f64),
    AlphaOutOfRange(f64),
    CoefficientDependsOnT,
}

impl fmt::Display for SeriesError {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesError::InvalidExponent {
                int_part,
                alpha_part,
            } => write!(
                out,
                "exponent ({int_part}, {alpha_part}) leaves the admissible lattice"
            ),
            SeriesError::MaxOrderMismatch { left, right } => {
                write!(out, "series max_order mismatch: {left} vs {right}")
            }
            SeriesError::ExponentUnderflow {
                int_part,
                alpha_part,
            } => write!(
                out,
                "caputo would push exponent ({int_part}, {alpha_part}) below zero"
            ),
            SeriesError::InvalidIntegralOrder {
                int_part,
                alpha_part,
            } => write!(
                out,
                "integral order ({int_part}, {alpha_part}) is not positive on (0, 1]"
            ),
            SeriesError::PowerBelowOne => write!(out, "series power must be at least 1"),
            SeriesError::Pole(p) => write!(out, "{p}"),
            SeriesError::Eval(e) => write!(out, "{e}"),
            SeriesError::NegativeTime(t) => write!(out, "series evaluated at negative t = {t}"),
            SeriesError::AlphaOutOfRange(a) => {
                write!(out, "alpha = {a} outside the admissible range (0, 1]")
            }
            SeriesError::CoefficientDependsOnT => {
                write!(out, "series coefficient depends on t")
            }
        }
    }
}

impl From<EvalError> for SeriesError {
    fn from(e: EvalError) -> SeriesError {
        SeriesError::Eval(e)
    }
}

impl From<GammaPole> for SeriesError {
    fn from(p: GammaPole) -> SeriesError {
        SeriesError::Pole(p)
    }
}

/// Truncated fractional power series: exponent -> coefficient, with terms
/// whose alpha = 1 exponent value exceeds `max_order` dropped on insertion.
#[derive(Debug, Clone, PartialEq)]
pub struct FracSeries {
    terms: BTreeMap<FracExponent, Coeff>,
    max_order: i64,
}

impl FracSeries {
    pub fn new(max_order: i64) -> FracSeries {
        FracSeries {
            terms: BTreeMap::new(),
            max_order,
        }
    }

    /// Series holding a single t-free expression at exponent zero.
    pub fn constant(e: Expr, max_order: i64) -> Result<FracSeries, SeriesError> {
        let mut s = FracSeries::new(max_order);
        s.insert_add(FracExponent::ZERO, Coeff::from_expr(e))?;
        Ok(s)
    }

    pub fn max_order(&self) -> i64 {
        self.max_order
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FracExponent, &Coeff)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exp: FracExponent) -> Coeff {
        self.terms.get(&exp).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn node_count(&self) -> usize {
        self.terms.values().map(Coeff::node_count).sum()
    }

    /// Adds a coefficient at an exponent, enforcing the lattice invariant,
    /// the t-free coefficient invariant, and the truncation cutoff.
    pub fn insert_add(&mut self, exp: FracExponent, coeff: Coeff) -> Result<(), SeriesError> {
        if exp.int_part < 0 || exp.int_part + exp.alpha_part < 0 {
            return Err(SeriesError::InvalidExponent {
                int_part: exp.int_part,
                alpha_part: exp.alpha_part,
            });
        }
        if coeff.parts().any(|(_, e)| e.contains_var(Var::T)) {
            return Err(SeriesError::CoefficientDependsOnT);
        }
        if exp.order_weight() > self.max_order {
            return Ok(());
        }
        if coeff.is_zero() {
            return Ok(());
        }
        let merged = match self.terms.remove(&exp) {
            None => coeff,
            Some(existing) => existing.add(&coeff),
        };
        if !merged.is_zero() {
            self.terms.insert(exp, merged);
        }
        Ok(())
    }

    /// Termwise scaled sum. All series must share the same max_order.
    pub fn linear_combine(
        pairs: &[(BigRational, &FracSeries)],
    ) -> Result<FracSeries, SeriesError> {
        let max_order = match pairs.first() {
            Some((_, s)) => s.max_order,
            None => 0,
        };
        let mut out = FracSeries::new(max_order);
        for (scale, series) in pairs {
            if series.max_order != max_order {
                return Err(SeriesError::MaxOrderMismatch {
                    left: max_order,
                    right: series.max_order,
                });
            }
            for (exp, coeff) in &series.terms {
                out.insert_add(*exp, coeff.scale_rational(scale))?;
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &FracSeries) -> Result<FracSeries, SeriesError> {
        FracSeries::linear_combine(&[
            (BigRational::one(), self),
            (BigRational::one(), other),
        ])
    }

    pub fn scale(&self, s: &BigRational) -> FracSeries {
        let mut out = FracSeries::new(self.max_order);
        for (exp, coeff) in &self.terms {
            let scaled = coeff.scale_rational(s);
            if !scaled.is_zero() {
                out.terms.insert(*exp, scaled);
            }
        }
        out
    }

    /// Product of two series: exponents add on the lattice, coefficients
    /// multiply, terms beyond max_order are dropped.
    pub fn mul(&self, other: &FracSeries) -> Result<FracSeries, SeriesError> {
        if self.max_order != other.max_order {
            return Err(SeriesError::MaxOrderMismatch {
                left: self.max_order,
                right: other.max_order,
            });
        }
        let mut out = FracSeries::new(self.max_order);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let exp = e1.add(*e2);
                if exp.order_weight() > self.max_order {
                    continue;
                }
                out.insert_add(exp, c1.mul(c2))?;
            }
        }
        Ok(out)
    }

    /// Integer power by repeated multiplication; p = 1 is the identity.
    pub fn int_pow(&self, p: u32) -> Result<FracSeries, SeriesError> {
        if p < 1 {
            return Err(SeriesError::PowerBelowOne);
        }
        let mut acc = self.clone();
        for _ in 1..p {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Termwise Caputo derivative of order alpha: t^lambda maps to
    /// t^(lambda - alpha) scaled by Gamma(lambda+1)/Gamma(lambda+1-alpha),
    /// and constants map to zero.
    pub fn caputo(&self) -> Result<FracSeries, SeriesError> {
        let mut out = FracSeries::new(self.max_order);
        for (exp, coeff) in &self.terms {
            if exp.is_constant() {
                continue;
            }
            if exp.order_weight() < 1 {
                return Err(SeriesError::ExponentUnderflow {
                    int_part: exp.int_part,
                    alpha_part: exp.alpha_part,
                });
            }
            let new_exp = FracExponent {
                int_part: exp.int_part,
                alpha_part: exp.alpha_part - 1,
            };
            let numer = GammaArg::new(exp.int_part + 1, exp.alpha_part);
            let denom = GammaArg::new(exp.int_part + 1, exp.alpha_part - 1);
            out.insert_add(new_exp, coeff.mul_gamma(&[numer], &[denom])?)?;
        }
        Ok(out)
    }

    /// Termwise Riemann-Liouville integral of lattice order beta: t^lambda
    /// maps to t^(lambda + beta) scaled by
    /// Gamma(lambda+1)/Gamma(lambda+1+beta). beta must be positive for
    /// every alpha in (0, 1].
    pub fn rl_integral(&self, beta: FracExponent) -> Result<FracSeries, SeriesError> {
        if beta.int_part < 0 || beta.order_weight() < 1 {
            return Err(SeriesError::InvalidIntegralOrder {
                int_part: beta.int_part,
                alpha_part: beta.alpha_part,
            });
        }
        let mut out = FracSeries::new(self.max_order);
        for (exp, coeff) in &self.terms {
            let new_exp = exp.add(beta);
            if new_exp.order_weight() > self.max_order {
                continue;
            }
            let numer = GammaArg::new(exp.int_part + 1, exp.alpha_part);
            let denom = GammaArg::new(
                exp.int_part + beta.int_part + 1,
                exp.alpha_part + beta.alpha_part,
            );
            out.insert_add(new_exp, coeff.mul_gamma(&[numer], &[denom])?)?;
        }
        Ok(out)
    }

    /// Applies x/y partial derivatives to every coefficient; exponents are
    /// untouched.
    pub fn spatial_diff(&self, order_x: u32, order_y: u32) -> FracSeries {
        let mut out = FracSeries::new(self.max_order);
        for (exp, coeff) in &self.terms {
            let diffed = coeff.map_expr(|e| e.differentiate(Var::X, order_x).differentiate(Var::Y, order_y));
            if !diffed.is_zero() {
                out.terms.insert(*exp, diffed);
            }
        }
        out
    }

    /// Numeric value at a point: requires 0 < alpha <= 1, t >= 0, and all
    /// coefficient symbols bound.
    pub fn eval(&self, bindings: &Bindings, alpha: f64) -> Result<f64, SeriesError> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(SeriesError::AlphaOutOfRange(alpha));
        }
        let t = bindings
            .get("t")
            .ok_or_else(|| SeriesError::Eval(EvalError::Unbound(String::from("t"))))?;
        if t < 0.0 {
            return Err(SeriesError::NegativeTime(t));
        }
        let mut acc = 0.0;
        for (exp, coeff) in &self.terms {
            acc += coeff.eval(bindings, alpha)? * t.powf(exp.value(alpha));
        }
        Ok(acc)
    }

    /// At alpha = 1 every exponent collapses to the integer a + b and every
    /// token to an exact rational; returns integer exponent -> combined
    /// coefficient expression.
    pub fn collapse_alpha_one(&self) -> Result<BTreeMap<i64, Expr>, SeriesError> {
        let mut out: BTreeMap<i64, Expr> = BTreeMap::new();
        for (exp, coeff) in &self.terms {
            let resolved = coeff.resolve_alpha_one()?;
            let key = exp.order_weight();
            let merged = match out.remove(&key) {
                None => resolved,
                Some(existing) => (existing + resolved).simplify(),
            };
            if !merged.is_zero() {
                out.insert(key, merged);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for FracSeries {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(out, "0");
        }
        for (i, (exp, coeff)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(out, " + ")?;
            }
            write!(out, "t^({exp})*[")?;
            for (j, (ratio, expr)) in coeff.parts.iter().enumerate() {
                if j > 0 {
                    write!(out, " + ")?;
                }
                if ratio.is_one() {
                    write!(out, "{expr}")?;
                } else {
                    write!(out, "({ratio})*({expr})")?;
                }
            }
            write!(out, "]")?;
        }
        Ok(())
    }
}
