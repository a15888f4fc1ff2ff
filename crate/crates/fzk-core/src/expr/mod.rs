//! Immutable symbolic expressions over the spatial variables x, y, t and
//! named parameters, with exact rational constants.
//!
//! Every operation returns a new tree. Constants stay exact rationals until
//! [`Expr::evaluate`]; hyperbolic functions are rewritten through their
//! exponential form during [`Expr::simplify`] so that products and powers
//! collapse by exponent arithmetic.

mod calculus;
mod eval;
mod parse;
mod simplify;

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use eval::{numeric_equal, Bindings, EvalError, SampleDomain, SAMPLE_POINTS};
pub use parse::{parse, ParseError, ParseErrorKind};

/// Spatial/time variables recognised by the expression language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Var {
    X,
    Y,
    T,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::T => "t",
        }
    }

    pub fn from_name(name: &str) -> Option<Var> {
        match name {
            "x" => Some(Var::X),
            "y" => Some(Var::Y),
            "t" => Some(Var::T),
            _ => None,
        }
    }
}

/// Built-in functions of the expression language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Func {
    Sinh,
    Cosh,
    Exp,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Exp => "exp",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        match name {
            "sinh" => Some(Func::Sinh),
            "cosh" => Some(Func::Cosh),
            "exp" => Some(Func::Exp),
            _ => None,
        }
    }
}

/// An immutable expression tree.
///
/// Light structural invariants hold for every value produced by the
/// constructors here: sums contain no nested sums, products no nested
/// products, numeric constants are folded into at most one `Constant` per
/// sum/product, and `IntPower` never carries exponent 0 or 1. Full
/// canonicalisation (exponential normal form plus hyperbolic regrouping) is
/// performed by [`Expr::simplify`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Expr {
    Constant(BigRational),
    Parameter(String),
    Variable(Var),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    IntPower(Box<Expr>, i64),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn zero() -> Expr {
        Expr::Constant(BigRational::zero())
    }

    pub fn one() -> Expr {
        Expr::Constant(BigRational::one())
    }

    pub fn integer(n: i64) -> Expr {
        Expr::Constant(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn rational(numer: i64, denom: i64) -> Expr {
        Expr::Constant(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn parameter(name: &str) -> Expr {
        Expr::Parameter(String::from(name))
    }

    pub fn var(v: Var) -> Expr {
        Expr::Variable(v)
    }

    /// Flattening sum constructor; folds constants, drops zeros.
    pub fn sum(terms: Vec<Expr>) -> Expr {
        let mut flat = Vec::new();
        let mut acc = BigRational::zero();
        for term in terms {
            match term {
                Expr::Sum(inner) => {
                    for t in inner {
                        match t {
                            Expr::Constant(c) => acc += c,
                            other => flat.push(other),
                        }
                    }
                }
                Expr::Constant(c) => acc += c,
                other => flat.push(other),
            }
        }
        if !acc.is_zero() {
            flat.push(Expr::Constant(acc));
        }
        match flat.len() {
            0 => Expr::zero(),
            1 => flat.pop().unwrap(),
            _ => Expr::Sum(flat),
        }
    }

    /// Flattening product constructor; folds constants (kept in front),
    /// annihilates on zero.
    pub fn product(factors: Vec<Expr>) -> Expr {
        let mut flat = Vec::new();
        let mut acc = BigRational::one();
        for factor in factors {
            match factor {
                Expr::Product(inner) => {
                    for f in inner {
                        match f {
                            Expr::Constant(c) => acc *= c,
                            other => flat.push(other),
                        }
                    }
                }
                Expr::Constant(c) => acc *= c,
                other => flat.push(other),
            }
        }
        if acc.is_zero() {
            return Expr::zero();
        }
        if flat.is_empty() {
            return Expr::Constant(acc);
        }
        if !acc.is_one() {
            flat.insert(0, Expr::Constant(acc));
        }
        match flat.len() {
            1 => flat.pop().unwrap(),
            _ => Expr::Product(flat),
        }
    }

    /// Integer power constructor; collapses exponents 0 and 1 and folds
    /// constant bases (except `0^n` with negative `n`, which is kept
    /// symbolic and yields an infinity at evaluation).
    pub fn pow(self, exponent: i64) -> Expr {
        match exponent {
            0 => Expr::one(),
            1 => self,
            n => match self {
                Expr::Constant(c) => {
                    if c.is_zero() && n < 0 {
                        Expr::IntPower(Box::new(Expr::Constant(c)), n)
                    } else {
                        Expr::Constant(rational_pow(&c, n))
                    }
                }
                Expr::IntPower(base, m) => match m.checked_mul(n) {
                    Some(k) => base.as_ref().clone().pow(k),
                    None => Expr::IntPower(Box::new(Expr::IntPower(base, m)), n),
                },
                base => Expr::IntPower(Box::new(base), n),
            },
        }
    }

    pub fn call(func: Func, arg: Expr) -> Expr {
        Expr::Call(func, Box::new(arg))
    }

    pub fn sinh(self) -> Expr {
        Expr::call(Func::Sinh, self)
    }

    pub fn cosh(self) -> Expr {
        Expr::call(Func::Cosh, self)
    }

    pub fn exp(self) -> Expr {
        Expr::call(Func::Exp, self)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Constant(c) if c.is_zero())
    }

    /// Number of nodes in the tree; drives the solver size guard.
    pub fn node_count(&self) -> usize {
        match self {
            Expr::Constant(_) | Expr::Parameter(_) | Expr::Variable(_) => 1,
            Expr::Sum(ts) => 1 + ts.iter().map(Expr::node_count).sum::<usize>(),
            Expr::Product(fs) => 1 + fs.iter().map(Expr::node_count).sum::<usize>(),
            Expr::IntPower(b, _) => 1 + b.node_count(),
            Expr::Call(_, a) => 1 + a.node_count(),
        }
    }

    pub fn contains_var(&self, v: Var) -> bool {
        match self {
            Expr::Variable(w) => *w == v,
            Expr::Constant(_) | Expr::Parameter(_) => false,
            Expr::Sum(ts) => ts.iter().any(|t| t.contains_var(v)),
            Expr::Product(fs) => fs.iter().any(|f| f.contains_var(v)),
            Expr::IntPower(b, _) => b.contains_var(v),
            Expr::Call(_, a) => a.contains_var(v),
        }
    }
}

pub(crate) fn rational_pow(c: &BigRational, n: i64) -> BigRational {
    let abs = c.pow(n.unsigned_abs().try_into().expect("exponent magnitude"));
    if n < 0 {
        abs.recip()
    } else {
        abs
    }
}

impl core::ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::sum(vec![self, rhs])
    }
}

impl core::ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::sum(vec![self, -rhs])
    }
}

impl core::ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::product(vec![self, rhs])
    }
}

impl core::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::product(vec![Expr::integer(-1), self])
    }
}

// Display emits strings the parser accepts; parse(print(e)) == e up to
// simplify. Precedence: sums < products < powers < atoms.

fn needs_parens_in_product(e: &Expr) -> bool {
    matches!(e, Expr::Sum(_))
}

fn needs_parens_as_base(e: &Expr) -> bool {
    match e {
        Expr::Sum(_) | Expr::Product(_) | Expr::IntPower(..) => true,
        Expr::Constant(c) => !c.is_integer() || c.is_negative(),
        _ => false,
    }
}

fn fmt_product_factor(f: &Expr, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if needs_parens_in_product(f) {
        write!(out, "({f})")
    } else {
        write!(out, "{f}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Constant(c) => write!(out, "{c}"),
            Expr::Parameter(name) => write!(out, "{name}"),
            Expr::Variable(v) => write!(out, "{}", v.name()),
            Expr::Sum(terms) => {
                for (i, term) in terms.iter().enumerate() {
                    let (negated, body) = strip_leading_minus(term);
                    if i == 0 {
                        if negated {
                            write!(out, "-")?;
                        }
                    } else if negated {
                        write!(out, " - ")?;
                    } else {
                        write!(out, " + ")?;
                    }
                    match body {
                        Some(b) => fmt_product_factor(&b, out)?,
                        None => fmt_product_factor(term, out)?,
                    }
                }
                Ok(())
            }
            Expr::Product(factors) => {
                for (i, f) in factors.iter().enumerate() {
                    if i > 0 {
                        write!(out, "*")?;
                    }
                    fmt_product_factor(f, out)?;
                }
                Ok(())
            }
            Expr::IntPower(base, n) => {
                if needs_parens_as_base(base) {
                    write!(out, "({base})^{n}")
                } else {
                    write!(out, "{base}^{n}")
                }
            }
            Expr::Call(func, arg) => write!(out, "{}({arg})", func.name()),
        }
    }
}

/// Splits a leading negative constant off a term so sums print as `a - b`.
fn strip_leading_minus(term: &Expr) -> (bool, Option<Expr>) {
    match term {
        Expr::Constant(c) if c.is_negative() => (true, Some(Expr::Constant(-c.clone()))),
        Expr::Product(fs) => match fs.first() {
            Some(Expr::Constant(c)) if c.is_negative() => {
                let mut rest: Vec<Expr> = Vec::with_capacity(fs.len());
                rest.push(Expr::Constant(-c.clone()));
                rest.extend(fs[1..].iter().cloned());
                (true, Some(Expr::product(rest)))
            }
            _ => (false, None),
        },
        _ => (false, None),
    }
}
