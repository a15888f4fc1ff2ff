//! Canonical forms.
//!
//! [`Expr::simplify`] rewrites an expression in two stages. Stage one
//! (`normalize`) expands everything into a flat polynomial over atomic
//! factors: sums of monomials `c * f1^n1 * ... * exp(g)`, with hyperbolic
//! functions replaced by their exponential form so that products of
//! exponentials merge by adding arguments. Stage two (`regroup`) folds
//! matched `exp(g)`/`exp(-g)` pairs back into `cosh`/`sinh`, leaving
//! unmatched exponentials alone.
//!
//! The result is a fixed point: simplifying twice returns the same tree,
//! and two expressions equal as functions that expand to the same
//! polynomial compare equal with `==` after simplification.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{rational_pow, Expr, Func};

/// Monomial identity: atomic factors with integer powers plus at most one
/// exponential factor, keyed by its (simplified) argument.
type MonoKey = (BTreeMap<Expr, i64>, Option<Expr>);

/// Fully expanded form: monomial -> rational coefficient.
type Poly = BTreeMap<MonoKey, BigRational>;

fn poly_zero() -> Poly {
    BTreeMap::new()
}

fn poly_constant(c: BigRational) -> Poly {
    let mut p = poly_zero();
    if !c.is_zero() {
        p.insert((BTreeMap::new(), None), c);
    }
    p
}

fn poly_atom(atom: Expr, power: i64) -> Poly {
    let mut factors = BTreeMap::new();
    factors.insert(atom, power);
    let mut p = poly_zero();
    p.insert((factors, None), BigRational::one());
    p
}

fn poly_exp(arg: Expr) -> Poly {
    if arg.is_zero() {
        return poly_constant(BigRational::one());
    }
    let mut p = poly_zero();
    p.insert((BTreeMap::new(), Some(arg)), BigRational::one());
    p
}

fn poly_add_assign(acc: &mut Poly, other: Poly) {
    for (key, coeff) in other {
        let entry = acc.entry(key).or_insert_with(BigRational::zero);
        *entry += coeff;
    }
    acc.retain(|_, c| !c.is_zero());
}

fn poly_scale(p: &mut Poly, s: &BigRational) {
    if s.is_zero() {
        p.clear();
        return;
    }
    for coeff in p.values_mut() {
        *coeff *= s.clone();
    }
}

fn key_mul(a: &MonoKey, b: &MonoKey) -> MonoKey {
    let mut factors = a.0.clone();
    for (atom, power) in &b.0 {
        let entry = factors.entry(atom.clone()).or_insert(0);
        *entry = entry.checked_add(*power).expect("factor power overflow");
    }
    factors.retain(|_, p| *p != 0);
    let exp = match (&a.1, &b.1) {
        (None, None) => None,
        (Some(g), None) | (None, Some(g)) => Some(g.clone()),
        (Some(g), Some(h)) => {
            let combined = (g.clone() + h.clone()).simplify();
            if combined.is_zero() {
                None
            } else {
                Some(combined)
            }
        }
    };
    (factors, exp)
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = poly_zero();
    for (ka, ca) in a {
        for (kb, cb) in b {
            let key = key_mul(ka, kb);
            let entry = out.entry(key).or_insert_with(BigRational::zero);
            *entry += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn key_pow(key: &MonoKey, coeff: &BigRational, n: i64) -> (MonoKey, BigRational) {
    let mut factors = BTreeMap::new();
    for (atom, power) in &key.0 {
        factors.insert(
            atom.clone(),
            power.checked_mul(n).expect("factor power overflow"),
        );
    }
    let exp = key.1.as_ref().and_then(|g| {
        let scaled = (Expr::integer(n) * g.clone()).simplify();
        if scaled.is_zero() {
            None
        } else {
            Some(scaled)
        }
    });
    ((factors, exp), rational_pow(coeff, n))
}

fn poly_pow(p: &Poly, n: i64) -> Poly {
    if n == 0 {
        return poly_constant(BigRational::one());
    }
    if n == 1 {
        return p.clone();
    }
    if p.is_empty() {
        if n > 0 {
            return poly_zero();
        }
        // 0^negative: keep a symbolic atom so evaluation can produce the
        // infinity instead of the simplifier crashing.
        return poly_atom(Expr::zero(), n);
    }
    if p.len() == 1 {
        let (key, coeff) = p.iter().next().expect("single monomial");
        let (k, c) = key_pow(key, coeff, n);
        let mut out = poly_zero();
        out.insert(k, c);
        return out;
    }
    if n < 0 {
        // A sum raised to a negative power stays opaque.
        return poly_atom(rebuild(p), n);
    }
    let mut base = p.clone();
    let mut result = poly_constant(BigRational::one());
    let mut exp = n as u64;
    while exp > 0 {
        if exp & 1 == 1 {
            result = poly_mul(&result, &base);
        }
        exp >>= 1;
        if exp > 0 {
            base = poly_mul(&base, &base);
        }
    }
    result
}

fn normalize(e: &Expr) -> Poly {
    match e {
        Expr::Constant(c) => poly_constant(c.clone()),
        Expr::Parameter(_) | Expr::Variable(_) => poly_atom(e.clone(), 1),
        Expr::Sum(terms) => {
            let mut acc = poly_zero();
            for t in terms {
                poly_add_assign(&mut acc, normalize(t));
            }
            acc
        }
        Expr::Product(factors) => {
            let mut acc = poly_constant(BigRational::one());
            for f in factors {
                if acc.is_empty() {
                    return acc;
                }
                acc = poly_mul(&acc, &normalize(f));
            }
            acc
        }
        Expr::IntPower(base, n) => poly_pow(&normalize(base), *n),
        Expr::Call(Func::Exp, arg) => poly_exp(arg.simplify()),
        Expr::Call(Func::Sinh, arg) => {
            let g = arg.simplify();
            let mut acc = poly_exp(g.clone());
            poly_scale(&mut acc, &BigRational::new(1.into(), 2.into()));
            let mut neg = poly_exp(negate(&g));
            poly_scale(&mut neg, &BigRational::new((-1).into(), 2.into()));
            poly_add_assign(&mut acc, neg);
            acc
        }
        Expr::Call(Func::Cosh, arg) => {
            let g = arg.simplify();
            let mut acc = poly_exp(g.clone());
            poly_scale(&mut acc, &BigRational::new(1.into(), 2.into()));
            let mut neg = poly_exp(negate(&g));
            poly_scale(&mut neg, &BigRational::new(1.into(), 2.into()));
            poly_add_assign(&mut acc, neg);
            acc
        }
    }
}

/// Exact negation of a simplified expression, staying in canonical form.
fn negate(e: &Expr) -> Expr {
    let mut p = normalize(e);
    for coeff in p.values_mut() {
        let negated = -coeff.clone();
        *coeff = negated;
    }
    regroup(&p)
}

fn monomial_expr(key: &MonoKey, coeff: &BigRational) -> Expr {
    let mut parts: Vec<Expr> = Vec::new();
    parts.push(Expr::Constant(coeff.clone()));
    for (atom, power) in &key.0 {
        parts.push(atom.clone().pow(*power));
    }
    if let Some(g) = &key.1 {
        parts.push(g.clone().exp());
    }
    Expr::product(parts)
}

/// Converts a polynomial back into an expression tree without hyperbolic
/// regrouping: a sorted sum of monomials over `exp` factors.
fn rebuild(p: &Poly) -> Expr {
    let mut terms: Vec<Expr> = p
        .iter()
        .map(|(key, coeff)| monomial_expr(key, coeff))
        .collect();
    terms.sort();
    Expr::sum(terms)
}

/// Sign of the leading rational coefficient, used to pick one orientation
/// out of `g`/`-g` when pairing exponentials.
fn leading_is_negative(e: &Expr) -> bool {
    match e {
        Expr::Constant(c) => c.is_negative(),
        Expr::Product(fs) => matches!(fs.first(), Some(Expr::Constant(c)) if c.is_negative()),
        Expr::Sum(ts) => ts.first().map(leading_is_negative).unwrap_or(false),
        _ => false,
    }
}

/// Folds matched exponential pairs back into `cosh`/`sinh` and returns the
/// final simplified tree.
fn regroup(p: &Poly) -> Expr {
    let mut terms: Vec<Expr> = Vec::new();
    // (shared non-exp factors, positive-oriented argument) ->
    // (coefficient of exp(+g), coefficient of exp(-g))
    let mut groups: BTreeMap<(BTreeMap<Expr, i64>, Expr), (BigRational, BigRational)> =
        BTreeMap::new();
    for ((factors, exp), coeff) in p {
        match exp {
            None => terms.push(monomial_expr(&(factors.clone(), None), coeff)),
            Some(g) => {
                let (flip, oriented) = if leading_is_negative(g) {
                    (true, negate(g))
                } else {
                    (false, g.clone())
                };
                let slot = groups
                    .entry((factors.clone(), oriented))
                    .or_insert_with(|| (BigRational::zero(), BigRational::zero()));
                if flip {
                    slot.1 += coeff;
                } else {
                    slot.0 += coeff;
                }
            }
        }
    }
    for ((factors, g), (pos, neg)) in groups {
        if pos.is_zero() || neg.is_zero() {
            // Unpaired exponential: leave it in exp form.
            let coeff = if pos.is_zero() { neg } else { pos.clone() };
            let arg = if pos.is_zero() { negate(&g) } else { g };
            if coeff.is_zero() {
                continue;
            }
            terms.push(monomial_expr(&(factors, Some(arg)), &coeff));
            continue;
        }
        let even = &pos + &neg;
        let odd = &pos - &neg;
        if !even.is_zero() {
            let mut parts: Vec<Expr> = Vec::new();
            parts.push(Expr::Constant(even));
            for (atom, power) in &factors {
                parts.push(atom.clone().pow(*power));
            }
            parts.push(g.clone().cosh());
            terms.push(Expr::product(parts));
        }
        if !odd.is_zero() {
            let mut parts: Vec<Expr> = Vec::new();
            parts.push(Expr::Constant(odd));
            for (atom, power) in &factors {
                parts.push(atom.clone().pow(*power));
            }
            parts.push(g.clone().sinh());
            terms.push(Expr::product(parts));
        }
    }
    terms.sort();
    Expr::sum(terms)
}

impl Expr {
    /// Rewrites into the canonical form described in the module docs.
    /// Expressions equal as functions of their variables and parameters
    /// simplify to structurally equal trees whenever their difference
    /// expands to the zero polynomial.
    pub fn simplify(&self) -> Expr {
        regroup(&normalize(self))
    }
}

#[cfg(test)]
mod tests {
    use super::super::{parse, Var};
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn s(src: &str) -> Expr {
        parse(src).unwrap().simplify()
    }

    #[test]
    fn cancellation_to_zero() {
        assert!(s("x + y - x - y").is_zero());
        assert!(s("sinh(x)^2 - sinh(x)^2").is_zero());
        assert!(s("(x+y)^2 - x^2 - 2*x*y - y^2").is_zero());
    }

    #[test]
    fn double_angle_identity_is_structural() {
        assert_eq!(s("2*sinh(x)*cosh(x)"), s("sinh(2*x)"));
        assert_eq!(s("cosh(x)^2 + sinh(x)^2"), s("cosh(2*x)"));
        assert_eq!(s("cosh(x)^2 - sinh(x)^2"), Expr::one());
    }

    #[test]
    fn squared_sinh_regroups_to_cosh() {
        // sinh(w)^2 = cosh(2w)/2 - 1/2
        let lhs = s("sinh(x+y)^2");
        let expected = s("cosh(2*x+2*y)/2 - 1/2");
        assert_eq!(lhs, expected);
    }

    #[test]
    fn exponentials_merge_and_cancel() {
        assert_eq!(s("exp(x)*exp(y)"), s("exp(x+y)"));
        assert_eq!(s("exp(x)*exp(-x)"), Expr::one());
        assert_eq!(s("exp(x)^3"), s("exp(3*x)"));
    }

    #[test]
    fn unpaired_exponential_stays_exponential() {
        let e = s("3*exp(2*x)");
        assert_eq!(e.to_string(), "3*exp(2*x)");
    }

    #[test]
    fn simplify_is_idempotent() {
        for src in [
            "sinh(x+y)^2",
            "2*sinh(x)*cosh(x) - sinh(2*x)",
            "(4/3)*rho*sinh(x + y - rho*t)^2",
            "exp(x) + exp(-x)",
            "x*(x+1)^-2",
            "cosh(x)^3",
        ] {
            let once = parse(src).unwrap().simplify();
            let twice = once.simplify();
            assert_eq!(once, twice, "not idempotent for {src}");
        }
    }

    #[test]
    fn negative_powers_of_sums_stay_opaque() {
        let e = s("(x+y)^-2 * (x+y)^-1");
        let expected = poly_atom((Expr::var(Var::X) + Expr::var(Var::Y)).simplify(), -3);
        assert_eq!(e, rebuild(&expected));
    }

    #[test]
    fn zero_arguments_collapse() {
        assert!(s("sinh(0)").is_zero());
        assert_eq!(s("cosh(x - x)"), Expr::one());
        assert_eq!(s("exp(0)"), Expr::one());
    }

    #[test]
    fn orientation_of_arguments_is_consistent() {
        // exp(y-x) pairs with exp(x-y) into hyperbolics of the positively
        // oriented argument.
        let e = s("exp(x-y) + exp(y-x)");
        assert_eq!(e, s("2*cosh(x-y)"));
        let o = s("exp(x-y) - exp(y-x)");
        assert_eq!(o, s("2*sinh(x-y)"));
    }

    #[test]
    fn products_distribute_over_sums() {
        let e = s("(x + 2*y)*(x - 2*y)");
        assert_eq!(e, s("x^2 - 4*y^2"));
        let cube = s("(x+y)^3");
        assert_eq!(cube, s("x^3 + 3*x^2*y + 3*x*y^2 + y^3"));
    }

    #[test]
    fn norm_poly_handles_nested_shapes() {
        let mixed = Expr::product(vec![
            Expr::rational(1, 2),
            parse("sinh(2*x)").unwrap(),
            parse("exp(-2*x)").unwrap(),
        ]);
        // sinh(2x)*exp(-2x)/2 = (1 - exp(-4x))/4
        let expected = s("1/4 - exp(-4*x)/4");
        assert_eq!(mixed.simplify(), expected);
    }
}
