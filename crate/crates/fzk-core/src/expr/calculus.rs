//! Exact partial differentiation.

use alloc::vec::Vec;

use super::{Expr, Func, Var};

fn diff_once(e: &Expr, v: Var) -> Expr {
    match e {
        Expr::Constant(_) | Expr::Parameter(_) => Expr::zero(),
        Expr::Variable(w) => {
            if *w == v {
                Expr::one()
            } else {
                Expr::zero()
            }
        }
        Expr::Sum(terms) => Expr::sum(terms.iter().map(|t| diff_once(t, v)).collect()),
        Expr::Product(factors) => {
            let mut terms = Vec::with_capacity(factors.len());
            for i in 0..factors.len() {
                let mut parts: Vec<Expr> = Vec::with_capacity(factors.len());
                for (j, f) in factors.iter().enumerate() {
                    if i == j {
                        parts.push(diff_once(f, v));
                    } else {
                        parts.push(f.clone());
                    }
                }
                terms.push(Expr::product(parts));
            }
            Expr::sum(terms)
        }
        Expr::IntPower(base, n) => {
            let inner = diff_once(base, v);
            Expr::integer(*n) * base.as_ref().clone().pow(n - 1) * inner
        }
        Expr::Call(Func::Sinh, arg) => arg.as_ref().clone().cosh() * diff_once(arg, v),
        Expr::Call(Func::Cosh, arg) => arg.as_ref().clone().sinh() * diff_once(arg, v),
        Expr::Call(Func::Exp, arg) => arg.as_ref().clone().exp() * diff_once(arg, v),
    }
}

impl Expr {
    /// Exact `n`-th partial derivative with respect to `v`, simplified.
    /// `n = 0` returns the expression itself in simplified form.
    pub fn differentiate(&self, v: Var, n: u32) -> Expr {
        let mut current = self.simplify();
        for _ in 0..n {
            current = diff_once(&current, v).simplify();
        }
        current
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    fn d(src: &str, v: Var, n: u32) -> Expr {
        parse(src).unwrap().differentiate(v, n)
    }

    #[test]
    fn polynomial_rules() {
        assert_eq!(d("x^3", Var::X, 1), parse("3*x^2").unwrap().simplify());
        assert_eq!(d("x*y", Var::X, 1), parse("y").unwrap().simplify());
        assert_eq!(d("x*y", Var::T, 1), Expr::zero());
        assert_eq!(d("x^3", Var::X, 3), Expr::integer(6));
        assert_eq!(d("x^-1", Var::X, 1), parse("-x^-2").unwrap().simplify());
    }

    #[test]
    fn chain_rule_through_calls() {
        assert_eq!(
            d("sinh(2*x + y)", Var::X, 1),
            parse("2*cosh(2*x + y)").unwrap().simplify()
        );
        assert_eq!(
            d("cosh(x - rho*t)", Var::T, 1),
            parse("-rho*sinh(x - rho*t)").unwrap().simplify()
        );
        assert_eq!(
            d("exp(-3*x)", Var::X, 2),
            parse("9*exp(-3*x)").unwrap().simplify()
        );
    }

    #[test]
    fn hyperbolic_second_derivatives_close() {
        // d^2/dx^2 sinh(w) = sinh(w) for w = x + y
        assert_eq!(d("sinh(x+y)", Var::X, 2), parse("sinh(x+y)").unwrap().simplify());
        assert_eq!(d("cosh(x+y)", Var::Y, 2), parse("cosh(x+y)").unwrap().simplify());
    }

    #[test]
    fn squared_hyperbolic_derivative() {
        // d/dx sinh(w)^2 = 2 sinh(w) cosh(w) = sinh(2w)
        assert_eq!(d("sinh(x+y)^2", Var::X, 1), parse("sinh(2*x + 2*y)").unwrap().simplify());
    }
}
