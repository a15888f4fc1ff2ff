//! Residual power series solver.
//!
//! The order-K solution is u_K = sum over n of f_n(x,y) t^(n*alpha) /
//! Gamma(1 + n*alpha). The coefficients come from the annihilation rule:
//! forcing D_t^((k)alpha) Res(x,y,0) = 0 order by order. In the residual
//! of u_(k+1), the Caputo derivative contributes the unknown f_(k+1) at
//! lattice exponent (0,k) with raw weight 1/Gamma(1+k*alpha), while the
//! spatial operator's (0,k) coefficient cannot involve f_(k+1) (that
//! coefficient enters u at exponent (0,k+1) and the spatial operator takes
//! no t-derivatives). The unknown therefore appears linearly and is read
//! off directly:
//!
//!   f_(k+1) = -Gamma(1+k*alpha) * [coefficient of (0,k) in N(u_k)].

use alloc::vec::Vec;

use crate::problem::{
    spatial_operator, Method, ProblemSpec, SolutionSeries, SolverError, SIZE_GUARD_NODES,
};
use crate::series::{Coeff, FracExponent, FracSeries, GammaArg, SeriesError};

/// Solver state: the canonical coefficients found so far. Position n holds
/// f_n; the deferred Gamma tokens inside each coefficient keep the solve
/// valid for every alpha.
#[derive(Debug, Clone)]
pub struct RpsmState {
    pub spec: ProblemSpec,
    coeffs: Vec<Coeff>,
    max_order: i64,
}

impl RpsmState {
    /// Starts from f_0 = initial condition.
    pub fn start(spec: &ProblemSpec, max_order: i64) -> RpsmState {
        RpsmState {
            spec: spec.clone(),
            coeffs: alloc::vec![Coeff::from_expr(spec.initial.clone())],
            max_order,
        }
    }

    /// Highest order k for which f_k is known.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficients(&self) -> &[Coeff] {
        &self.coeffs
    }

    /// The truncated series u_k built from the known coefficients, stored
    /// raw: c_(0,n) = f_n / Gamma(1+n*alpha).
    pub fn partial_sum(&self) -> Result<FracSeries, SeriesError> {
        let mut series = FracSeries::new(self.max_order);
        for (n, f_n) in self.coeffs.iter().enumerate() {
            let exp = FracExponent::new(0, n as i64)?;
            let raw = f_n.divided_by_gamma(GammaArg::new(1, n as i64))?;
            series.insert_add(exp, raw)?;
        }
        Ok(series)
    }
}

/// Computes the next canonical coefficient f_(k+1) from the current state.
pub fn rpsm_next_coefficient(state: &RpsmState) -> Result<Coeff, SeriesError> {
    let k = state.order() as i64;
    let u_k = state.partial_sum()?;
    let n_series = spatial_operator(&state.spec, &u_k)?;
    let raw = n_series.coefficient(FracExponent::new(0, k)?);
    raw.neg().scaled_by_gamma(GammaArg::new(1, k))
}

/// Runs the solver to the requested order with an explicit node budget.
pub fn rpsm_solve_bounded(
    spec: &ProblemSpec,
    order: u32,
    node_limit: usize,
) -> Result<SolutionSeries, SolverError> {
    spec.validate()?;
    let max_order = order as i64 + 1;
    let mut state = RpsmState::start(spec, max_order);
    for _ in 0..order {
        let next = rpsm_next_coefficient(&state)?;
        state.coeffs.push(next);
        let nodes = state.coeffs.iter().map(Coeff::node_count).sum::<usize>();
        if nodes > node_limit {
            return Err(SolverError::SizeGuard {
                nodes,
                limit: node_limit,
            });
        }
    }
    Ok(SolutionSeries {
        method: Method::Rpsm,
        order,
        series: state.partial_sum().map_err(SolverError::Series)?,
        spec: spec.clone(),
    })
}

/// Runs the solver to the requested order (K >= 1) with the default budget.
pub fn rpsm_solve(spec: &ProblemSpec, order: u32) -> Result<SolutionSeries, SolverError> {
    rpsm_solve_bounded(spec, order, SIZE_GUARD_NODES)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{numeric_equal, parse, Bindings, Expr, SampleDomain, Var};
    use crate::problem::{make_fzk222, residual};

    fn fzk_domain() -> SampleDomain {
        SampleDomain::new()
            .with("x", 0.0, 1.0)
            .with("y", 0.0, 1.0)
            .with("rho", 0.0005, 0.002)
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    /// f and its named derivative, for instantiating the printed
    /// coefficient formulas.
    fn d(e: &Expr, nx: u32, ny: u32) -> Expr {
        e.differentiate(Var::X, nx).differentiate(Var::Y, ny)
    }

    /// -2 f f_x - (1/4) f_yy f_x - (1/2) f_y f_xy - (1/4) f f_xyy
    /// - (3/4) f_x f_xx - (1/4) f f_xxx applied to any profile.
    fn first_coefficient_formula(f: &Expr) -> Expr {
        let fx = d(f, 1, 0);
        let fy = d(f, 0, 1);
        let fxy = d(f, 1, 1);
        let fyy = d(f, 0, 2);
        let fxx = d(f, 2, 0);
        let fxyy = d(f, 1, 2);
        let fxxx = d(f, 3, 0);
        (Expr::integer(-2) * f.clone() * fx.clone()
            + Expr::rational(-1, 4) * fyy * fx.clone()
            + Expr::rational(-1, 2) * fy * fxy
            + Expr::rational(-1, 4) * f.clone() * fxyy
            + Expr::rational(-3, 4) * fx * fxx
            + Expr::rational(-1, 4) * f.clone() * fxxx)
            .simplify()
    }

    /// (1/4)(-8 f1 f_x - f1_yy f_x - 8 f f1_x - f_yy f1_x - 2 f1_y f_xy
    /// - 2 f_y f1_xy - f1 f_xyy - f f1_xyy - 3 f1_x f_xx - 3 f_x f1_xx
    /// - f1 f_xxx - f f1_xxx), the second-coefficient bilinear form.
    fn second_coefficient_formula(f: &Expr, f1: &Expr) -> Expr {
        let sum = Expr::integer(-8) * f1.clone() * d(f, 1, 0)
            + -(d(f1, 0, 2) * d(f, 1, 0))
            + Expr::integer(-8) * f.clone() * d(f1, 1, 0)
            + -(d(f, 0, 2) * d(f1, 1, 0))
            + Expr::integer(-2) * d(f1, 0, 1) * d(f, 1, 1)
            + Expr::integer(-2) * d(f, 0, 1) * d(f1, 1, 1)
            + -(f1.clone() * d(f, 1, 2))
            + -(f.clone() * d(f1, 1, 2))
            + Expr::integer(-3) * d(f1, 1, 0) * d(f, 2, 0)
            + Expr::integer(-3) * d(f, 1, 0) * d(f1, 2, 0)
            + -(f1.clone() * d(f, 3, 0))
            + -(f.clone() * d(f1, 3, 0));
        (Expr::rational(1, 4) * sum).simplify()
    }

    #[test]
    fn first_coefficient_closed_form() {
        let spec = make_fzk222(0.001);
        let state = RpsmState::start(&spec, 4);
        let f1 = rpsm_next_coefficient(&state).unwrap();
        let parts: Vec<_> = f1.parts().collect();
        assert_eq!(parts.len(), 1);
        assert!(parts[0].0.is_one(), "f_1 must carry no Gamma token");

        let expected = parse("(8/9)*rho^2*(4*sinh(2*x+2*y) - 5*sinh(4*x+4*y))").unwrap();
        assert!(numeric_equal(parts[0].1, &expected, &fzk_domain(), 1e-12));

        let general = first_coefficient_formula(&spec.initial);
        assert!(numeric_equal(parts[0].1, &general, &fzk_domain(), 1e-12));

        let b = Bindings::point(0.1, 0.1, 0.0).with("rho", 0.001);
        let v = parts[0].1.evaluate(&b).unwrap();
        assert!(close(v, -2.4866850e-6, 1e-7), "f_1(0.1,0.1) = {v}");
    }

    #[test]
    fn second_coefficient_matches_bilinear_form() {
        let spec = make_fzk222(0.001);
        let mut state = RpsmState::start(&spec, 4);
        let f1_coeff = rpsm_next_coefficient(&state).unwrap();
        state.coeffs.push(f1_coeff.clone());
        let f2_coeff = rpsm_next_coefficient(&state).unwrap();

        // the cross term's Gamma(1+alpha)/Gamma(1+alpha) must cancel,
        // leaving an alpha-free expression
        let parts: Vec<_> = f2_coeff.parts().collect();
        assert_eq!(parts.len(), 1);
        assert!(parts[0].0.is_one(), "f_2 must carry no Gamma token");

        let f1_parts: Vec<_> = f1_coeff.parts().collect();
        let expected = second_coefficient_formula(&spec.initial, f1_parts[0].1);
        assert!(numeric_equal(parts[0].1, &expected, &fzk_domain(), 1e-10));
    }

    #[test]
    fn third_coefficient_carries_the_expected_token() {
        let spec = make_fzk222(0.001);
        let mut state = RpsmState::start(&spec, 4);
        for _ in 0..2 {
            let next = rpsm_next_coefficient(&state).unwrap();
            state.coeffs.push(next);
        }
        let f3 = rpsm_next_coefficient(&state).unwrap();
        // f_3 = -2 L(f f_2) - Gamma(1+2a)/Gamma(1+a)^2 L(f_1^2): one
        // token-free part and one carrying the ratio
        let mut token_strings: Vec<alloc::string::String> =
            f3.parts().map(|(r, _)| alloc::format!("{r}")).collect();
        token_strings.sort();
        assert_eq!(token_strings.len(), 2);
        assert_eq!(token_strings[0], "1");
        assert_eq!(token_strings[1], "gamma(1+2a)/gamma(1+a)/gamma(1+a)");
    }

    #[test]
    fn constant_profile_gives_zero_coefficients() {
        let mut spec = make_fzk222(0.001);
        spec.initial = Expr::rational(3, 5);
        let sol = rpsm_solve(&spec, 3).unwrap();
        assert_eq!(sol.series.len(), 1);
        let c = sol.series.coefficient(FracExponent::ZERO);
        assert!(!c.is_zero());
    }

    #[test]
    fn order_one_value_at_diagnostic_point() {
        // u_1(0.1, 0.1, 0.2) at alpha = 1 is f + t f_1 with
        // f = (4/3)(0.001) sinh^2(0.2) and f_1 = -2.4866850e-6
        let spec = make_fzk222(0.001);
        let sol = rpsm_solve(&spec, 1).unwrap();
        let v = sol.eval_at(0.1, 0.1, 0.2, 1.0).unwrap();
        let f: f64 = 4.0 / 3.0 * 0.001 * (0.2_f64).sinh().powi(2);
        let expected = f + 0.2 * (-2.4866850e-6);
        assert!(close(v, expected, 1e-7), "{v} vs {expected}");
    }

    #[test]
    fn table_value_order_three() {
        let spec = make_fzk222(0.001);
        let sol = rpsm_solve(&spec, 3).unwrap();
        let v = sol.eval_at(0.1, 0.1, 0.2, 1.0).unwrap();
        assert!(close(v, 5.35536e-5, 2e-5), "got {v}");
    }

    #[test]
    fn residual_annihilation_order_by_order() {
        let spec = make_fzk222(0.001);
        let b = Bindings::point(0.3, 0.4, 0.0).with("rho", 0.001);
        for k in 1..=3u32 {
            let sol = rpsm_solve(&spec, k).unwrap();
            let res = residual(&spec, &sol.series).unwrap();
            // scale of the first surviving coefficient, for a relative check
            let scale = res
                .coefficient(FracExponent::new(0, k as i64).unwrap())
                .eval(&b, 1.0)
                .unwrap()
                .abs()
                .max(1e-12);
            for j in 0..k as i64 {
                let c = res.coefficient(FracExponent::new(0, j).unwrap());
                for alpha in [0.67, 1.0] {
                    let v = c.eval(&b, alpha).unwrap();
                    assert!(
                        v.abs() <= 1e-10 * scale.max(1.0),
                        "k={k} j={j} alpha={alpha}: coefficient {v}"
                    );
                }
            }
        }
    }

    #[test]
    fn coefficients_are_time_free() {
        let spec = make_fzk222(0.001);
        let mut state = RpsmState::start(&spec, 4);
        for _ in 0..3 {
            let next = rpsm_next_coefficient(&state).unwrap();
            for (_, e) in next.parts() {
                assert!(!e.contains_var(Var::T));
            }
            state.coeffs.push(next);
        }
    }

    #[test]
    fn doubling_rho_scales_first_coefficients() {
        let spec = make_fzk222(0.001);
        let state = RpsmState::start(&spec, 4);
        let f1 = rpsm_next_coefficient(&state).unwrap();
        let b1 = Bindings::point(0.4, 0.3, 0.0).with("rho", 0.001);
        let b2 = Bindings::point(0.4, 0.3, 0.0).with("rho", 0.002);

        let f0 = &spec.initial;
        let r0 = f0.evaluate(&b2).unwrap() / f0.evaluate(&b1).unwrap();
        assert!(close(r0, 2.0, 1e-12));

        let f1_parts: Vec<_> = f1.parts().collect();
        let r1 = f1_parts[0].1.evaluate(&b2).unwrap() / f1_parts[0].1.evaluate(&b1).unwrap();
        assert!(close(r1, 4.0, 1e-12));
    }

    #[test]
    fn size_guard_trips_loudly() {
        let spec = make_fzk222(0.001);
        let err = rpsm_solve_bounded(&spec, 3, 50).unwrap_err();
        assert!(matches!(err, SolverError::SizeGuard { limit: 50, .. }));
    }

    #[test]
    fn solution_series_starts_at_initial() {
        let spec = make_fzk222(0.001);
        let sol = rpsm_solve(&spec, 2).unwrap();
        let c = sol.series.coefficient(FracExponent::ZERO);
        let parts: Vec<_> = c.parts().collect();
        assert_eq!(parts[0].1, &spec.initial.simplify());
    }
}
