//! Analytic-approximate solver core for a family of time-fractional
//! third-order dispersive PDEs
//!
//!   D_t^alpha u + a (u^p)_x + b3 (u^q)_xxx + bm (u^r)_xyy = 0,
//!   u(x, y, 0) = f(x, y),  0 < alpha <= 1,
//!
//! built from three layers:
//!
//! * [`expr`]: exact symbolic expressions in x, y, t and named parameters,
//!   with parsing, differentiation, canonical simplification through the
//!   exponential normal form, and f64 evaluation;
//! * [`series`]: truncated fractional power series in t over the exponent
//!   lattice {a + b*alpha} with termwise Caputo derivative and
//!   Riemann-Liouville integral, Gamma factors kept as deferred symbolic
//!   tokens so one solve covers every alpha;
//! * [`problem`], [`rpsm`], [`pia`]: the equation family, its residual
//!   operator, and the two series solvers (residual power series and
//!   perturbation-iteration with one correction term).
//!
//! The crate is `no_std` (with `alloc`): all I/O, file formats, and the
//! command line live in the companion binary crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod expr;
pub mod gamma;
pub mod pia;
pub mod problem;
pub mod rpsm;
pub mod series;

pub use expr::{
    numeric_equal, parse, Bindings, EvalError, Expr, Func, ParseError, SampleDomain, Var,
    SAMPLE_POINTS,
};
pub use gamma::{gamma, ln_gamma, GammaPole};
pub use pia::{pia_solve, pia_solve_bounded};
pub use problem::{
    initial_series, make_fzk222, parse_rational, reference_eval, reference_residual, residual,
    spatial_operator, Method, ProblemError, ProblemSpec, SolutionSeries, SolverError,
    SIZE_GUARD_NODES,
};
pub use rpsm::{rpsm_solve, rpsm_solve_bounded};
pub use series::{Coeff, FracExponent, FracSeries, GammaArg, GammaRatio, SeriesError};
