//! JSON rendering of a solved series.
//!
//! Each term carries its lattice exponent as an [int, alpha] pair and its
//! coefficient parts as strings: the deferred Gamma token and a spatial
//! expression. The expression strings use the same grammar the problem
//! file accepts, so a dumped coefficient can be parsed back and evaluated.

use fzk_core::SolutionSeries;
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct SeriesDump {
    pub method: &'static str,
    pub order: u32,
    pub max_order: i64,
    pub terms: Vec<TermDump>,
}

#[derive(Debug, Serialize)]
pub struct TermDump {
    /// The lattice point (a, b) of the exponent a + b*alpha.
    pub exponent: [i64; 2],
    pub parts: Vec<PartDump>,
}

#[derive(Debug, Serialize)]
pub struct PartDump {
    /// Deferred Gamma token, "1" when the part is purely spatial.
    pub gamma: String,
    /// Spatial expression in the problem-file grammar.
    pub coefficient: String,
}

pub fn solution_dump(solution: &SolutionSeries) -> SeriesDump {
    let terms = solution
        .series
        .terms()
        .map(|(exponent, coeff)| TermDump {
            exponent: [exponent.int_part, exponent.alpha_part],
            parts: coeff
                .parts()
                .map(|(gamma, expr)| PartDump {
                    gamma: gamma.to_string(),
                    coefficient: expr.to_string(),
                })
                .collect(),
        })
        .collect();
    SeriesDump {
        method: solution.method.name(),
        order: solution.order,
        max_order: solution.series.max_order(),
        terms,
    }
}

pub fn solution_to_json(solution: &SolutionSeries) -> String {
    let mut text = serde_json::to_string_pretty(&solution_dump(solution))
        .expect("dump has no non-serializable parts");
    text.push('\n');
    text
}
