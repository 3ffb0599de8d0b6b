use thiserror::Error;

use crate::spectrum::EnergyLevel;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the domain of a function or type.
    #[error("parameter out of domain: {0}")]
    Domain(String),

    /// U(γ, β, x) is singular at the origin.
    #[error("Tricomi U is singular at x = 0 (gamma = {gamma}, beta = {beta})")]
    Singularity { gamma: f64, beta: u32 },

    /// A series, continuation or integral did not reach the requested accuracy.
    #[error("evaluation of {function}({gamma}, {beta}, {x}) failed: {reason}")]
    Evaluation {
        function: &'static str,
        gamma: f64,
        beta: u32,
        x: f64,
        reason: String,
    },

    /// Value is finite in log space but not representable as `f64`.
    #[error("{function} overflows f64 (ln|value| = {ln_abs})")]
    Overflow { function: &'static str, ln_abs: f64 },

    #[error(
        "adaptive quadrature did not converge on [{a}, {b}]: error estimate {error:e} after {intervals} intervals"
    )]
    Integration {
        a: f64,
        b: f64,
        error: f64,
        intervals: usize,
    },

    /// The 3x3 coefficient system is numerically singular at this energy.
    #[error("degenerate matching system at e0 = {e0} (condition number {condition:e})")]
    DegenerateMatching { e0: f64, condition: f64 },

    #[error("root refinement failed in [{lo}, {hi}]: {reason}")]
    RootRefinement { lo: f64, hi: f64, reason: String },

    /// Fewer levels than requested exist below the search ceiling.
    #[error("found {} of {requested} levels below e0 = {ceiling}", found.len())]
    PartialLevels {
        requested: usize,
        ceiling: f64,
        found: Vec<EnergyLevel>,
    },

    #[error("eigensolver failure: {0}")]
    Eigen(String),
}

impl Error {
    pub(crate) fn eval(function: &'static str, gamma: f64, beta: u32, x: f64, reason: impl Into<String>) -> Self {
        Error::Evaluation {
            function,
            gamma,
            beta,
            x,
            reason: reason.into(),
        }
    }
}
