use thiserror::Error;

use crate::variational::SolveResult;

/// Everything that can go wrong inside the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular parameter: {0}")]
    SingularParameter(String),

    #[error("non-finite integrand value {value} at node {node}")]
    Integrand { node: f64, value: f64 },

    #[error("log-derivative pole at {at}")]
    Pole { at: f64 },

    #[error("evaluation failed: {0}")]
    Evaluation(String),

    #[error("unsupported state {0}; only 1ssg and 2psu can be solved")]
    UnsupportedState(String),

    #[error("minimizer hit its budget after {evaluations} evaluations")]
    IterationLimit {
        evaluations: usize,
        best: Box<SolveResult>,
    },

    #[error("root not bracketed: {0}")]
    NeedsBracket(String),

    #[error("point {at} lies outside the profile grid [{lo}, {hi}]")]
    Extrapolation { at: f64, lo: f64, hi: f64 },

    #[error("weight underflow while integrating {0}")]
    Scaling(String),

    #[error("numerical singularity: {0}")]
    NumericalSingularity(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error("ODE step failed at x = {at}: {reason}")]
    Step { at: f64, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
