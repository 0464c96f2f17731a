use thiserror::Error;

/// Errors raised by the estimation engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("time-local rates are singular at t = {time} (xi vanishes)")]
    SingularRate { time: f64 },

    #[error("snapshot is not completely positive (margin {margin:e})")]
    NotCompletelyPositive { margin: f64 },

    #[error("probability {value:e} for weight {m} is negative beyond rounding")]
    NegativeProbability { m: usize, value: f64 },

    #[error("efficiency undefined: {0}")]
    UndefinedEfficiency(String),

    #[error("refinement did not converge within {iterations} steps on bracket [{lo}, {hi}]")]
    NonConvergence { lo: f64, hi: f64, iterations: usize },

    #[error("budget {budget} does not cover a single round costing {cost}")]
    InsufficientBudget { budget: f64, cost: f64 },

    #[error("eigensolver stalled after {sweeps} sweeps (off-diagonal norm {residual:e})")]
    EigenNonConvergence { sweeps: usize, residual: f64 },

    #[error("integrator step size underflow at t = {time}")]
    StepUnderflow { time: f64 },

    #[error("dense simulation limited to n <= {max}, got n = {n}")]
    Size { n: usize, max: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
