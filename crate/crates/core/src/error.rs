//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("parameter `{name}` must be strictly positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },

    #[error("state component {var} must be finite and nonnegative, got {value}")]
    InvalidStateComponent { var: &'static str, value: f64 },

    #[error("inactive state component {var} must be exactly zero, got {value}")]
    InactiveNotZero { var: &'static str, value: f64 },

    #[error("state variables {state} do not match the model's variables {model}")]
    DimensionMismatch { state: String, model: String },

    #[error("variable {0} is not active in this model")]
    InactiveVariable(&'static str),

    #[error("{0}")]
    Domain(String),

    #[error("time {t} outside trajectory range [0, {t_max}]")]
    TimeOutOfRange { t: f64, t_max: f64 },

    #[error("invalid integrator configuration: {0}")]
    InvalidConfig(String),

    /// Newton iteration ran out of iterations. The trace holds the residual
    /// norm at each iterate, so a caller can see how the search stalled.
    #[error("Newton iteration did not converge after {iterations} iterations (last residual {residual:e})")]
    NewtonNoConvergence {
        iterations: usize,
        residual: f64,
        trace: Vec<f64>,
    },

    #[error("singular Jacobian in Newton step at iteration {iteration}")]
    NewtonSingular { iteration: usize, trace: Vec<f64> },

    #[error("definition {definition} does not apply to the {model} model")]
    InapplicableDefinition {
        definition: &'static str,
        model: &'static str,
    },

    #[error("scan grid must be nonempty, finite, and strictly increasing")]
    BadGrid,

    #[error("expected the full wage-led model, got {0}")]
    WrongModelKind(&'static str),

    #[error("region bound for {var} must satisfy 0 < lo < hi, got {lo}..{hi}")]
    BadRegion { var: &'static str, lo: f64, hi: f64 },
}
