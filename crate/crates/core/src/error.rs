use thiserror::Error;

/// Errors raised by the numerical kernel and the physics layers built on it.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// Argument outside the domain of a function (branch cut, zero, bad interval).
    #[error("domain error: {0}")]
    Domain(String),

    /// Invalid physical or numerical parameters.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Quadrature hit its subdivision limit before meeting the tolerance.
    #[error("quadrature did not converge on [{lo}, {hi}]: estimate {estimate:e} +/- {error:e}")]
    NoConvergence {
        lo: f64,
        hi: f64,
        estimate: f64,
        error: f64,
    },

    /// A bracketing method was given an interval with no sign change.
    #[error("no sign change on [{lo}, {hi}] (f(lo) = {f_lo:e}, f(hi) = {f_hi:e})")]
    NoBracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    /// A search ran past its horizon cap.
    #[error("horizon cap reached at t = {t_cap}: {detail}")]
    HorizonExceeded { t_cap: f64, detail: String },

    /// A computed state broke a physical invariant (positivity, trace) beyond slack.
    #[error("physical invariant violated: {0}")]
    Physics(String),

    #[error("unknown preset '{name}'; valid presets: {valid}")]
    UnknownPreset { name: String, valid: String },
}

pub type Result<T> = std::result::Result<T, Error>;
