use thiserror::Error;

/// Errors raised by the scheduling library.
///
/// Every variant names the offending parameter or quantity so that the CLI
/// can report it verbatim.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid {param} = {value}: {reason}")]
    Domain {
        param: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("dimension mismatch: {sensors} sensor variances for {instants} measurement instants")]
    DimensionMismatch { sensors: usize, instants: usize },

    #[error("invalid schedule: instant t{index} = {value} {reason}")]
    InvalidSchedule {
        index: usize,
        value: f64,
        reason: &'static str,
    },

    #[error("no sign change of {what} on [{lo}, {hi}]")]
    Bracket {
        what: &'static str,
        lo: f64,
        hi: f64,
    },

    #[error("coordinate descent did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("coordinate descent t1 = {descent} disagrees with bisection t1 = {bisection}")]
    Discrepancy { descent: f64, bisection: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid sweep spec: {0}")]
    InvalidSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn positive(param: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::Domain {
            param,
            value,
            reason: "must be finite and > 0",
        })
    }
}

pub(crate) fn nonneg_finite(param: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::Domain {
            param,
            value,
            reason: "must be finite and >= 0",
        })
    }
}

/// A sensor variance: `>= 0`, with `+inf` meaning "no information".
pub(crate) fn variance(param: &'static str, value: f64) -> Result<f64> {
    if value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::Domain {
            param,
            value,
            reason: "must be >= 0 (may be +inf)",
        })
    }
}
