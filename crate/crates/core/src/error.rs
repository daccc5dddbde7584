use thiserror::Error;

/// A single violated constraint on a model parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub field: &'static str,
    pub message: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    #[error("overflow in {op}: ln(result) = {ln_value:.6} exceeds the f64 range")]
    Overflow { op: &'static str, ln_value: f64 },

    #[error("{op} did not converge: last estimate {estimate:e}, error estimate {error:e}")]
    NoConvergence {
        op: &'static str,
        estimate: f64,
        error: f64,
    },

    #[error("{op}: requested accuracy not reached (value {value:e}, error estimate {error:e})")]
    Accuracy {
        op: &'static str,
        value: f64,
        error: f64,
    },

    #[error("divergent variance: spectral density decays like |tau|^-{exponent} (exponent must exceed 1 for a finite Cov(0))")]
    DivergentVariance { exponent: f64 },

    #[error("method {method} is not available for {model}")]
    MethodUnavailable { method: &'static str, model: String },

    #[error("invalid model: {}", join(.0))]
    Validation(Vec<Violation>),

    #[error("covariance curve does not decay: |Cov| at grid ends ({left:e}, {right:e}) exceeds 1e-10 of the peak {peak:e}")]
    InsufficientDecay { left: f64, right: f64, peak: f64 },

    #[error("aliasing guard violated: f(pi/dt)/f(0) = {ratio:e} > {tolerance:e}; dt must not exceed {dt_bound:e}")]
    AliasGuard {
        ratio: f64,
        tolerance: f64,
        dt_bound: f64,
    },

    #[error("invalid argument: {0}")]
    Argument(String),
}

fn join(v: &[Violation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        op,
        detail: detail.into(),
    }
}
