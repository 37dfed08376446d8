use num_complex::Complex64;
use thiserror::Error;

/// Which end of an integration interval an error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    Lower,
    Upper,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole of the gamma function at {0}")]
    Pole(f64),

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("non-integrable singularity at the {endpoint:?} endpoint (estimated exponent {exponent})")]
    NonIntegrableSingularity { endpoint: Endpoint, exponent: f64 },

    #[error("integrand does not decay fast enough at infinity (estimated exponent {exponent})")]
    SlowDecay { exponent: f64 },

    #[error("evaluation budget exceeded after {evals} evaluations: best estimate {best} with error {abs_err_est:e}")]
    BudgetExceeded {
        best: Complex64,
        abs_err_est: f64,
        evals: usize,
    },

    #[error("divergent series: {0}")]
    DivergentSeries(String),

    #[error("lower parameter {0} is a non-positive integer")]
    LowerParamPole(Complex64),

    #[error("|m| = {0} exceeds the compatibility radius 2.0335")]
    CompatRadiusExceeded(f64),

    #[error("representation index {0} is not in 1..=9")]
    InvalidRepresentationIndex(usize),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by arguments outside a function's domain.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::Domain(_) | Error::Pole(_) | Error::LowerParamPole(_) | Error::CompatRadiusExceeded(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
