pub mod error;
pub mod extended;
pub mod mebd;
pub mod mecbf;
pub mod quadrature;
pub mod scalar;
pub mod series;
pub mod special;
pub mod verify;

pub use error::{Endpoint, Error, Result};
pub use quadrature::{integrate_half_line, integrate_real_line, integrate_unit, EvalResult, Method, QuadConfig};
pub use scalar::Scalar;
pub use series::{SeriesConfig, SeriesDiagnostics, StopReason};
pub use special::{
    beta_classical, beta_incomplete, beta_rel_err, gamma, gamma_real, hyp_1f1, hyp_1f1_real, hyp_pfq, ln_beta, ln_gamma, pochhammer,
    HypergeometricSpec, ShapeParams,
};
pub use extended::{ext_beta_chaudhry, ext_beta_srivastava, naive_series_partial_sums, ExtendedBetaParams, NaiveTerm, TermStatus};
pub use mecbf::{
    mecbf, mecbf_incomplete, mecbf_incomplete_upper, mecbf_quad, mecbf_representation, mecbf_series, Engine, MecbfParam,
    Representation, COMPAT_RADIUS,
};
pub use mebd::{cdf, ks_critical, ks_statistic, mean, mgf, pdf, raw_moment, sample, variance, CdfTable, DistSpec};
pub use verify::{run_suite, Check, Report, Suite, VerifyOptions};
