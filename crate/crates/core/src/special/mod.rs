//! Gamma, beta and hypergeometric functions.

pub mod beta;
pub mod gamma;
pub mod hypergeometric;

pub use beta::{beta_classical, beta_incomplete, beta_rel_err, ln_beta, ShapeParams};
pub use gamma::{gamma, gamma_real, ln_gamma, pochhammer, pochhammer_real};
pub use hypergeometric::{hyp_1f1, hyp_1f1_real, hyp_pfq, HypergeometricSpec};
