//! Earlier extensions of the beta function: the exponential kernel
//! `e^(-p/(t(1-t)))` and its confluent hypergeometric generalization, plus a
//! term-by-term expansion of the former that shows where it breaks down.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_unit, EvalResult, Method, QuadConfig};
use crate::special::{beta_classical, gamma_real, hyp_1f1, ln_gamma, ShapeParams};

/// Below this log-value the exponential kernel is treated as zero.
const LN_UNDERFLOW: f64 = -745.0;

/// ln of the kernel argument past which only the leading asymptotic term of
/// ₁F₁ is kept.
const FAR_ARGUMENT: f64 = 690.0;

/// Parameters of `B_p^(δ,ζ;κ,μ)(α, β)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtendedBetaParams {
    pub shapes: ShapeParams,
    pub p: f64,
    pub delta: f64,
    pub zeta: f64,
    pub kappa: f64,
    pub mu: f64,
}

impl ExtendedBetaParams {
    /// Two-parameter kernel with `κ = μ = 1`.
    pub fn new(shapes: ShapeParams, p: f64, delta: f64, zeta: f64) -> Self {
        ExtendedBetaParams {
            shapes,
            p,
            delta,
            zeta,
            kappa: 1.0,
            mu: 1.0,
        }
    }

    pub fn with_exponents(mut self, kappa: f64, mu: f64) -> Self {
        self.kappa = kappa;
        self.mu = mu;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p >= 0.0 && self.p.is_finite()) {
            return Err(Error::domain(format!("p must be finite and >= 0, got {}", self.p)));
        }
        if !(self.delta > 0.0 && self.zeta > 0.0) {
            return Err(Error::domain(format!(
                "delta and zeta must be positive, got {} and {}",
                self.delta, self.zeta
            )));
        }
        if !(self.kappa > 0.0 && self.mu > 0.0) {
            return Err(Error::domain(format!(
                "kappa and mu must be positive, got {} and {}",
                self.kappa, self.mu
            )));
        }
        if !self.shapes.is_finite() {
            return Err(Error::domain("shapes must be finite"));
        }
        if self.p == 0.0 {
            self.shapes.require_classical()?;
        }
        Ok(())
    }
}

fn check_p(s: ShapeParams, p: f64) -> Result<()> {
    if !(p >= 0.0 && p.is_finite()) {
        return Err(Error::domain(format!("p must be finite and >= 0, got {p}")));
    }
    if !s.is_finite() {
        return Err(Error::domain("shapes must be finite"));
    }
    if p == 0.0 {
        s.require_classical()?;
    }
    Ok(())
}

/// `B_p(α, β) = ∫₀¹ t^(α−1) (1−t)^(β−1) e^(−p/(t(1−t))) dt` by quadrature.
///
/// For `p > 0` the kernel vanishes at both ends, so any real shapes are
/// accepted.
pub fn ext_beta_chaudhry(s: ShapeParams, p: f64, cfg: &QuadConfig) -> Result<EvalResult<f64>> {
    check_p(s, p)?;
    let (a1, b1) = (s.alpha - 1.0, s.beta - 1.0);
    integrate_unit(
        |t: f64, c: f64| {
            let ln = a1 * t.ln() + b1 * c.ln() - p / (t * c);
            if ln < LN_UNDERFLOW {
                0.0
            } else {
                ln.exp()
            }
        },
        cfg,
    )
    .map(|r| r.with_method(Method::QuadUnit))
}

/// `∫₀¹ t^(α−1)(1−t)^(β−1) ₁F₁(δ; ζ; −p / (t^κ (1−t)^μ)) dt` by quadrature.
pub fn ext_beta_srivastava(params: &ExtendedBetaParams, cfg: &QuadConfig) -> Result<EvalResult<f64>> {
    params.validate()?;
    let ExtendedBetaParams {
        shapes,
        p,
        delta,
        zeta,
        kappa,
        mu,
    } = *params;
    if delta == zeta && kappa == 1.0 && mu == 1.0 {
        // ₁F₁(δ; δ; z) = e^z
        return ext_beta_chaudhry(shapes, p, cfg);
    }
    let (a1, b1) = (shapes.alpha - 1.0, shapes.beta - 1.0);
    let (d, z) = (Complex64::new(delta, 0.0), Complex64::new(zeta, 0.0));
    // Γ(ζ)/Γ(ζ−δ) as (sign, ln|.|); None when 1/Γ(ζ−δ) vanishes
    let far_scale = if zeta > delta {
        Some((1.0, ln_gamma(zeta)? - ln_gamma(zeta - delta)?))
    } else {
        match gamma_real(zeta - delta) {
            Ok(g) => Some((g.signum(), ln_gamma(zeta)? - g.abs().ln())),
            Err(Error::Pole(_)) => None,
            Err(e) => return Err(e),
        }
    };
    let failure = std::sync::Mutex::new(None);
    let result = integrate_unit(
        |t: f64, c: f64| {
            let (lt, lc) = (t.ln(), c.ln());
            if p == 0.0 {
                return (a1 * lt + b1 * lc).exp();
            }
            let ln_arg = p.ln() - kappa * lt - mu * lc;
            if ln_arg > FAR_ARGUMENT {
                // leading asymptotic term, |₁F₁| = |Γ(ζ)/Γ(ζ−δ)| x^(−δ)
                return match far_scale {
                    Some((sign, ln_scale)) => sign * (a1 * lt + b1 * lc + ln_scale - delta * ln_arg).exp(),
                    None => 0.0,
                };
            }
            let arg = -ln_arg.exp();
            let kernel = {
                match hyp_1f1(d, z, Complex64::new(arg, 0.0)) {
                    Ok(r) => r.value.re,
                    Err(e) => {
                        failure.lock().unwrap().get_or_insert(e);
                        return f64::NAN;
                    }
                }
            };
            if kernel == 0.0 {
                return 0.0;
            }
            kernel.signum() * (a1 * lt + b1 * lc + kernel.abs().ln()).exp()
        },
        cfg,
    );
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    result.map(|r| r.with_method(Method::QuadUnit))
}

/// Whether a term of the expansion exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermStatus {
    Defined,
    TermUndefined,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NaiveTerm {
    pub n: usize,
    pub term: Option<f64>,
    pub status: TermStatus,
    pub partial_sum: f64,
}

/// Partial sums of `Σ (−p)^n / n! · B(α−n, β−n)`, the expansion obtained by
/// expanding the exponential kernel under the integral.
///
/// A term is undefined once either shifted shape reaches zero; undefined
/// terms are reported and skipped. This does not evaluate `B_p`.
pub fn naive_series_partial_sums(s: ShapeParams, p: f64, n_max: usize) -> Vec<NaiveTerm> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut partial = 0.0;
    let mut coef = 1.0; // (−p)^n / n!
    for n in 0..=n_max {
        if n > 0 {
            coef *= -p / n as f64;
        }
        let shifted = s.shifted(-(n as f64));
        let term = if shifted.alpha > 0.0 && shifted.beta > 0.0 {
            beta_classical(shifted).ok().map(|b| if coef == 0.0 { 0.0 } else { coef * b })
        } else {
            None
        };
        if let Some(v) = term {
            partial += v;
        }
        out.push(NaiveTerm {
            n,
            term,
            status: if term.is_some() {
                TermStatus::Defined
            } else {
                TermStatus::TermUndefined
            },
            partial_sum: partial,
        });
    }
    out
}
