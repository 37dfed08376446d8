//! Double-exponential (tanh-sinh) quadrature on the open unit interval, plus
//! the half-line and real-line variants built on top of it by an explicit
//! change of variables.
//!
//! Integrands on the unit interval receive both the abscissa `t` and its
//! complement `1 - t`. Near `t = 1` the complement is computed directly from
//! the node formula, so factors such as `(1 - t)^(b - 1)` keep full relative
//! precision even where `t` itself rounds to `1.0`.
//!
//! The trapezoid sum in the transformed variable `s` is truncated at
//! `|s| = 6`, which puts the outermost nodes roughly `1e-275` from the
//! endpoints. The part of the integral beyond the outermost node is
//! estimated from a local power-law fit `f ~ C t^(a-1)` and added as a
//! correction, which matters only for exponents `a` close to zero.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Endpoint, Error, Result};
use crate::scalar::Scalar;

/// Largest |s| used by the trapezoid sum.
const S_MAX: f64 = 6.0;
/// Refinement levels that always run before convergence is tested.
const MIN_LEVEL: usize = 4;
/// Inflation factor applied to the difference of successive levels.
const ERR_INFLATION: f64 = 10.0;
/// A side of the sum is cut once this many consecutive node contributions
/// fall below `NEGLIGIBLE * |previous estimate|`.
const NEGLIGIBLE: f64 = 1e-18;
const NEGLIGIBLE_RUN: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_evals: usize,
    pub level_cap: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_evals: 200_000,
            level_cap: 14,
        }
    }
}

impl QuadConfig {
    pub fn new(abs_tol: f64, rel_tol: f64, max_evals: usize, level_cap: usize) -> Result<Self> {
        let cfg = QuadConfig {
            abs_tol,
            rel_tol,
            max_evals,
            level_cap,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_max_evals(mut self, max_evals: usize) -> Self {
        self.max_evals = max_evals;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol >= 0.0 && self.rel_tol >= 0.0) {
            return Err(Error::domain("quadrature tolerances must be non-negative"));
        }
        if self.abs_tol == 0.0 && self.rel_tol == 0.0 {
            return Err(Error::domain("abs_tol and rel_tol cannot both be zero"));
        }
        if self.max_evals < 15 {
            return Err(Error::domain("max_evals must be at least 15"));
        }
        if self.level_cap == 0 {
            return Err(Error::domain("level_cap must be positive"));
        }
        Ok(())
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// How a value was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Closed form through the gamma function.
    GammaRelation,
    Series,
    QuadUnit,
    /// Integral representation number `k` (1..=9).
    Representation(u8),
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Method::GammaRelation => write!(f, "gamma_relation"),
            Method::Series => write!(f, "series"),
            Method::QuadUnit => write!(f, "quad_unit"),
            Method::Representation(k) => write!(f, "representation_{k}"),
        }
    }
}

/// A computed value with its absolute error estimate and work counter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult<T> {
    pub value: T,
    pub abs_err_est: f64,
    pub evals: usize,
    pub method: Method,
}

impl<T> EvalResult<T> {
    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> EvalResult<U> {
        EvalResult {
            value: f(self.value),
            abs_err_est: self.abs_err_est,
            evals: self.evals,
            method: self.method,
        }
    }
}

/// Node of the transformed rule at `s >= 0`: the small distance to the
/// nearer endpoint, its complement, its logarithm, and the weight `dt/ds`.
#[derive(Debug, Clone, Copy)]
struct Node {
    near: f64,
    far: f64,
    ln_near: f64,
    weight: f64,
}

fn node(s: f64) -> Node {
    let u = FRAC_PI_2 * s.sinh();
    let e = (-2.0 * u).exp();
    let near = e / (1.0 + e);
    let far = 1.0 / (1.0 + e);
    Node {
        near,
        far,
        ln_near: -2.0 * u - e.ln_1p(),
        weight: FRAC_PI_2 * s.cosh() * 2.0 * near * far,
    }
}

/// Evaluate at the node for `s` on the given side: lower side means the
/// abscissa is close to 0.
fn eval_at<T: Scalar, F: Fn(f64, f64) -> T>(f: &F, nd: &Node, side: Endpoint) -> T {
    match side {
        Endpoint::Lower => f(nd.near, nd.far),
        Endpoint::Upper => f(nd.far, nd.near),
    }
}

/// Power-law extrapolation of the integral between an endpoint and the
/// outermost node.
#[derive(Debug, Clone, Copy)]
struct EndpointTail<T> {
    /// Integral over the excluded sliver (value to add).
    integral: T,
    /// Value of the outermost node's weighted contribution, `w * f`.
    outer_wf: T,
    uncertainty: f64,
    /// Estimated exponent `a` in `f ~ C t^(a - 1)`; `None` when `f` vanishes.
    exponent: Option<f64>,
    /// `|f(t) * t|` at the outermost node.
    scale: f64,
}

impl<T: Scalar> EndpointTail<T> {
    /// Excluded-sliver integral minus the Euler-Maclaurin end terms of a
    /// trapezoid sum that stops at `s = S_MAX` with step `h`.
    fn correction(&self, h: f64) -> T {
        let Some(a) = self.exponent else {
            return T::zero();
        };
        if a <= 0.0 {
            return T::zero();
        }
        // outward log-derivative of w*f for f ~ t^(a-1)
        let dlog = S_MAX.tanh() - a * std::f64::consts::PI * S_MAX.cosh();
        self.integral - self.outer_wf * (0.5 * h) - self.outer_wf * (h * h / 12.0 * dlog)
    }
}

fn endpoint_tail<T: Scalar, F: Fn(f64, f64) -> T>(
    f: &F,
    side: Endpoint,
) -> Result<EndpointTail<T>> {
    let nodes = [node(S_MAX), node(S_MAX - 0.5), node(S_MAX - 1.0)];
    let vals: Vec<T> = nodes.iter().map(|nd| eval_at(f, nd, side)).collect();
    if vals.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonIntegrableSingularity {
            endpoint: side,
            exponent: f64::NAN,
        });
    }
    let mags: Vec<f64> = vals.iter().map(|v| v.modulus()).collect();
    let outer_wf = vals[0] * nodes[0].weight;
    if mags[0] == 0.0 || mags[1] == 0.0 || mags[2] == 0.0 {
        return Ok(EndpointTail {
            integral: T::zero(),
            outer_wf,
            uncertainty: 0.0,
            exponent: None,
            scale: mags[0] * nodes[0].near,
        });
    }
    let slope = |i: usize, j: usize| {
        1.0 + (mags[i].ln() - mags[j].ln()) / (nodes[i].ln_near - nodes[j].ln_near)
    };
    let a_outer = slope(0, 1);
    let a_inner = slope(1, 2);
    let scale = mags[0] * nodes[0].near;
    if a_outer <= 0.0 {
        return Ok(EndpointTail {
            integral: T::zero(),
            outer_wf,
            uncertainty: f64::INFINITY,
            exponent: Some(a_outer),
            scale,
        });
    }
    let integral = vals[0] * (nodes[0].near / a_outer);
    let drift = ((a_outer - a_inner).abs() / a_outer).min(1.0);
    Ok(EndpointTail {
        integral,
        outer_wf,
        uncertainty: integral.modulus() * drift,
        exponent: Some(a_outer),
        scale,
    })
}

/// Integrate `f(t, 1 - t)` over the open interval (0, 1).
///
/// `f` may diverge integrably at either endpoint. The returned error estimate
/// is ten times the difference between the last two refinement levels plus a
/// rounding floor and the endpoint-extrapolation uncertainty.
pub fn integrate_unit<T, F>(f: F, cfg: &QuadConfig) -> Result<EvalResult<T>>
where
    T: Scalar,
    F: Fn(f64, f64) -> T,
{
    cfg.validate()?;

    let lower = endpoint_tail(&f, Endpoint::Lower)?;
    let upper = endpoint_tail(&f, Endpoint::Upper)?;
    let mut evals = 6usize;

    let mut raw = T::zero();
    let mut raw_abs = 0.0f64;
    let mut prev: Option<T> = None;
    let mut best: Option<(T, f64)> = None;
    // furthest node on each side whose contribution was not negligible; the
    // early exit only applies beyond it, so a boundary layer far from the
    // centre is not skipped
    let mut reach = [S_MAX; 2];
    let mut level0 = [[0.0f64; S_MAX as usize]; 2];

    for level in 0..=cfg.level_cap {
        let h = 0.5f64.powi(level as i32);
        let per_side = if level == 0 {
            S_MAX as usize
        } else {
            (S_MAX / (2.0 * h)) as usize
        };
        let new_nodes = 2 * per_side + usize::from(level == 0);
        if evals + new_nodes > cfg.max_evals {
            break;
        }

        if level == 0 {
            let centre = f(0.5, 0.5);
            if !centre.is_finite() {
                return Err(Error::NonIntegrableSingularity {
                    endpoint: Endpoint::Lower,
                    exponent: f64::NAN,
                });
            }
            let w = FRAC_PI_2 * 0.5;
            raw = raw + centre * w;
            raw_abs += centre.modulus() * w;
            evals += 1;
        }

        let cutoff = prev.map(|p| NEGLIGIBLE * p.modulus()).unwrap_or(0.0);
        for (k, side) in [Endpoint::Lower, Endpoint::Upper].into_iter().enumerate() {
            let mut quiet = 0usize;
            for j in 0..per_side {
                let s = if level == 0 {
                    (j + 1) as f64
                } else {
                    (2 * j + 1) as f64 * h
                };
                let nd = node(s);
                let v = eval_at(&f, &nd, side);
                evals += 1;
                if !v.is_finite() {
                    return Err(Error::NonIntegrableSingularity {
                        endpoint: side,
                        exponent: f64::NAN,
                    });
                }
                let c = v * nd.weight;
                raw = raw + c;
                let mag = c.modulus();
                raw_abs += mag;
                if level == 0 {
                    level0[k][j] = mag;
                }
                if mag * h < cutoff && s > reach[k] {
                    quiet += 1;
                    if quiet >= NEGLIGIBLE_RUN {
                        break;
                    }
                } else if mag * h >= cutoff {
                    quiet = 0;
                    reach[k] = reach[k].max(s);
                }
            }
        }

        let estimate = raw * h + lower.correction(h) + upper.correction(h);
        if level == 0 {
            let floor = NEGLIGIBLE * estimate.modulus();
            for (r, mags) in reach.iter_mut().zip(&level0) {
                *r = mags.iter().rposition(|&m| m >= floor).map_or(0.0, |j| (j + 1) as f64);
            }
        }
        if let Some(p) = prev {
            let roundoff = 4.0 * f64::EPSILON * raw_abs * h;
            let value = estimate;
            let err = ERR_INFLATION * (estimate - p).modulus()
                + roundoff
                + lower.uncertainty
                + upper.uncertainty;
            best = Some((value, err));
            if level >= MIN_LEVEL && err <= cfg.target(value.modulus()) {
                check_endpoints(&lower, &upper, value.modulus(), cfg)?;
                return Ok(EvalResult {
                    value,
                    abs_err_est: err,
                    evals,
                    method: Method::QuadUnit,
                });
            }
        }
        prev = Some(estimate);
    }

    let (value, err) = best.unwrap_or((prev.unwrap_or_else(T::zero), f64::INFINITY));
    check_endpoints(&lower, &upper, value.modulus(), cfg)?;
    Err(Error::BudgetExceeded {
        best: value.to_complex(),
        abs_err_est: err,
        evals,
    })
}

fn check_endpoints<T: Scalar>(
    lower: &EndpointTail<T>,
    upper: &EndpointTail<T>,
    value: f64,
    cfg: &QuadConfig,
) -> Result<()> {
    let floor = 1e-3 * cfg.target(value);
    for (tail, endpoint) in [(lower, Endpoint::Lower), (upper, Endpoint::Upper)] {
        if let Some(a) = tail.exponent {
            if a <= 0.0 && tail.scale > floor {
                return Err(Error::NonIntegrableSingularity { endpoint, exponent: a });
            }
        }
    }
    Ok(())
}

/// Integrate `f(u)` over (0, ∞) through `u = t / (1 - t)`.
pub fn integrate_half_line<T, F>(f: F, cfg: &QuadConfig) -> Result<EvalResult<T>>
where
    T: Scalar,
    F: Fn(f64) -> T,
{
    let mapped = |t: f64, c: f64| {
        let u = t / c;
        let v = f(u);
        if v == T::zero() {
            v
        } else {
            v / c / c
        }
    };
    integrate_unit(mapped, cfg).map_err(|e| match e {
        Error::NonIntegrableSingularity {
            endpoint: Endpoint::Upper,
            exponent,
        } => Error::SlowDecay { exponent },
        other => other,
    })
}

/// Integrate `f(x)` over the whole real line through `x = ln(t / (1 - t))`.
pub fn integrate_real_line<T, F>(f: F, cfg: &QuadConfig) -> Result<EvalResult<T>>
where
    T: Scalar,
    F: Fn(f64) -> T,
{
    let mapped = |t: f64, c: f64| {
        let x = (t / c).ln();
        let v = f(x);
        if v == T::zero() {
            v
        } else {
            v / t / c
        }
    };
    integrate_unit(mapped, cfg).map_err(|e| match e {
        Error::NonIntegrableSingularity { exponent, .. } => Error::SlowDecay { exponent },
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn cfg() -> QuadConfig {
        QuadConfig::default()
    }

    #[test]
    fn constant_integrand() {
        let r = integrate_unit(|_, _| 1.0, &cfg()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-15, "{r:?}");
        assert!(r.abs_err_est < 1e-14, "{r:?}");
        assert!(r.evals <= cfg().max_evals);
        assert_eq!(r.method, Method::QuadUnit);
    }

    #[test]
    fn inverse_square_root_singularity() {
        let c = cfg().with_abs_tol(1e-12);
        let r = integrate_unit(|t: f64, _| t.powf(-0.5), &c).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12, "{r:?}");
        assert!((r.value - 2.0).abs() <= r.abs_err_est.max(1e-15));
    }

    #[test]
    fn beta_two_three() {
        let r = integrate_unit(|t: f64, c: f64| t * c * c, &cfg()).unwrap();
        assert!((r.value - 1.0 / 12.0).abs() < 1e-14);
    }

    #[test]
    fn strong_singularity_at_upper_end_uses_complement() {
        // ∫ (1-t)^(-0.9) dt = 10
        let r = integrate_unit(|_, c: f64| c.powf(-0.9), &cfg()).unwrap();
        assert!((r.value - 10.0).abs() < 1e-10, "{r:?}");
    }

    #[test]
    fn nearly_non_integrable_exponent() {
        // ∫ t^(-0.99) dt = 100; most of the mass sits below the outermost node
        let r = integrate_unit(|t: f64, _| t.powf(-0.99), &cfg()).unwrap();
        assert!((r.value - 100.0).abs() < 1e-8 * 100.0, "{r:?}");
    }

    #[test]
    fn non_integrable_is_reported() {
        let e = integrate_unit(|t: f64, _| 1.0 / t, &cfg()).unwrap_err();
        assert!(
            matches!(e, Error::NonIntegrableSingularity { endpoint: Endpoint::Lower, .. }),
            "{e:?}"
        );
        let e = integrate_unit(|_, c: f64| c.powf(-1.5), &cfg()).unwrap_err();
        assert!(
            matches!(e, Error::NonIntegrableSingularity { endpoint: Endpoint::Upper, .. }),
            "{e:?}"
        );
    }

    #[test]
    fn budget_exceeded_carries_estimate() {
        let c = QuadConfig::new(0.0, 1e-15, 40, 14).unwrap();
        match integrate_unit(|t: f64, _| t.sqrt(), &c) {
            Err(Error::BudgetExceeded { best, evals, .. }) => {
                assert!(evals <= 40);
                assert!((best.re - 2.0 / 3.0).abs() < 1e-2);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn invalid_configs() {
        assert!(QuadConfig::new(0.0, 0.0, 100, 5).is_err());
        assert!(QuadConfig::new(1e-10, 0.0, 14, 5).is_err());
        assert!(QuadConfig::new(-1.0, 0.0, 100, 5).is_err());
        assert!(QuadConfig::new(1e-10, 0.0, 15, 5).is_ok());
    }

    #[test]
    fn half_line_examples() {
        let r = integrate_half_line(|u: f64| (-u).exp(), &cfg()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        let r = integrate_half_line(|u: f64| u / (1.0 + u).powi(4), &cfg()).unwrap();
        assert!((r.value - 1.0 / 6.0).abs() < 1e-12);
        let r = integrate_half_line(|u: f64| u.sqrt() * (-u).exp(), &cfg()).unwrap();
        assert!((r.value - PI.sqrt() / 2.0).abs() < 1e-12, "{r:?}");
    }

    #[test]
    fn half_line_slow_decay() {
        let e = integrate_half_line(|u: f64| 1.0 / (1.0 + u), &cfg()).unwrap_err();
        assert!(matches!(e, Error::SlowDecay { .. }), "{e:?}");
    }

    #[test]
    fn real_line_examples() {
        let r = integrate_real_line(|x: f64| 1.0 / x.cosh().powi(2), &cfg()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12, "{r:?}");
        let r = integrate_real_line(|x: f64| (-x * x).exp(), &cfg()).unwrap();
        assert!((r.value - PI.sqrt()).abs() < 1e-12, "{r:?}");
    }

    #[test]
    fn complex_integrand() {
        // ∫ e^{i t} dt = (e^i - 1)/i
        let r = integrate_unit(|t: f64, _| Complex64::new(0.0, t).exp(), &cfg()).unwrap();
        let exact = (Complex64::new(0.0, 1.0).exp() - 1.0) / Complex64::new(0.0, 1.0);
        assert!((r.value - exact).norm() < 1e-13);
    }

    #[test]
    fn error_estimate_bounds_true_error() {
        let cases: Vec<(Box<dyn Fn(f64, f64) -> f64>, f64)> = vec![
            (Box::new(|_, _| 1.0), 1.0),
            (Box::new(|t: f64, _| t.powf(-0.5)), 2.0),
            (Box::new(|t: f64, c: f64| t * c * c), 1.0 / 12.0),
            (Box::new(|t: f64, c: f64| (t * c).powf(-0.5)), PI),
            (Box::new(|t: f64, _| t.exp()), std::f64::consts::E - 1.0),
        ];
        for (f, exact) in cases {
            let r = integrate_unit(f, &cfg()).unwrap();
            assert!(
                (r.value - exact).abs() <= r.abs_err_est,
                "{} vs {exact}: est {}",
                r.value,
                r.abs_err_est
            );
        }
    }

    #[test]
    fn linearity() {
        let f = |t: f64, c: f64| t.powf(-0.3) * c.powf(0.7) * (t * c).exp();
        let base = integrate_unit(f, &cfg()).unwrap();
        for k in [-1.0, 2.0, 10.0] {
            let r = integrate_unit(|t, c| k * f(t, c), &cfg()).unwrap();
            let budget = r.abs_err_est + k.abs() * base.abs_err_est;
            assert!((r.value - k * base.value).abs() <= budget.max(1e-15));
        }
    }

    #[test]
    fn substitution_consistency_for_beta_integrands() {
        for &(a, b) in &[(0.3, 0.7), (2.0, 3.0), (1.5, 0.4), (7.0, 2.5)] {
            let unit = integrate_unit(
                |t: f64, c: f64| ((a - 1.0) * t.ln() + (b - 1.0) * c.ln()).exp(),
                &cfg(),
            )
            .unwrap();
            let half = integrate_half_line(
                |u: f64| ((a - 1.0) * u.ln() - (a + b) * u.ln_1p()).exp(),
                &cfg(),
            )
            .unwrap();
            assert!(
                (unit.value - half.value).abs() <= unit.abs_err_est + half.abs_err_est,
                "({a},{b}): {} vs {}",
                unit.value,
                half.value
            );
        }
    }
}
