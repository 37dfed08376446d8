//! The modified extension `B(α, β; m) = ∫₀¹ t^(α−1) (1−t)^(β−1) e^(m t (1−t)) dt`.
//!
//! Two independent engines: the power series `Σ mⁿ/n! · B(α+n, β+n)` and
//! direct quadrature. Both accept real or complex `m`.

mod identities;
mod probe;
mod relations;
mod representations;

pub use identities::{
    identity_functional, identity_symmetry, summation_first, summation_second, NTerms, Residual, SummationResult,
};
pub use probe::{convergence_probe, ProbeRow};
pub use relations::{bound_check, derivative_relation, mellin_relation, separation, Separation};
pub use representations::{mecbf_representation, Representation};

use crate::error::{Error, Result};
use crate::quadrature::{integrate_half_line, integrate_unit, EvalResult, Method, QuadConfig};
use crate::scalar::Scalar;
use crate::series::{sum_by_ratio, SeriesConfig, SeriesDiagnostics};
use crate::special::beta::beta_rel_err;
use crate::special::{beta_classical, ShapeParams};

/// Largest `|m|` accepted in compatibility mode.
pub const COMPAT_RADIUS: f64 = 2.0335;

/// Below this real part the quadrature engine resolves the two boundary
/// layers of the kernel separately.
const BOUNDARY_LAYER_M: f64 = -200.0;

/// The extension parameter `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MecbfParam<M> {
    pub m: M,
    /// Reject `|m| > COMPAT_RADIUS`.
    pub compat: bool,
}

impl<M: Scalar> MecbfParam<M> {
    pub fn new(m: M) -> Self {
        MecbfParam { m, compat: false }
    }

    pub fn compat(m: M) -> Self {
        MecbfParam { m, compat: true }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.m.is_finite() {
            return Err(Error::domain(format!("m must be finite, got {:?}", self.m)));
        }
        let r = self.m.modulus();
        if self.compat && r > COMPAT_RADIUS {
            return Err(Error::CompatRadiusExceeded(r));
        }
        Ok(())
    }

    /// `(r, θ)` with `m = r e^(iθ)`.
    pub fn polar(&self) -> (f64, f64) {
        (self.m.modulus(), self.m.im().atan2(self.m.re()))
    }
}

/// Evaluation engine for `B(α, β; m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Series,
    Quadrature,
}

fn check_inputs<M: Scalar>(s: ShapeParams, mp: &MecbfParam<M>) -> Result<()> {
    mp.validate()?;
    s.require_classical()
}

/// Sum `Σ mⁿ/n! · B(α+n, β+n)` until the tail falls below `tol` relative to
/// the partial sum.
///
/// Successive terms come from the ratio
/// `m/(n+1) · (α+n)(β+n) / ((α+β+2n)(α+β+2n+1))`, whose modulus never
/// exceeds `|m|/(4(n+1))`; that bound makes the reported tail rigorous.
pub fn mecbf_series<M: Scalar>(
    s: ShapeParams,
    mp: &MecbfParam<M>,
    tol: f64,
) -> Result<(EvalResult<M>, SeriesDiagnostics)> {
    check_inputs(s, mp)?;
    if !(tol > 0.0) {
        return Err(Error::domain(format!("series tolerance must be positive, got {tol}")));
    }
    let (a, b) = (s.alpha, s.beta);
    let m = mp.m;
    let first = beta_classical(s)?;
    let r = m.modulus();
    let summed = sum_by_ratio(
        M::from_real(first),
        |n| {
            let k = n as f64;
            let ab = a + b + 2.0 * k;
            m * ((a + k) * (b + k) / (ab * (ab + 1.0) * (k + 1.0)))
        },
        |n| Some(r / (4.0 * (n as f64 + 1.0))),
        &SeriesConfig {
            tol,
            max_terms: 100_000,
        },
    );
    let d = summed.diagnostics;
    if !summed.sum.is_finite() {
        return Err(Error::Overflow(format!("series for B({a}, {b}; {m:?})")));
    }
    let rounding = f64::EPSILON * (4.0 + (d.terms_used as f64).sqrt()) * summed.abs_sum;
    let abs_err_est = d.tail_bound + rounding + beta_rel_err(s) * summed.abs_sum;
    let result = EvalResult {
        value: summed.sum,
        abs_err_est,
        evals: d.terms_used,
        method: Method::Series,
    };
    Ok((result, d))
}

/// `B(α, β; m)` by quadrature of the defining integral.
pub fn mecbf_quad<M: Scalar>(s: ShapeParams, mp: &MecbfParam<M>, cfg: &QuadConfig) -> Result<EvalResult<M>> {
    check_inputs(s, mp)?;
    cfg.validate()?;
    let m = mp.m;
    if m.re() < BOUNDARY_LAYER_M {
        return quad_boundary_layers(s, m, cfg);
    }
    let (a1, b1) = (s.alpha - 1.0, s.beta - 1.0);
    integrate_unit(
        |t: f64, c: f64| (M::from_real(a1 * t.ln() + b1 * c.ln()) + m * (t * c)).exp(),
        cfg,
    )
    .map(|r| r.with_method(Method::QuadUnit))
}

// For strongly negative m the mass sits in layers of width 1/|m| at each end.
// Each half of (0, 1) is stretched by λ = −Re(m) and integrated over the
// half line; beyond the midpoint the integrand is dropped.
fn quad_boundary_layers<M: Scalar>(s: ShapeParams, m: M, cfg: &QuadConfig) -> Result<EvalResult<M>> {
    let lambda = -m.re();
    let ln_lambda = lambda.ln();
    let half_cfg = cfg.with_max_evals(cfg.max_evals / 2);
    let half = |a: f64, b: f64| {
        integrate_half_line(
            |v: f64| {
                if v >= 0.5 * lambda {
                    return M::zero();
                }
                let t = v / lambda;
                let ln = (a - 1.0) * t.ln() + (b - 1.0) * (-t).ln_1p() - ln_lambda;
                (M::from_real(ln) + m * (t * (1.0 - t))).exp()
            },
            &half_cfg,
        )
    };
    let lower = half(s.alpha, s.beta)?;
    let upper = half(s.beta, s.alpha)?;
    Ok(EvalResult {
        value: lower.value + upper.value,
        abs_err_est: lower.abs_err_est + upper.abs_err_est,
        evals: lower.evals + upper.evals,
        method: Method::QuadUnit,
    })
}

/// Evaluate with the chosen engine; the series runs at `cfg.rel_tol`.
/// `m = 0` is the classical beta function and bypasses both engines.
pub fn mecbf<M: Scalar>(s: ShapeParams, mp: &MecbfParam<M>, engine: Engine, cfg: &QuadConfig) -> Result<EvalResult<M>> {
    if mp.m == M::zero() {
        check_inputs(s, mp)?;
        let v = beta_classical(s)?;
        return Ok(EvalResult {
            value: M::from_real(v),
            abs_err_est: beta_rel_err(s) * v.abs(),
            evals: 0,
            method: Method::GammaRelation,
        });
    }
    match engine {
        Engine::Series => mecbf_series(s, mp, cfg.rel_tol.max(f64::EPSILON)).map(|r| r.0),
        Engine::Quadrature => mecbf_quad(s, mp, cfg),
    }
}

/// Incomplete variant `B_x(α, β; m) = ∫₀ˣ t^(α−1) (1−t)^(β−1) e^(m t (1−t)) dt`.
pub fn mecbf_incomplete<M: Scalar>(
    x: f64,
    s: ShapeParams,
    mp: &MecbfParam<M>,
    cfg: &QuadConfig,
) -> Result<EvalResult<M>> {
    check_inputs(s, mp)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("x must lie in [0, 1], got {x}")));
    }
    if x == 0.0 {
        return Ok(EvalResult {
            value: M::zero(),
            abs_err_est: 0.0,
            evals: 0,
            method: Method::QuadUnit,
        });
    }
    if x == 1.0 {
        return mecbf_quad(s, mp, cfg);
    }
    let (a1, b1) = (s.alpha - 1.0, s.beta - 1.0);
    let (ln_x, rest) = (x.ln(), 1.0 - x);
    let m = mp.m;
    integrate_unit(
        |v: f64, cv: f64| {
            // t = x v and 1 − t = (1 − x) + x (1 − v)
            let t = x * v;
            let ct = rest + x * cv;
            (M::from_real(a1 * (ln_x + v.ln()) + b1 * ct.ln() + ln_x) + m * (t * ct)).exp()
        },
        cfg,
    )
    .map(|r| r.with_method(Method::QuadUnit))
}

/// Upper incomplete variant `∫ₓ¹`, through the reflection `t ↦ 1 − t`.
pub fn mecbf_incomplete_upper<M: Scalar>(
    x: f64,
    s: ShapeParams,
    mp: &MecbfParam<M>,
    cfg: &QuadConfig,
) -> Result<EvalResult<M>> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("x must lie in [0, 1], got {x}")));
    }
    mecbf_incomplete(1.0 - x, s.swapped(), mp, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::beta_incomplete;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn sp(a: f64, b: f64) -> ShapeParams {
        ShapeParams::new(a, b)
    }

    fn cfg() -> QuadConfig {
        QuadConfig::default()
    }

    fn quad(a: f64, b: f64, m: f64) -> EvalResult<f64> {
        mecbf_quad(sp(a, b), &MecbfParam::new(m), &cfg()).unwrap()
    }

    fn series(a: f64, b: f64, m: f64) -> (EvalResult<f64>, SeriesDiagnostics) {
        mecbf_series(sp(a, b), &MecbfParam::new(m), 1e-16).unwrap()
    }

    #[test]
    fn series_examples() {
        let (r, d) = series(2.0, 3.0, 0.0);
        assert!((r.value - 1.0 / 12.0).abs() < 1e-16);
        assert!(d.terms_used >= 1 && d.tail_bound == 0.0);

        let tight = cfg().with_abs_tol(1e-13).with_rel_tol(1e-13);
        let q = mecbf_quad(sp(1.0, 1.0), &MecbfParam::new(1.0), &tight).unwrap();
        let (s, _) = series(1.0, 1.0, 1.0);
        assert!((s.value - q.value).abs() < 1e-13);

        let (s, _) = series(5.0, 7.0, 3.0);
        assert!(s.value > beta_classical(sp(5.0, 7.0)).unwrap());
        assert!((s.value - quad(5.0, 7.0, 3.0).value).abs() < 1e-12 * s.value);
    }

    #[test]
    fn quad_examples() {
        assert!((quad(2.0, 3.0, 0.0).value - 1.0 / 12.0).abs() < 1e-15);
        let v = quad(1.0, 1.0, 4.0).value;
        assert!(v > 1.0 && v < std::f64::consts::E);
        assert!((v - series(1.0, 1.0, 4.0).0.value).abs() < 1e-12);

        let mp = MecbfParam::new(Complex64::new(0.0, 1.0));
        let q = mecbf_quad(sp(1.0, 1.0), &mp, &cfg()).unwrap();
        let (s, _) = mecbf_series(sp(1.0, 1.0), &mp, 1e-16).unwrap();
        assert!(q.value.norm() <= 0.25f64.exp());
        assert!((q.value - s.value).norm() < 1e-13);
        assert!(q.value.im > 0.0);
    }

    #[test]
    fn domain_checks() {
        let e = mecbf_quad(sp(0.0, 0.0), &MecbfParam::new(1.0), &cfg()).unwrap_err();
        assert!(e.is_domain());
        let e = mecbf_series(sp(2.0, 3.0), &MecbfParam::compat(2.5), 1e-12).unwrap_err();
        assert_eq!(e, Error::CompatRadiusExceeded(2.5));
        assert!(mecbf_series(sp(2.0, 3.0), &MecbfParam::compat(-2.0335), 1e-12).is_ok());
        assert!(mecbf_quad(sp(2.0, 3.0), &MecbfParam::new(f64::NAN), &cfg()).is_err());
        assert!(mecbf_incomplete(1.2, sp(2.0, 3.0), &MecbfParam::new(0.0), &cfg()).unwrap_err().is_domain());
    }

    #[test]
    fn engines_agree_on_grid() {
        let grid = [0.3, 1.0, 2.5, 7.0];
        for &a in &grid {
            for &b in &grid {
                for &m in &[-10.0, -2.0335, -1.0, 0.0, 1.0, 2.0335, 10.0] {
                    let (s, d) = series(a, b, m);
                    let q = quad(a, b, m);
                    let bound = 10.0 * (d.tail_bound + s.abs_err_est + q.abs_err_est);
                    assert!((s.value - q.value).abs() <= bound, "a={a} b={b} m={m}: {} vs {}", s.value, q.value);
                }
            }
        }
    }

    #[test]
    fn boundary_layer_path() {
        // B(α, α; m) = 2^(1−2α) B(α, ½) ₁F₁(α; α+½; m/4)
        let relative = cfg().with_abs_tol(0.0);
        for &(a, m) in &[(2.0, -250.0), (0.6, -1000.0), (5.5, -3e4)] {
            let q = mecbf_quad(sp(a, a), &MecbfParam::new(m), &relative).unwrap();
            let k = crate::special::hyp_1f1_real(a, a + 0.5, m / 4.0).unwrap();
            let exact = 2f64.powf(1.0 - 2.0 * a) * beta_classical(sp(a, 0.5)).unwrap() * k;
            assert!((q.value - exact).abs() < 1e-10 * exact, "a={a} m={m}: {} vs {exact}", q.value);
        }
        // plain quadrature is still reliable just past the switch
        for &(a, b, m) in &[(0.7, 3.0, -400.0), (3.0, 1.0, -300.0)] {
            let q = quad(a, b, m);
            let plain = integrate_unit(
                |t: f64, c: f64| ((a - 1.0) * t.ln() + (b - 1.0) * c.ln() + m * t * c).exp(),
                &cfg(),
            )
            .unwrap();
            assert!((q.value - plain.value).abs() < 1e-9 * q.value, "{} vs {}", q.value, plain.value);
        }
        // far out, B(α, β; −λ) ≈ Γ(α) λ^−α + Γ(β) λ^−β
        let lambda = 1e8;
        let v = quad(2.0, 3.0, -lambda).value;
        let lead = lambda.powi(-2) + 2.0 * lambda.powi(-3);
        assert!((v - lead).abs() < 1e-6 * lead);
    }

    #[test]
    fn incomplete_examples() {
        let mp = MecbfParam::new(1.0);
        let full = quad(2.0, 3.0, 1.0).value;
        let inc = mecbf_incomplete(1.0, sp(2.0, 3.0), &mp, &cfg()).unwrap().value;
        assert_eq!(inc, full);
        let zero = MecbfParam::new(0.0);
        let v = mecbf_incomplete(0.5, sp(1.0, 1.0), &zero, &cfg()).unwrap().value;
        assert!((v - 0.5).abs() < 1e-15);
        let v = mecbf_incomplete(0.3, sp(2.0, 2.0), &zero, &cfg()).unwrap().value;
        let exact = 0.3f64.powi(2) * (3.0 - 2.0 * 0.3) / 6.0;
        assert!((v - exact).abs() < 1e-15);
        assert!((v - beta_incomplete(0.3, sp(2.0, 2.0)).unwrap()).abs() < 1e-15);
        let lo = mecbf_incomplete(0.35, sp(2.0, 3.0), &mp, &cfg()).unwrap().value;
        let hi = mecbf_incomplete_upper(0.35, sp(2.0, 3.0), &mp, &cfg()).unwrap().value;
        assert!((lo + hi - full).abs() < 1e-14);
    }

    #[test]
    fn incomplete_monotone() {
        let mp = MecbfParam::new(-1.5);
        let s = sp(0.6, 2.2);
        let mut prev = 0.0;
        for i in 0..=100 {
            let x = i as f64 / 100.0;
            let v = mecbf_incomplete(x, s, &mp, &cfg()).unwrap().value;
            assert!(v >= prev, "x={x}");
            prev = v;
        }
        assert_eq!(prev, quad(0.6, 2.2, -1.5).value);
    }

    #[test]
    fn limits() {
        for n in 5..=20 {
            let v = quad(n as f64, n as f64, 2.0).value;
            assert!(v < 4f64.powi(-(n as i32)) * 0.5f64.exp() * 2.0);
        }
        for &eps in &[0.01, 0.001] {
            assert!(quad(eps, eps, -1.0).value > 1.0 / eps);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn increasing_in_m(a in 0.2f64..8.0, b in 0.2f64..8.0, m1 in -10.0f64..10.0, dm in 0.01f64..5.0) {
            let lo = quad(a, b, m1).value;
            let hi = quad(a, b, m1 + dm).value;
            prop_assert!(0.0 < lo && lo < hi);
        }

        #[test]
        fn complex_engines_agree(a in 0.3f64..6.0, b in 0.3f64..6.0, re in -5.0f64..5.0, im in -5.0f64..5.0) {
            let mp = MecbfParam::new(Complex64::new(re, im));
            let q = mecbf_quad(sp(a, b), &mp, &cfg()).unwrap();
            let (s, d) = mecbf_series(sp(a, b), &mp, 1e-16).unwrap();
            prop_assert!((q.value - s.value).norm() <= 10.0 * (q.abs_err_est + s.abs_err_est + d.tail_bound));
        }
    }
}
