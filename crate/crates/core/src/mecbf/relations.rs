//! Mellin transform in `m`, derivatives in `m`, real/imaginary separation
//! and the kernel bound.

use std::sync::Mutex;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_half_line, EvalResult, QuadConfig};
use crate::special::{beta_classical, gamma_real, ShapeParams};

use super::{check_inputs, mecbf_quad, MecbfParam};

/// `∫₀^∞ m^(s−1) B(α, β; −m) dm` by nested quadrature, against its closed
/// form `Γ(s) B(α−s, β−s)`. Returns `(lhs, rhs)`.
///
/// The outer integral converges only for `0 < s < min(α, β)`, since
/// `B(α, β; −m)` decays like `m^−min(α, β)`.
pub fn mellin_relation(s: ShapeParams, order: f64, cfg: &QuadConfig) -> Result<(EvalResult<f64>, f64)> {
    s.require_classical()?;
    if !(order > 0.0 && order < s.alpha.min(s.beta)) {
        return Err(Error::domain(format!(
            "Mellin order must satisfy 0 < s < min(alpha, beta) = {}, got {order}",
            s.alpha.min(s.beta)
        )));
    }
    let rhs = gamma_real(order)? * beta_classical(s.shifted(-order))?;
    let inner_cfg = QuadConfig {
        abs_tol: 1e-300,
        rel_tol: 1e-13,
        ..*cfg
    };
    let failure = Mutex::new(None);
    let lhs = integrate_half_line(
        |m: f64| match mecbf_quad(s, &MecbfParam::new(-m), &inner_cfg) {
            Ok(r) => {
                if r.value == 0.0 {
                    0.0
                } else {
                    ((order - 1.0) * m.ln() + r.value.ln()).exp()
                }
            }
            Err(e) => {
                failure.lock().unwrap().get_or_insert(e);
                f64::NAN
            }
        },
        cfg,
    );
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    Ok((lhs?, rhs))
}

/// n-th central difference of `m ↦ B(α, β; m)` at `mp.m`, against
/// `B(α+n, β+n; m)`. Returns `(difference, rhs)`.
///
/// Steps are `1e-5` for `n = 1` and `1e-2` above.
pub fn derivative_relation(s: ShapeParams, mp: &MecbfParam<f64>, n: usize, cfg: &QuadConfig) -> Result<(f64, EvalResult<f64>)> {
    check_inputs(s, mp)?;
    if !(1..=4).contains(&n) {
        return Err(Error::domain(format!("derivative order must be in 1..=4, got {n}")));
    }
    let h = if n == 1 { 1e-5 } else { 1e-2 };
    let tight = QuadConfig {
        abs_tol: 1e-300,
        rel_tol: 1e-14,
        ..*cfg
    };
    // δⁿ f(m) = Σ_k (−1)^k C(n, k) f(m + (n/2 − k) h)
    let mut acc = 0.0;
    let mut binom = 1.0;
    for k in 0..=n {
        let shift = (0.5 * n as f64 - k as f64) * h;
        let f = mecbf_quad(s, &MecbfParam::new(mp.m + shift), &tight)?;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * binom * f.value;
        binom = binom * (n - k) as f64 / (k + 1) as f64;
    }
    let diff = acc / h.powi(n as i32);
    let rhs = mecbf_quad(s.shifted(n as f64), mp, cfg)?;
    Ok((diff, rhs))
}

/// Real and imaginary parts of `B(α, β; r e^(iθ))`, alongside
/// `B(α, β; r cos θ)` and `B(α, β; r sin θ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Separation {
    pub real_part: f64,
    pub imag_part: f64,
    /// `B(α, β; r cos θ)`.
    pub cos_form: f64,
    /// `B(α, β; r sin θ)`.
    pub sin_form: f64,
    pub abs_err_est: f64,
}

pub fn separation(s: ShapeParams, r: f64, theta: f64, cfg: &QuadConfig) -> Result<Separation> {
    s.require_classical()?;
    if !(r >= 0.0 && r.is_finite() && theta.is_finite()) {
        return Err(Error::domain(format!("need finite r >= 0 and finite theta, got r={r} theta={theta}")));
    }
    let m = Complex64::from_polar(r, theta);
    let z = mecbf_quad(s, &MecbfParam::new(m), cfg)?;
    let cos_form = mecbf_quad(s, &MecbfParam::new(r * theta.cos()), cfg)?;
    let sin_form = mecbf_quad(s, &MecbfParam::new(r * theta.sin()), cfg)?;
    Ok(Separation {
        real_part: z.value.re,
        imag_part: z.value.im,
        cos_form: cos_form.value,
        sin_form: sin_form.value,
        abs_err_est: z.abs_err_est,
    })
}

/// `B(α, β; m) / B(α, β)` for real `m`.
pub fn bound_check(s: ShapeParams, mp: &MecbfParam<f64>, cfg: &QuadConfig) -> Result<f64> {
    check_inputs(s, mp)?;
    Ok(mecbf_quad(s, mp, cfg)?.value / beta_classical(s)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate_unit;
    use crate::mecbf::mecbf_series;

    fn sp(a: f64, b: f64) -> ShapeParams {
        ShapeParams::new(a, b)
    }

    fn cfg() -> QuadConfig {
        QuadConfig::default()
    }

    #[test]
    fn mellin_examples() {
        for &(a, order, expected) in &[(2.0, 1.0, 1.0), (3.0, 1.0, 1.0 / 6.0), (3.0, 2.0, 1.0)] {
            let (lhs, rhs) = mellin_relation(sp(a, a), order, &cfg()).unwrap();
            assert!((rhs - expected).abs() < 1e-14);
            assert!((lhs.value - rhs).abs() < 1e-6 * rhs, "a={a} s={order}: {} vs {rhs}", lhs.value);
        }
        assert!(mellin_relation(sp(2.0, 2.0), 2.0, &cfg()).unwrap_err().is_domain());
        assert!(mellin_relation(sp(2.0, 2.0), 0.0, &cfg()).unwrap_err().is_domain());
    }

    #[test]
    fn mellin_unequal_shapes() {
        let (lhs, rhs) = mellin_relation(sp(1.5, 2.5), 0.7, &cfg()).unwrap();
        assert!((lhs.value - rhs).abs() < 1e-6 * rhs);
    }

    #[test]
    fn derivative_examples() {
        let (d, rhs) = derivative_relation(sp(1.0, 1.0), &MecbfParam::new(0.0), 1, &cfg()).unwrap();
        assert!((rhs.value - 1.0 / 6.0).abs() < 1e-15);
        assert!((d - rhs.value).abs() < 1e-5 * rhs.value);
        let (d, rhs) = derivative_relation(sp(2.0, 3.0), &MecbfParam::new(1.0), 1, &cfg()).unwrap();
        assert!((d - rhs.value).abs() < 1e-5 * rhs.value, "{d} vs {}", rhs.value);
        for n in 2..=4 {
            let (d, rhs) = derivative_relation(sp(1.0, 1.0), &MecbfParam::new(0.5), n, &cfg()).unwrap();
            assert!((d - rhs.value).abs() < 1e-3 * rhs.value, "n={n}: {d} vs {}", rhs.value);
        }
        assert!(derivative_relation(sp(1.0, 1.0), &MecbfParam::new(0.5), 5, &cfg()).is_err());
    }

    #[test]
    fn separation_examples() {
        let s = sp(1.0, 1.0);
        let r = separation(s, 1.0, 0.0, &cfg()).unwrap();
        assert_eq!(r.imag_part, 0.0);
        assert!((r.real_part - r.cos_form).abs() < 1e-15);

        let r = separation(s, 1.0, std::f64::consts::FRAC_PI_2, &cfg()).unwrap();
        let re = integrate_unit(|t: f64, c: f64| (t * c).cos(), &cfg()).unwrap().value;
        let im = integrate_unit(|t: f64, c: f64| (t * c).sin(), &cfg()).unwrap().value;
        assert!((r.real_part - re).abs() < 1e-13);
        assert!((r.imag_part - im).abs() < 1e-13);

        let s = sp(2.5, 0.6);
        let r = separation(s, 0.0, 1.234, &cfg()).unwrap();
        assert!((r.real_part - beta_classical(s).unwrap()).abs() < 1e-13);
        assert_eq!(r.imag_part, 0.0);
    }

    #[test]
    fn separation_matches_complex_series() {
        let s = sp(1.7, 0.9);
        for &(r, th) in &[(1.0, 0.3), (2.0, 2.0), (5.0, -1.0)] {
            let sep = separation(s, r, th, &cfg()).unwrap();
            let (z, d) = mecbf_series(s, &MecbfParam::new(Complex64::from_polar(r, th)), 1e-16).unwrap();
            let gap = (Complex64::new(sep.real_part, sep.imag_part) - z.value).norm();
            assert!(gap <= 10.0 * (sep.abs_err_est + z.abs_err_est + d.tail_bound));
        }
    }

    #[test]
    fn bound_examples() {
        assert!((bound_check(sp(2.0, 3.0), &MecbfParam::new(0.0), &cfg()).unwrap() - 1.0).abs() < 1e-14);
        let r = bound_check(sp(1.0, 1.0), &MecbfParam::new(2.0335), &cfg()).unwrap();
        assert!(r <= 1.6626);
        for &(a, b) in &[(0.3, 0.3), (1.0, 5.0), (7.0, 7.0)] {
            assert!(bound_check(sp(a, b), &MecbfParam::new(-1.0), &cfg()).unwrap() < 1.0);
        }
    }
}
