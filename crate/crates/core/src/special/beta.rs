//! Classical and incomplete beta functions.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::series::{sum_by_ratio, SeriesConfig};

use super::gamma::{lanczos_sum, LANCZOS_G};

/// Shape pair `(α, β)` of a beta-type function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeParams {
    pub alpha: f64,
    pub beta: f64,
}

impl ShapeParams {
    pub fn new(alpha: f64, beta: f64) -> Self {
        ShapeParams { alpha, beta }
    }

    pub fn swapped(self) -> Self {
        ShapeParams {
            alpha: self.beta,
            beta: self.alpha,
        }
    }

    /// Shift both shapes by `n`.
    pub fn shifted(self, n: f64) -> Self {
        ShapeParams {
            alpha: self.alpha + n,
            beta: self.beta + n,
        }
    }

    pub fn is_finite(self) -> bool {
        self.alpha.is_finite() && self.beta.is_finite()
    }

    pub fn require_classical(self) -> Result<()> {
        if self.alpha > 0.0 && self.beta > 0.0 && self.is_finite() {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "shapes must be positive, got alpha={} beta={}",
                self.alpha, self.beta
            )))
        }
    }
}

fn ln_ratio(num: f64, den: f64, diff: f64) -> f64 {
    // ln(num/den) where num = den - diff
    let r = num / den;
    if r > 0.5 {
        (-diff / den).ln_1p()
    } else {
        r.ln()
    }
}

/// B(α, β) = Γ(α)Γ(β)/Γ(α+β) for positive shapes.
///
/// The Lanczos factors are combined before exponentiating, so large shapes
/// do not overflow the intermediate gammas.
pub fn beta_classical(s: ShapeParams) -> Result<f64> {
    s.require_classical()?;
    let (mut a, mut b) = if s.alpha >= s.beta {
        (s.alpha, s.beta)
    } else {
        (s.beta, s.alpha)
    };
    let mut scale = 1.0;
    while b < 1.0 {
        scale *= (a + b) / b;
        b += 1.0;
    }
    while a < 1.0 {
        scale *= (a + b) / a;
        a += 1.0;
    }
    if b > a {
        std::mem::swap(&mut a, &mut b);
    }
    let c = a + b;
    let gh = LANCZOS_G - 0.5;
    let (agh, bgh, cgh) = (a + gh, b + gh, c + gh);
    let lanczos = lanczos_sum(a - 1.0) * lanczos_sum(b - 1.0) / lanczos_sum(c - 1.0);
    let expo = (a - 0.5) * ln_ratio(agh, cgh, b) + (b - 0.5) * ln_ratio(bgh, cgh, a);
    let value = (2.0 * PI / cgh).sqrt() * (-gh).exp() * lanczos * expo.exp() * scale;
    if !value.is_finite() {
        return Err(Error::Overflow(format!("beta({}, {})", s.alpha, s.beta)));
    }
    Ok(value)
}

/// Relative error bound for [`beta_classical`], growing with the shapes as
/// the Lanczos approximation loses digits.
pub fn beta_rel_err(s: ShapeParams) -> f64 {
    (1e-15 * (1.0 + 0.5 * (s.alpha + s.beta))).min(3e-13)
}

/// ln B(α, β) for positive shapes, finite where `beta_classical` under- or
/// overflows.
pub fn ln_beta(s: ShapeParams) -> Result<f64> {
    s.require_classical()?;
    let b = beta_classical(s);
    match b {
        Ok(v) if v > 1e-300 => Ok(v.ln()),
        _ => {
            use super::gamma::ln_gamma;
            Ok(ln_gamma(s.alpha)? + ln_gamma(s.beta)? - ln_gamma(s.alpha + s.beta)?)
        }
    }
}

/// Lower incomplete beta `B_x(p, q) = ∫₀ˣ t^(p−1) (1−t)^(q−1) dt`.
pub fn beta_incomplete(x: f64, s: ShapeParams) -> Result<f64> {
    s.require_classical()?;
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("incomplete beta needs x in [0, 1], got {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return beta_classical(s);
    }
    let (p, q) = (s.alpha, s.beta);
    if x > (p + 1.0) / (p + q + 2.0) {
        return Ok(beta_classical(s)? - lower_series(1.0 - x, q, p));
    }
    Ok(lower_series(x, p, q))
}

// x^p (1−x)^q / p · ₂F₁(p+q, 1; p+1; x): all terms positive.
fn lower_series(x: f64, p: f64, q: f64) -> f64 {
    let prefactor = (p * x.ln() + q * (-x).ln_1p()).exp() / p;
    let s = sum_by_ratio(
        1.0,
        |n| {
            let n = n as f64;
            (p + q + n) / (p + 1.0 + n) * x
        },
        |_| None,
        &SeriesConfig::default(),
    );
    prefactor * s.sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::hypergeometric::{hyp_pfq, HypergeometricSpec};
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn sp(a: f64, b: f64) -> ShapeParams {
        ShapeParams::new(a, b)
    }

    #[test]
    fn examples() {
        assert!((beta_classical(sp(1.0, 0.25)).unwrap() - 4.0).abs() < 1e-14);
        assert!((beta_classical(sp(10.0, 0.25)).unwrap() - 2.0582).abs() < 5e-5);
        assert!((beta_classical(sp(2.0, 3.0)).unwrap() - 1.0 / 12.0).abs() < 1e-16);
        assert!((beta_incomplete(1.0, sp(2.0, 3.0)).unwrap() - 1.0 / 12.0).abs() < 1e-16);
        assert_eq!(beta_incomplete(0.0, sp(2.0, 3.0)).unwrap(), 0.0);
        assert!((beta_incomplete(0.5, sp(1.0, 1.0)).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn domain_errors() {
        assert!(beta_classical(sp(0.0, 1.0)).unwrap_err().is_domain());
        assert!(beta_classical(sp(1.0, -2.0)).unwrap_err().is_domain());
        assert!(beta_incomplete(1.5, sp(1.0, 1.0)).unwrap_err().is_domain());
        assert!(beta_incomplete(-0.1, sp(1.0, 1.0)).unwrap_err().is_domain());
    }

    #[test]
    fn against_statrs_reference() {
        let grid = [0.05, 0.3, 1.0, 2.5, 7.0, 33.0, 400.0];
        for &a in &grid {
            for &b in &grid {
                let r = statrs::function::beta::ln_beta(a, b);
                let v = beta_classical(sp(a, b)).unwrap();
                assert!((v.ln() - r).abs() < 1e-12 * r.abs().max(1.0), "a={a} b={b}");
            }
        }
    }

    #[test]
    fn incomplete_against_statrs_reference() {
        for &(a, b) in &[(0.5, 0.5), (2.0, 3.0), (0.3, 7.0), (20.0, 50.0), (5.0, 1.5)] {
            let full = beta_classical(sp(a, b)).unwrap();
            for &x in &[0.01, 0.2, 0.5, 0.77, 0.99] {
                let r = statrs::function::beta::beta_reg(a, b, x);
                let v = beta_incomplete(x, sp(a, b)).unwrap() / full;
                assert!((v - r).abs() < 1e-12, "a={a} b={b} x={x}: {v} vs {r}");
            }
        }
    }

    #[test]
    fn incomplete_matches_gauss_form() {
        // (x^p/p) 2F1(p, 1-q; p+1; x)
        for &(p, q, x) in &[(2.0, 3.0, 0.4), (0.5, 1.5, 0.3), (3.5, 2.25, 0.8)] {
            let spec = HypergeometricSpec::new(
                vec![Complex64::new(p, 0.0), Complex64::new(1.0 - q, 0.0)],
                vec![Complex64::new(p + 1.0, 0.0)],
                Complex64::new(x, 0.0),
            );
            let f = hyp_pfq(&spec, &SeriesConfig::default()).unwrap().0.value.re;
            let expected = x.powf(p) / p * f;
            let v = beta_incomplete(x, sp(p, q)).unwrap();
            assert!((v - expected).abs() < 1e-13 * expected.abs(), "{v} vs {expected}");
        }
    }

    #[test]
    fn huge_shapes_stay_finite() {
        let v = beta_classical(sp(1e5, 1e5)).unwrap();
        assert_eq!(v, 0.0);
        let l = ln_beta(sp(1e5, 1e5)).unwrap();
        let r = statrs::function::beta::ln_beta(1e5, 1e5);
        assert!((l - r).abs() < 1e-10 * r.abs());
        let tiny = beta_classical(sp(1e-8, 1.0)).unwrap();
        assert!((tiny - 1e8).abs() < 1e-6);
    }

    proptest! {
        #[test]
        fn exactly_symmetric(a in 0.01f64..60.0, b in 0.01f64..60.0) {
            prop_assert_eq!(beta_classical(sp(a, b)).unwrap(), beta_classical(sp(b, a)).unwrap());
        }

        #[test]
        fn incomplete_full_range(a in 0.05f64..30.0, b in 0.05f64..30.0) {
            let full = beta_classical(sp(a, b)).unwrap();
            let inc = beta_incomplete(1.0, sp(a, b)).unwrap();
            prop_assert!((inc - full).abs() <= 1e-12 * full);
        }

        #[test]
        fn incomplete_reflection(a in 0.1f64..20.0, b in 0.1f64..20.0, x in 0.001f64..0.999) {
            let full = beta_classical(sp(a, b)).unwrap();
            let lo = beta_incomplete(x, sp(a, b)).unwrap();
            let hi = beta_incomplete(1.0 - x, sp(b, a)).unwrap();
            prop_assert!((lo + hi - full).abs() <= 1e-12 * full);
        }
    }
}
