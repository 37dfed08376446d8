//! Generalized hypergeometric series and the confluent function ₁F₁.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{EvalResult, Method};
use crate::series::{sum_by_ratio, SeriesConfig, SeriesDiagnostics, SeriesSum, StopReason};

use super::gamma::gamma;

/// Beyond this magnitude a negative-argument ₁F₁ uses its asymptotic
/// expansion.
pub const ASYMPTOTIC_THRESHOLD: f64 = 700.0;

/// `pFq(a_1..a_p; b_1..b_q; z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HypergeometricSpec {
    pub upper: Vec<Complex64>,
    pub lower: Vec<Complex64>,
    pub z: Complex64,
}

impl HypergeometricSpec {
    pub fn new(upper: Vec<Complex64>, lower: Vec<Complex64>, z: Complex64) -> Self {
        HypergeometricSpec { upper, lower, z }
    }

    pub fn real(upper: &[f64], lower: &[f64], z: f64) -> Self {
        let c = |v: &[f64]| v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        HypergeometricSpec::new(c(upper), c(lower), Complex64::new(z, 0.0))
    }

    fn terminating(&self) -> bool {
        self.upper.iter().any(|&a| is_non_positive_integer(a))
    }
}

pub(crate) fn is_non_positive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

fn check_lower(lower: &[Complex64]) -> Result<()> {
    match lower.iter().find(|&&b| is_non_positive_integer(b)) {
        Some(&b) => Err(Error::LowerParamPole(b)),
        None => Ok(()),
    }
}

fn finish(s: SeriesSum<Complex64>, method: Method) -> Result<(EvalResult<Complex64>, SeriesDiagnostics)> {
    if !(s.sum.re.is_finite() && s.sum.im.is_finite()) {
        return Err(Error::Overflow("hypergeometric series".into()));
    }
    let abs_err_est = s.diagnostics.tail_bound + 4.0 * f64::EPSILON * s.abs_sum;
    let result = EvalResult {
        value: s.sum,
        abs_err_est,
        evals: s.diagnostics.terms_used,
        method,
    };
    Ok((result, s.diagnostics))
}

/// Sum the generalized hypergeometric series inside its disc of convergence.
pub fn hyp_pfq(spec: &HypergeometricSpec, cfg: &SeriesConfig) -> Result<(EvalResult<Complex64>, SeriesDiagnostics)> {
    check_lower(&spec.lower)?;
    let (p, q) = (spec.upper.len(), spec.lower.len());
    if !spec.terminating() {
        if p > q + 1 {
            return Err(Error::DivergentSeries(format!("{p}F{q} diverges for z != 0")));
        }
        if p == q + 1 && spec.z.norm() >= 1.0 {
            return Err(Error::DivergentSeries(format!("{p}F{q} needs |z| < 1, got |z| = {}", spec.z.norm())));
        }
    }
    let z = spec.z;
    let s = sum_by_ratio(
        Complex64::new(1.0, 0.0),
        |n| {
            let k = n as f64;
            let num: Complex64 = spec.upper.iter().map(|&a| a + k).product();
            let den: Complex64 = spec.lower.iter().map(|&b| b + k).product();
            num / den * z / (k + 1.0)
        },
        |_| None,
        cfg,
    );
    finish(s, Method::Series)
}

/// Confluent hypergeometric function `₁F₁(δ; ζ; z)`.
///
/// Negative real parts go through the Kummer transformation so the summed
/// terms share a sign; past [`ASYMPTOTIC_THRESHOLD`] the asymptotic series
/// is used unless the transformed series terminates.
pub fn hyp_1f1(delta: Complex64, zeta: Complex64, z: Complex64) -> Result<EvalResult<Complex64>> {
    check_lower(&[zeta])?;
    let one = Complex64::new(1.0, 0.0);
    if z == Complex64::new(0.0, 0.0) {
        return Ok(EvalResult {
            value: one,
            abs_err_est: 0.0,
            evals: 1,
            method: Method::Series,
        });
    }
    let cfg = SeriesConfig::default();
    if z.re >= 0.0 || is_non_positive_integer(delta) {
        let spec = HypergeometricSpec::new(vec![delta], vec![zeta], z);
        return hyp_pfq(&spec, &cfg).map(|r| r.0);
    }
    let c = zeta - delta;
    let w = -z;
    let ratio = |n: usize| {
        let k = n as f64;
        (c + k) / (zeta + k) * w / (k + 1.0)
    };
    if is_non_positive_integer(c) {
        // e^z times a polynomial in -z
        let s = sum_by_ratio(one, ratio, |_| None, &cfg);
        let (poly, diag) = finish(s, Method::Series)?;
        let scale = z.exp();
        let value = if scale.norm() > 0.0 {
            poly.value * scale
        } else if poly.value.norm() == 0.0 {
            poly.value
        } else {
            (z + poly.value.ln()).exp()
        };
        return Ok(EvalResult {
            value,
            abs_err_est: poly.abs_err_est * scale.norm(),
            evals: diag.terms_used,
            method: Method::Series,
        });
    }
    if z.re < -ASYMPTOTIC_THRESHOLD {
        return hyp_1f1_asymptotic(delta, zeta, w);
    }
    let s = sum_by_ratio(z.exp(), ratio, |_| None, &cfg);
    finish(s, Method::Series).map(|r| r.0)
}

// Γ(ζ)/Γ(ζ−δ) · w^(−δ) · Σ (δ)_s (δ−ζ+1)_s / s! · w^(−s), for w = −z with Re(w) large.
fn hyp_1f1_asymptotic(delta: Complex64, zeta: Complex64, w: Complex64) -> Result<EvalResult<Complex64>> {
    let lead = gamma(zeta)? / gamma(zeta - delta)? * (-delta * w.ln()).exp();
    let e = delta - zeta + 1.0;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut n = 0usize;
    let mut err = f64::INFINITY;
    while n < 200 {
        let k = n as f64;
        let next = term * (delta + k) * (e + k) / ((k + 1.0) * w);
        if next.norm() >= term.norm() {
            err = term.norm();
            break;
        }
        term = next;
        n += 1;
        if term.norm() <= f64::EPSILON * sum.norm() {
            sum += term;
            err = term.norm();
            break;
        }
        sum += term;
    }
    let value = lead * sum;
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::Overflow("asymptotic 1F1".into()));
    }
    Ok(EvalResult {
        value,
        abs_err_est: lead.norm() * (err + 4.0 * f64::EPSILON * sum.norm()),
        evals: n + 1,
        method: Method::Series,
    })
}

/// Real-argument convenience wrapper around [`hyp_1f1`].
pub fn hyp_1f1_real(delta: f64, zeta: f64, x: f64) -> Result<f64> {
    let c = |v| Complex64::new(v, 0.0);
    hyp_1f1(c(delta), c(zeta), c(x)).map(|r| r.value.re)
}

/// True when the series summation reached its tolerance.
pub fn converged(d: &SeriesDiagnostics) -> bool {
    d.stopped_by == StopReason::Tolerance
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate_unit, QuadConfig};
    use crate::special::beta::{beta_classical, ShapeParams};
    use proptest::prelude::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn pfq_examples() {
        let cfg = SeriesConfig::default();
        let (r, d) = hyp_pfq(&HypergeometricSpec::real(&[0.7], &[0.7], 1.0), &cfg).unwrap();
        assert!(rel(r.value.re, std::f64::consts::E) < 1e-15);
        assert!(converged(&d));
        let (r, _) = hyp_pfq(&HypergeometricSpec::real(&[1.0, 2.0, 3.0], &[4.0, 5.0], 0.0), &cfg).unwrap();
        assert_eq!(r.value, c(1.0));
        let (r, d) = hyp_pfq(&HypergeometricSpec::real(&[1.0, 1.0], &[2.0], 0.5), &cfg).unwrap();
        assert!(rel(r.value.re, 2.0 * 2f64.ln()) < 1e-14);
        assert!(d.tail_bound < 1e-15);
    }

    #[test]
    fn pfq_errors() {
        let cfg = SeriesConfig::default();
        let e = hyp_pfq(&HypergeometricSpec::real(&[1.0, 1.0, 1.0], &[2.0], 0.1), &cfg).unwrap_err();
        assert!(matches!(e, Error::DivergentSeries(_)));
        let e = hyp_pfq(&HypergeometricSpec::real(&[1.0, 1.0], &[2.0], 1.0), &cfg).unwrap_err();
        assert!(matches!(e, Error::DivergentSeries(_)));
        let e = hyp_pfq(&HypergeometricSpec::real(&[1.0], &[-2.0], 0.3), &cfg).unwrap_err();
        assert!(matches!(e, Error::LowerParamPole(_)));
        // a terminating series is fine even where the general one diverges
        let (r, _) = hyp_pfq(&HypergeometricSpec::real(&[-2.0, 1.0, 1.0], &[1.0], 3.0), &cfg).unwrap();
        // sum of (−2)_n 3^n = 1 - 6 + 18
        assert!((r.value.re - 13.0).abs() < 1e-14);
    }

    #[test]
    fn one_f1_examples() {
        assert!(rel(hyp_1f1_real(1.0, 2.0, -5.0).unwrap(), (1.0 - (-5f64).exp()) / 5.0) < 1e-14);
        assert!(rel(hyp_1f1_real(2.5, 2.5, -3.0).unwrap(), (-3f64).exp()) < 1e-14);
        assert_eq!(hyp_1f1_real(2.5, 1.5, 0.0).unwrap(), 1.0);
        assert!(matches!(hyp_1f1_real(1.0, 0.0, 1.0), Err(Error::LowerParamPole(_))));
    }

    #[test]
    fn one_f1_large_negative() {
        // (e^z - 1)/z at z = -650 and -900
        for &z in &[-650.0f64, -900.0, -5000.0] {
            let v = hyp_1f1_real(1.0, 2.0, z).unwrap();
            assert!(rel(v, (z.exp() - 1.0) / z) < 1e-13, "z={z}");
        }
        // 1F1(1/2; 3/2; -x) = √π erf(√x) / (2√x)
        let x = 800.0f64;
        let v = hyp_1f1_real(0.5, 1.5, -x).unwrap();
        assert!(rel(v, std::f64::consts::PI.sqrt() / (2.0 * x.sqrt())) < 1e-13);
        // terminating Kummer branch with large argument: 1F1(3;2;z) = e^z (1 + z/2)
        let z = -600.0f64;
        let v = hyp_1f1_real(3.0, 2.0, z).unwrap();
        assert!(rel(v, z.exp() * (1.0 + z / 2.0)) < 1e-13);
        assert_eq!(hyp_1f1_real(3.0, 2.0, -800.0).unwrap(), 0.0);
    }

    // 40-digit reference values where δ > ζ, so the transformed series alternates
    const HARD_NEGATIVE: [(f64, f64, f64, f64); 8] = [
        (6.0, 0.2, -50.0, 7.1905335086705776555e-8),
        (6.0, 0.2, -300.0, 6.7255043367035213902e-13),
        (10.5, 1.5, -699.0, -7.3766524040662821439e-285),
        (3.3, 0.7, -20.0, -0.00016635930720269584515),
        (0.5, 3.0, -700.0, 0.056804070876728942288),
        (7.7, 2.2, -701.0, 1.3289079947970593687e-20),
        (2.5, 0.3, -10.0, -0.0057336847274701030361),
        (12.5, 1.5, -40.0, -7.4507309921346802833e-11),
    ];

    #[test]
    fn one_f1_ten_digits_negative_axis() {
        for &(a, b, z, r) in &HARD_NEGATIVE {
            let v = hyp_1f1_real(a, b, z).unwrap();
            assert!(rel(v, r) < 1e-10, "a={a} b={b} z={z}: {v} vs {r}");
        }
    }

    #[test]
    fn one_f1_against_euler_integral() {
        // Γ(b)/(Γ(a)Γ(b−a)) ∫ e^{zt} t^{a−1}(1−t)^{b−a−1} dt
        let cfg = QuadConfig::default();
        for &(a, b) in &[(0.5, 1.7), (2.0, 5.5), (1.3, 2.0)] {
            for &z in &[-40.0, -3.5, 0.8, 12.0] {
                let q = integrate_unit(
                    |t: f64, u: f64| (z * t + (a - 1.0) * t.ln() + (b - a - 1.0) * u.ln()).exp(),
                    &cfg,
                )
                .unwrap();
                let expect = q.value / beta_classical(ShapeParams::new(a, b - a)).unwrap();
                let v = hyp_1f1_real(a, b, z).unwrap();
                assert!(rel(v, expect) < 1e-11, "a={a} b={b} z={z}: {v} vs {expect}");
            }
        }
    }

    #[test]
    fn complex_argument() {
        // 1F1(1;2;iy) = (e^{iy} - 1)/(iy)
        let z = Complex64::new(-2.0, 3.0);
        let v = hyp_1f1(c(1.0), c(2.0), z).unwrap().value;
        let e = (z.exp() - 1.0) / z;
        assert!((v - e).norm() < 1e-14 * e.norm());
    }

    proptest! {
        #[test]
        fn kummer_identity(a in 0.1f64..6.0, b in 0.2f64..8.0, z in -50.0f64..50.0) {
            let lhs = hyp_1f1_real(a, b, z).unwrap();
            let rhs = z.exp() * hyp_1f1_real(b - a, b, -z).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(rhs.abs()) + 1e-300,
                "{} vs {}", lhs, rhs);
        }
    }
}
