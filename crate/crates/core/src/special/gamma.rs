//! Gamma function (Lanczos, g = 7, nine terms) and the Pochhammer symbol.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub(crate) const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];
const SQRT_TWO_PI: f64 = 2.506_628_274_631_000_7;

/// Lanczos series `A(z)` such that
/// `Γ(z + 1) = √(2π) (z + g + ½)^(z + ½) e^-(z + g + ½) A(z)`.
pub(crate) fn lanczos_sum(z: f64) -> f64 {
    let mut acc = LANCZOS_COEF[0];
    for (k, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (z + k as f64);
    }
    acc
}

fn lanczos_sum_c(z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (k, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (z + k as f64);
    }
    acc
}

/// `sin(πx)` with exact zeros at the integers.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let r = x.rem_euclid(2.0);
    if r == 0.0 || r == 1.0 {
        return 0.0;
    }
    if r < 0.5 {
        (PI * r).sin()
    } else if r < 1.5 {
        -(PI * (r - 1.0)).sin()
    } else {
        (PI * (r - 2.0)).sin()
    }
}

pub(crate) fn is_non_positive_integer(x: f64) -> bool {
    x <= 0.0 && x.fract() == 0.0
}

/// Γ(x) for real `x`.
pub fn gamma_real(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::domain("gamma of NaN"));
    }
    if is_non_positive_integer(x) {
        return Err(Error::Pole(x));
    }
    if x > 171.7 {
        return Err(Error::Overflow(format!("gamma({x})")));
    }
    if x.fract() == 0.0 && x <= 171.0 {
        let mut acc = 1.0;
        let mut k = 2.0;
        while k < x {
            acc *= k;
            k += 1.0;
        }
        return Ok(acc);
    }
    let value = if x < 0.5 {
        PI / (sin_pi(x) * gamma_real(1.0 - x)?)
    } else if x > 12.0 {
        // the approximation loses digits for large x; recur down from [10, 11)
        let n = (x - 10.0).floor();
        let base = x - n;
        let mut acc = gamma_real(base)?;
        let mut k = 0.0;
        while k < n {
            acc *= base + k;
            k += 1.0;
        }
        acc
    } else {
        let z = x - 1.0;
        let t = z + LANCZOS_G + 0.5;
        // split the power so t^(z+1/2) e^-t does not overflow before the product
        let half = t.powf(0.5 * (z + 0.5));
        SQRT_TWO_PI * half * (-t).exp() * half * lanczos_sum(z)
    };
    if !value.is_finite() {
        return Err(Error::Overflow(format!("gamma({x})")));
    }
    Ok(value)
}

/// ln Γ(x) for real `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain(format!("ln_gamma requires x > 0, got {x}")));
    }
    if x < 0.5 {
        return Ok(ln_gamma(x + 1.0)? - x.ln());
    }
    if x < 100.0 {
        return Ok(gamma_real(x)?.ln());
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    Ok((z + 0.5) * t.ln() - t + (SQRT_TWO_PI * lanczos_sum(z)).ln())
}

/// Γ(z) for complex `z`.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 {
        return gamma_real(z.re).map(|v| Complex64::new(v, 0.0));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::domain("gamma of a non-finite argument"));
    }
    let value = if z.re < 0.5 {
        let s = (z * PI).sin();
        Complex64::new(PI, 0.0) / (s * gamma(Complex64::new(1.0, 0.0) - z)?)
    } else {
        let w = z - 1.0;
        let t = w + (LANCZOS_G + 0.5);
        ((w + 0.5) * t.ln() - t).exp() * SQRT_TWO_PI * lanczos_sum_c(w)
    };
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::Overflow(format!("gamma({z})")));
    }
    Ok(value)
}

/// Rising factorial `(λ)_n = λ(λ+1)…(λ+n−1)`, with `(λ)_0 = 1`.
pub fn pochhammer(lambda: Complex64, n: usize) -> Complex64 {
    (0..n).fold(Complex64::new(1.0, 0.0), |acc, k| acc * (lambda + k as f64))
}

pub fn pochhammer_real(lambda: f64, n: usize) -> f64 {
    (0..n).fold(1.0, |acc, k| acc * (lambda + k as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma_real(5.0).unwrap(), 24.0);
        assert_eq!(gamma_real(1.0).unwrap(), 1.0);
        assert!(close(gamma_real(0.5).unwrap(), PI.sqrt(), 1e-14));
        let g = gamma(Complex64::new(5.0, 0.0)).unwrap();
        assert_eq!(g, Complex64::new(24.0, 0.0));
    }

    #[test]
    fn poles_and_overflow() {
        assert!(matches!(gamma_real(0.0), Err(Error::Pole(_))));
        assert!(matches!(gamma_real(-3.0), Err(Error::Pole(_))));
        assert!(matches!(gamma(Complex64::new(-2.0, 0.0)), Err(Error::Pole(_))));
        assert!(matches!(gamma_real(172.0), Err(Error::Overflow(_))));
        assert!(gamma_real(171.5).unwrap().is_finite());
    }

    // 30-digit reference values
    const REFERENCE: [(f64, f64); 13] = [
        (0.01, 99.432585119150601632),
        (0.3, 2.9915689876875907446),
        (0.9, 1.068628702119319337),
        (1.5, 0.88622692545275801365),
        (2.25, 1.1330030963193463475),
        (7.3, 1271.4236336639088399),
        (33.3, 7.4875775965226323274e+35),
        (99.9, 5.8917321516445156854e+155),
        (150.5, 4.6610726270973779184e+261),
        (170.2, 1.1918411166366695946e+305),
        (-0.5, -3.5449077018110320546),
        (-2.5, -0.94530872048294188123),
        (-7.7, 0.00018207416684152618002),
    ];

    #[test]
    fn thirteen_digits() {
        for &(x, r) in &REFERENCE {
            assert!(close(gamma_real(x).unwrap(), r, 1e-13), "x={x}");
        }
    }

    #[test]
    fn against_statrs_reference() {
        for &x in &[0.01, 0.3, 0.5, 0.9, 1.5, 2.25, 7.3, 10.0, 33.3, 99.9, 150.5] {
            let r = statrs::function::gamma::gamma(x);
            assert!(close(gamma_real(x).unwrap(), r, 1e-12), "x={x}");
            let lr = statrs::function::gamma::ln_gamma(x);
            assert!((ln_gamma(x).unwrap() - lr).abs() <= 1e-13 * lr.abs().max(1.0), "x={x}");
        }
        for &x in &[250.0, 1000.5, 1e5] {
            let lr = statrs::function::gamma::ln_gamma(x);
            assert!(close(ln_gamma(x).unwrap(), lr, 1e-14), "x={x}");
        }
    }

    #[test]
    fn negative_arguments_by_reflection() {
        // Γ(-0.5) = -2√π
        assert!(close(gamma_real(-0.5).unwrap(), -2.0 * PI.sqrt(), 1e-14));
        assert!(close(gamma_real(-2.5).unwrap(), -8.0 * PI.sqrt() / 15.0, 1e-13));
    }

    #[test]
    fn complex_known_value() {
        // |Γ(i)|² = π / sinh(π)
        let g = gamma(Complex64::new(0.0, 1.0)).unwrap();
        assert!(close(g.norm_sqr(), PI / PI.sinh(), 1e-13));
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer_real(3.0, 4), 360.0);
        assert_eq!(pochhammer_real(-2.0, 4), 0.0);
        assert_eq!(pochhammer_real(1.0, 6), 720.0);
        assert_eq!(pochhammer_real(7.5, 0), 1.0);
    }

    proptest! {
        #[test]
        fn pochhammer_step(re in -5.0f64..5.0, im in -3.0f64..3.0, n in 0usize..30) {
            let l = Complex64::new(re, im);
            let lhs = pochhammer(l, n) * (l + n as f64);
            let rhs = pochhammer(l, n + 1);
            prop_assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1e-300));
        }

        #[test]
        fn pochhammer_gamma_ratio(x in 0.1f64..20.0, n in 0usize..20) {
            let ratio = gamma_real(x + n as f64).unwrap() / gamma_real(x).unwrap();
            prop_assert!(close(pochhammer_real(x, n), ratio, 1e-12));
        }

        #[test]
        fn complex_recurrence(re in -4.5f64..8.0, im in 0.1f64..5.0) {
            let z = Complex64::new(re, im);
            let lhs = gamma(z + 1.0).unwrap();
            let rhs = z * gamma(z).unwrap();
            prop_assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm());
        }
    }
}
