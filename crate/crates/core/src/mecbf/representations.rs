//! Nine alternative integral representations of `B(α, β; m)`.

use std::f64::consts::{LN_2, PI};

use crate::error::{Endpoint, Error, Result};
use crate::quadrature::{integrate_half_line, integrate_real_line, integrate_unit, EvalResult, Method, QuadConfig};
use crate::scalar::Scalar;
use crate::special::ShapeParams;

use super::{check_inputs, MecbfParam};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Representation {
    /// 1: `2 ∫₀^(π/2) cos^(2α−1)θ sin^(2β−1)θ e^(m cos²θ sin²θ) dθ`.
    Trigonometric,
    /// 2: `∫₀^∞ u^(α−1) (1+u)^(−α−β) e^(m u/(1+u)²) du`.
    HalfLine,
    /// 3: half-sum of form 2 and its mirror image.
    HalfLineSymmetric,
    /// 4: `(c−a)^(1−α−β) ∫ₐᶜ (u−a)^(α−1) (c−u)^(β−1) e^(m (u−a)(c−u)/(c−a)²) du`.
    Interval { a: f64, c: f64 },
    /// 5: `2^(1−α−β) ∫₋₁¹ (1+t)^(α−1) (1−t)^(β−1) e^(m (1−t²)/4) dt`.
    Centered,
    /// 6: `2^(1−α−β) ∫ e^((α−β)x + m/(4cosh²x)) cosh^(−α−β)x dx` over ℝ.
    Hyperbolic,
    /// 7: even part of form 6 on (0, ∞).
    HyperbolicEven,
    /// 8: `2^(−α−β) ∫ e^((α−β)x/2 + m/(2(1+cosh x))) cosh^(−α−β)(x/2) dx` over ℝ.
    HalfAngle,
    /// 9: even part of form 8 on (0, ∞).
    HalfAngleEven,
}

impl Representation {
    pub const ALL: [Representation; 9] = [
        Representation::Trigonometric,
        Representation::HalfLine,
        Representation::HalfLineSymmetric,
        Representation::Interval { a: 0.0, c: 1.0 },
        Representation::Centered,
        Representation::Hyperbolic,
        Representation::HyperbolicEven,
        Representation::HalfAngle,
        Representation::HalfAngleEven,
    ];

    /// Representation `k` in `1..=9`; form 4 uses the interval (0, 1).
    pub fn from_index(k: usize) -> Result<Self> {
        if (1..=9).contains(&k) {
            Ok(Self::ALL[k - 1])
        } else {
            Err(Error::InvalidRepresentationIndex(k))
        }
    }

    pub fn index(&self) -> u8 {
        match self {
            Representation::Trigonometric => 1,
            Representation::HalfLine => 2,
            Representation::HalfLineSymmetric => 3,
            Representation::Interval { .. } => 4,
            Representation::Centered => 5,
            Representation::Hyperbolic => 6,
            Representation::HyperbolicEven => 7,
            Representation::HalfAngle => 8,
            Representation::HalfAngleEven => 9,
        }
    }
}

/// ln cosh x without overflow.
fn ln_cosh(x: f64) -> f64 {
    let y = x.abs();
    y + (-2.0 * y).exp().ln_1p() - LN_2
}

// ∫₀^∞ exp(L) du through u = t/(1−t), with the Jacobian folded into the
// exponent. `ln_f(u, ln u, ln(1+u))` returns L.
fn half_line_log<M, F>(ln_f: F, cfg: &QuadConfig) -> Result<EvalResult<M>>
where
    M: Scalar,
    F: Fn(f64, f64, f64) -> M,
{
    integrate_unit(
        |t: f64, c: f64| {
            let ln_c = c.ln();
            (ln_f(t / c, t.ln() - ln_c, -ln_c) + M::from_real(-2.0 * ln_c)).exp()
        },
        cfg,
    )
    .map_err(|e| match e {
        Error::NonIntegrableSingularity {
            endpoint: Endpoint::Upper,
            exponent,
        } => Error::SlowDecay { exponent },
        other => other,
    })
}

/// Evaluate `B(α, β; m)` through one of its integral representations.
pub fn mecbf_representation<M: Scalar>(
    rep: Representation,
    s: ShapeParams,
    mp: &MecbfParam<M>,
    cfg: &QuadConfig,
) -> Result<EvalResult<M>> {
    check_inputs(s, mp)?;
    cfg.validate()?;
    let (a, b) = (s.alpha, s.beta);
    let m = mp.m;
    let re = M::from_real;
    let result = match rep {
        Representation::Trigonometric => integrate_unit(
            |v: f64, cv: f64| {
                // θ = πv/2, so cos θ = sin(π(1−v)/2)
                let (sin, cos) = ((0.5 * PI * v).sin(), (0.5 * PI * cv).sin());
                let sc = sin * cos;
                (re((2.0 * a - 1.0) * cos.ln() + (2.0 * b - 1.0) * sin.ln() + PI.ln()) + m * (sc * sc)).exp()
            },
            cfg,
        )?,
        Representation::HalfLine => half_line_log(
            |u, ln_u, ln_1u| {
                let w = u / ((1.0 + u) * (1.0 + u));
                re((a - 1.0) * ln_u - (a + b) * ln_1u) + m * w
            },
            cfg,
        )?,
        Representation::HalfLineSymmetric => {
            let first = half_line_log(
                |u, ln_u, ln_1u| re((a - 1.0) * ln_u - (a + b) * ln_1u - LN_2) + m * (u / ((1.0 + u) * (1.0 + u))),
                cfg,
            )?;
            let second = half_line_log(
                |u, ln_u, ln_1u| re((b - 1.0) * ln_u - (a + b) * ln_1u - LN_2) + m * (u / ((1.0 + u) * (1.0 + u))),
                cfg,
            )?;
            EvalResult {
                value: first.value + second.value,
                abs_err_est: first.abs_err_est + second.abs_err_est,
                evals: first.evals + second.evals,
                method: Method::QuadUnit,
            }
        }
        Representation::Interval { a: lo, c: hi } => {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::domain(format!("interval endpoints need a < c, got a={lo} c={hi}")));
            }
            let len = hi - lo;
            let ln_len = len.ln();
            integrate_unit(
                |t: f64, ct: f64| {
                    // u = a + (c−a)t, du = (c−a) dt
                    let (ua, cu) = (len * t, len * ct);
                    let ln = (1.0 - a - b) * ln_len + (a - 1.0) * ua.ln() + (b - 1.0) * cu.ln() + ln_len;
                    (re(ln) + m * (ua * cu / (len * len))).exp()
                },
                cfg,
            )?
        }
        Representation::Centered => integrate_unit(
            |t: f64, ct: f64| {
                // x ∈ (−1, 1) with 1 + x = 2t, 1 − x = 2(1 − t), dx = 2 dt
                let (xp, xm) = (2.0 * t, 2.0 * ct);
                let ln = (1.0 - a - b) * LN_2 + (a - 1.0) * xp.ln() + (b - 1.0) * xm.ln() + LN_2;
                (re(ln) + m * (xp * xm / 4.0)).exp()
            },
            cfg,
        )?,
        Representation::Hyperbolic => integrate_real_line(
            |x: f64| {
                let sech2 = (-2.0 * ln_cosh(x)).exp();
                (re((1.0 - a - b) * LN_2 + (a - b) * x - (a + b) * ln_cosh(x)) + m * (sech2 / 4.0)).exp()
            },
            cfg,
        )?,
        Representation::HyperbolicEven => integrate_half_line(
            |x: f64| {
                let sech2 = (-2.0 * ln_cosh(x)).exp();
                let ln = (2.0 - a - b) * LN_2 + ln_cosh((a - b) * x) - (a + b) * ln_cosh(x);
                (re(ln) + m * (sech2 / 4.0)).exp()
            },
            cfg,
        )?,
        Representation::HalfAngle => integrate_real_line(
            |x: f64| {
                let k = 0.5 * (-ln_cosh(x)).exp() / (1.0 + (-ln_cosh(x)).exp());
                let ln = -(a + b) * LN_2 + 0.5 * (a - b) * x - (a + b) * ln_cosh(0.5 * x);
                (re(ln) + m * k).exp()
            },
            cfg,
        )?,
        Representation::HalfAngleEven => integrate_half_line(
            |x: f64| {
                let k = 0.5 * (-ln_cosh(x)).exp() / (1.0 + (-ln_cosh(x)).exp());
                let ln = (1.0 - a - b) * LN_2 + ln_cosh(0.5 * (a - b) * x) - (a + b) * ln_cosh(0.5 * x);
                (re(ln) + m * k).exp()
            },
            cfg,
        )?,
    };
    Ok(result.with_method(Method::Representation(rep.index())))
}
