//! Functional relation, symmetry and the two summation formulas.

use crate::error::{Error, Result};
use crate::quadrature::QuadConfig;
use crate::scalar::Scalar;
use crate::special::ShapeParams;

use super::{check_inputs, mecbf_quad, mecbf_series, MecbfParam};

/// Gap between the two sides of an identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    pub residual: f64,
    /// Sum of the error estimates of every evaluation involved.
    pub err_est: f64,
}

impl Residual {
    /// Residual within `factor` times the combined error estimates.
    pub fn within(&self, factor: f64) -> bool {
        self.residual <= factor * self.err_est
    }
}

/// `|B(α, β+1; m) + B(α+1, β; m) − B(α, β; m)|`.
pub fn identity_functional<M: Scalar>(s: ShapeParams, mp: &MecbfParam<M>, cfg: &QuadConfig) -> Result<Residual> {
    check_inputs(s, mp)?;
    let left = mecbf_quad(ShapeParams::new(s.alpha, s.beta + 1.0), mp, cfg)?;
    let right = mecbf_quad(ShapeParams::new(s.alpha + 1.0, s.beta), mp, cfg)?;
    let whole = mecbf_quad(s, mp, cfg)?;
    let sum = left.value + right.value;
    Ok(Residual {
        residual: (sum - whole.value).modulus(),
        err_est: left.abs_err_est + right.abs_err_est + whole.abs_err_est + 2.0 * f64::EPSILON * sum.modulus(),
    })
}

/// `|B(α, β; m) − B(β, α; m)|`.
pub fn identity_symmetry<M: Scalar>(s: ShapeParams, mp: &MecbfParam<M>, cfg: &QuadConfig) -> Result<Residual> {
    check_inputs(s, mp)?;
    let ab = mecbf_quad(s, mp, cfg)?;
    let ba = mecbf_quad(s.swapped(), mp, cfg)?;
    Ok(Residual {
        residual: (ab.value - ba.value).modulus(),
        err_est: ab.abs_err_est + ba.abs_err_est,
    })
}

/// How many terms of a summation formula to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NTerms {
    /// Plain partial sum over `n = 0..=N`.
    Fixed(usize),
    /// Extrapolate the partial sums to the limit.
    Adaptive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummationResult {
    pub partial: f64,
    pub target: f64,
    /// Index of the last term used.
    pub n_terms: usize,
    /// Error estimate of `partial` as a value of the infinite sum, plus that
    /// of `target`.
    pub err_est: f64,
}

impl SummationResult {
    pub fn residual(&self) -> f64 {
        (self.partial - self.target).abs()
    }
}

const SERIES_TOL: f64 = 1e-16;
const MAX_DOUBLINGS: usize = 9;

/// `B(α, 1−β; m) = Σ (β)ₙ/n! · B(α+n, 1; m)` for `β < 1`.
///
/// `s.beta` is the β of the binomial coefficient; the target is
/// `B(α, 1−β; m)`.
pub fn summation_first(s: ShapeParams, mp: &MecbfParam<f64>, n_terms: NTerms, cfg: &QuadConfig) -> Result<SummationResult> {
    let (a, b) = (s.alpha, s.beta);
    if !(b < 1.0) {
        return Err(Error::domain(format!("summation needs beta < 1, got {b}")));
    }
    let target_shapes = ShapeParams::new(a, 1.0 - b);
    check_inputs(target_shapes, mp)?;
    let target = mecbf_quad(target_shapes, mp, cfg)?;
    // terms decay like n^(β−2), so the tail goes as N^(β−1)
    let sigma = 1.0 - b;
    let mut coef = 1.0;
    let term = |n: usize, coef: &mut f64| -> Result<f64> {
        if n > 0 {
            *coef *= (b + n as f64 - 1.0) / n as f64;
        }
        if *coef == 0.0 {
            return Ok(0.0);
        }
        let (r, _) = mecbf_series(ShapeParams::new(a + n as f64, 1.0), mp, SERIES_TOL)?;
        Ok(*coef * r.value)
    };
    let mut terms = |n: usize| term(n, &mut coef);
    let (partial, n_used, err) = sum_terms(&mut terms, n_terms, sigma, 16 + 4 * (a + mp.m.abs()).ceil() as usize)?;
    Ok(SummationResult {
        partial,
        target: target.value,
        n_terms: n_used,
        err_est: err + target.abs_err_est,
    })
}

/// `B(α, β; m) = Σ B(α+n, β+1; m)`.
pub fn summation_second(s: ShapeParams, mp: &MecbfParam<f64>, n_terms: NTerms, cfg: &QuadConfig) -> Result<SummationResult> {
    check_inputs(s, mp)?;
    let target = mecbf_quad(s, mp, cfg)?;
    // terms decay like n^(−β−1)
    let sigma = s.beta;
    let mut terms = |n: usize| -> Result<f64> {
        let (r, _) = mecbf_series(ShapeParams::new(s.alpha + n as f64, s.beta + 1.0), mp, SERIES_TOL)?;
        Ok(r.value)
    };
    let (partial, n_used, err) = sum_terms(
        &mut terms,
        n_terms,
        sigma,
        16 + 4 * (s.alpha + mp.m.abs()).ceil() as usize,
    )?;
    Ok(SummationResult {
        partial,
        target: target.value,
        n_terms: n_used,
        err_est: err + target.abs_err_est,
    })
}

// Returns (sum, last index, error estimate). Adaptive mode takes partial sums
// at N₀·2^j and removes the tail terms c_k N^−(σ+k) by repeated Richardson
// extrapolation, stopping when two successive extrapolants agree.
fn sum_terms<F>(term: &mut F, n_terms: NTerms, sigma: f64, n0: usize) -> Result<(f64, usize, f64)>
where
    F: FnMut(usize) -> Result<f64>,
{
    match n_terms {
        NTerms::Fixed(n) => {
            let mut sum = 0.0;
            let mut abs = 0.0;
            for k in 0..=n {
                let v = term(k)?;
                sum += v;
                abs += v.abs();
            }
            Ok((sum, n, f64::EPSILON * abs * (n as f64 + 1.0).sqrt()))
        }
        NTerms::Adaptive => {
            let mut partials: Vec<f64> = Vec::new();
            let mut sum = 0.0;
            let mut abs = 0.0;
            let mut next = 0usize;
            let mut best = f64::NAN;
            let mut prev_best = f64::NAN;
            let mut last_n = 0;
            for j in 0..=MAX_DOUBLINGS {
                let upto = n0 << j;
                while next <= upto {
                    let v = term(next)?;
                    sum += v;
                    abs += v.abs();
                    next += 1;
                }
                last_n = upto;
                partials.push(sum);
                prev_best = best;
                best = richardson(&partials, sigma);
                let rounding = f64::EPSILON * abs * 16.0;
                if j >= 2 && (best - prev_best).abs() <= 1e-13 * best.abs() + rounding {
                    break;
                }
            }
            let err = (best - prev_best).abs() + f64::EPSILON * abs * 16.0;
            Ok((best, last_n, err))
        }
    }
}

// Extrapolate S(N₀·2^j) assuming S(N) = S + Σ_k c_k N^−(σ+k).
fn richardson(partials: &[f64], sigma: f64) -> f64 {
    let mut row = partials.to_vec();
    let mut k = 0;
    while row.len() > 1 {
        let f = 2f64.powf(sigma + k as f64);
        row = row.windows(2).map(|w| (f * w[1] - w[0]) / (f - 1.0)).collect();
        k += 1;
    }
    row[0]
}
