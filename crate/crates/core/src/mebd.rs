//! The distribution on (0, 1) with density `t^(p−1) (1−t)^(q−1) e^(m t (1−t)) / B(p, q; m)`.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mecbf::{mecbf_incomplete, mecbf_incomplete_upper, mecbf_quad, MecbfParam};
use crate::quadrature::{integrate_unit, QuadConfig};
use crate::special::ShapeParams;

/// Asymptotic Kolmogorov–Smirnov coefficient at the 1% level.
pub const KS_CRITICAL_1PCT: f64 = 1.6276;

/// Absolute tolerance of sampled quantiles.
pub const QUANTILE_TOL: f64 = 1e-10;

const GRID_CELLS: usize = 256;
const MGF_MAX_TERMS: usize = 10_000;

/// Shape parameters, extension parameter and the cached normalizer
/// `B(p, q; m)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistSpec {
    pub p: f64,
    pub q: f64,
    pub m: f64,
    pub normalizer: f64,
}

impl DistSpec {
    /// Requires `p, q > 0` and finite `m`.
    pub fn new(p: f64, q: f64, m: f64) -> Result<Self> {
        if !(p > 0.0 && q > 0.0 && p.is_finite() && q.is_finite()) {
            return Err(Error::domain(format!("distribution needs finite p, q > 0, got p={p} q={q}")));
        }
        if !m.is_finite() {
            return Err(Error::domain(format!("m must be finite, got {m}")));
        }
        let normalizer = mecbf_quad(ShapeParams::new(p, q), &MecbfParam::new(m), &norm_cfg())?.value;
        if !(normalizer > 0.0 && normalizer.is_finite()) {
            return Err(Error::Overflow(format!("normalizer B({p}, {q}; {m}) = {normalizer}")));
        }
        Ok(DistSpec { p, q, m, normalizer })
    }

    fn shapes(&self) -> ShapeParams {
        ShapeParams::new(self.p, self.q)
    }

    fn param(&self) -> MecbfParam<f64> {
        MecbfParam::new(self.m)
    }

    // tolerances for pieces that get divided by the normalizer
    fn cfg(&self) -> QuadConfig {
        QuadConfig::default()
            .with_abs_tol(1e-15 * self.normalizer)
            .with_rel_tol(1e-13)
    }

    // log density at `t`, given `1 − t` separately
    fn ln_pdf(&self, t: f64, c: f64) -> f64 {
        (self.p - 1.0) * t.ln() + (self.q - 1.0) * c.ln() + self.m * t * c - self.normalizer.ln()
    }
}

fn norm_cfg() -> QuadConfig {
    QuadConfig::default().with_abs_tol(0.0).with_rel_tol(1e-13)
}

/// Density; zero outside (0, 1).
pub fn pdf(spec: &DistSpec, t: f64) -> f64 {
    if t > 0.0 && t < 1.0 {
        spec.ln_pdf(t, 1.0 - t).exp()
    } else {
        0.0
    }
}

/// Distribution function, from the lower incomplete integral for `x ≤ 1/2`
/// and the upper one above.
pub fn cdf(spec: &DistSpec, x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::domain("x is NaN"));
    }
    if x <= 0.0 {
        return Ok(0.0);
    }
    if x >= 1.0 {
        return Ok(1.0);
    }
    let cfg = spec.cfg();
    let f = if x <= 0.5 {
        mecbf_incomplete(x, spec.shapes(), &spec.param(), &cfg)?.value / spec.normalizer
    } else {
        1.0 - mecbf_incomplete_upper(x, spec.shapes(), &spec.param(), &cfg)?.value / spec.normalizer
    };
    Ok(f.clamp(0.0, 1.0))
}

/// `E(X^ν) = B(p+ν, q; m) / B(p, q; m)`.
pub fn raw_moment(spec: &DistSpec, nu: f64) -> Result<f64> {
    if !(spec.p + nu > 0.0) {
        return Err(Error::domain(format!("moment order needs p + nu > 0, got p={} nu={nu}", spec.p)));
    }
    if nu == 0.0 {
        return Ok(1.0);
    }
    let b = mecbf_quad(ShapeParams::new(spec.p + nu, spec.q), &spec.param(), &norm_cfg())?;
    Ok(b.value / spec.normalizer)
}

pub fn mean(spec: &DistSpec) -> Result<f64> {
    raw_moment(spec, 1.0)
}

/// Computed as `∫ (t − μ)² f(t) dt` rather than `E(X²) − μ²`, which cancels
/// when the variance is small.
pub fn variance(spec: &DistSpec) -> Result<f64> {
    let mu = mean(spec)?;
    let v = integrate_unit(
        |t: f64, c: f64| {
            let d = t - mu;
            d * d * spec.ln_pdf(t, c).exp()
        },
        &QuadConfig::default().with_abs_tol(0.0).with_rel_tol(1e-13),
    )?;
    Ok(v.value)
}

/// `E(e^(tX)) = Σ tⁿ/n! · E(Xⁿ)`. Since `0 < E(Xⁿ) ≤ 1` the tail after
/// term `n` is at most `|t|^(n+1)/(n+1)! · (1 − |t|/(n+2))⁻¹`.
/// Returns the value and the number of terms summed.
pub fn mgf(spec: &DistSpec, t: f64, tol: f64) -> Result<(f64, usize)> {
    if !t.is_finite() {
        return Err(Error::domain(format!("t must be finite, got {t}")));
    }
    if t == 0.0 {
        return Ok((1.0, 1));
    }
    let tol = tol.max(f64::EPSILON);
    let mut sum = 1.0;
    let mut coef = 1.0;
    let at = t.abs();
    for n in 1..MGF_MAX_TERMS {
        coef *= t / n as f64;
        sum += coef * raw_moment(spec, n as f64)?;
        let k = (n + 1) as f64;
        if at < k + 1.0 {
            let tail = coef.abs() * at / k / (1.0 - at / (k + 1.0));
            if tail <= tol * sum.abs() {
                return Ok((sum, n + 1));
            }
        }
    }
    Err(Error::BudgetExceeded {
        best: sum.into(),
        abs_err_est: f64::INFINITY,
        evals: MGF_MAX_TERMS,
    })
}

/// Distribution function tabulated on a uniform grid, refined between nodes
/// by quadrature. Used for sampling and for bulk evaluation.
#[derive(Debug, Clone)]
pub struct CdfTable {
    spec: DistSpec,
    /// `F(i / GRID_CELLS)`.
    nodes: Vec<f64>,
    /// Sum of the cell masses; the table is normalized by it.
    total: f64,
}

impl CdfTable {
    pub fn new(spec: &DistSpec) -> Result<Self> {
        let h = 1.0 / GRID_CELLS as f64;
        let cells: Vec<f64> = (0..GRID_CELLS)
            .into_par_iter()
            .map(|i| cell_mass(spec, i as f64 * h, h))
            .collect::<Result<_>>()?;
        let total: f64 = cells.iter().sum();
        let mut nodes = Vec::with_capacity(GRID_CELLS + 1);
        let mut acc = 0.0;
        nodes.push(0.0);
        for c in &cells {
            acc += c;
            nodes.push((acc / total).min(1.0));
        }
        Ok(CdfTable { spec: *spec, nodes, total })
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        if x <= 0.0 {
            return Ok(0.0);
        }
        if x >= 1.0 {
            return Ok(1.0);
        }
        let h = 1.0 / GRID_CELLS as f64;
        let i = ((x / h) as usize).min(GRID_CELLS - 1);
        let lo = i as f64 * h;
        let f = self.nodes[i] + cell_mass(&self.spec, lo, x - lo)? * self.scale();
        Ok(f.clamp(self.nodes[i], self.nodes[i + 1]))
    }

    /// Bisection to `QUANTILE_TOL` inside the grid cell holding `u`.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&u) {
            return Err(Error::domain(format!("probability must lie in [0, 1], got {u}")));
        }
        let h = 1.0 / GRID_CELLS as f64;
        let i = self.nodes.partition_point(|&f| f <= u).clamp(1, GRID_CELLS) - 1;
        let base = i as f64 * h;
        let (mut lo, mut hi) = (base, base + h);
        while hi - lo > QUANTILE_TOL {
            let mid = 0.5 * (lo + hi);
            let f = self.nodes[i] + cell_mass(&self.spec, base, mid - base)? * self.scale();
            if f < u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    fn scale(&self) -> f64 {
        1.0 / self.total
    }
}

// ∫ over [a, a + w] of the unnormalized density
fn cell_mass(spec: &DistSpec, a: f64, w: f64) -> Result<f64> {
    if w <= 0.0 {
        return Ok(0.0);
    }
    let b = a + w;
    let ln_w = w.ln();
    let (p1, q1) = (spec.p - 1.0, spec.q - 1.0);
    let r = integrate_unit(
        |t: f64, c: f64| {
            // x = a + w t and 1 − x = (1 − b) + w (1 − t), both without cancellation
            let x = a + w * t;
            let cx = (1.0 - b) + w * c;
            (p1 * x.ln() + q1 * cx.ln() + spec.m * x * cx + ln_w).exp()
        },
        &spec.cfg(),
    )?;
    Ok(r.value)
}

/// `n` draws by inverse-CDF. Draw `i` uses word `2i` of the ChaCha8 stream
/// seeded with `seed`, so results do not depend on thread count.
pub fn sample(spec: &DistSpec, n: usize, seed: u64) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::domain("sample size must be at least 1"));
    }
    let table = CdfTable::new(spec)?;
    (0..n)
        .into_par_iter()
        .map(|i| table.quantile(uniform(seed, i)))
        .collect()
}

/// The `i`-th uniform variate in (0, 1) of the stream for `seed`.
pub fn uniform(seed: u64, i: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_word_pos(2 * i as u128);
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// Kolmogorov–Smirnov statistic `sup |F_n − F|` of `samples` against `cdf`.
pub fn ks_statistic<F>(samples: &[f64], cdf: F) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x)?;
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    Ok(d)
}

/// Critical value of the KS statistic at the 1% level for `n` samples.
pub fn ks_critical(n: usize) -> f64 {
    KS_CRITICAL_1PCT / (n as f64).sqrt()
}
