//! Built-in property suites over fixed parameter grids.

use std::fmt;

use rayon::prelude::*;

use crate::error::Result;
use crate::mebd::{self, CdfTable, DistSpec};
use crate::mecbf::{
    derivative_relation, mecbf_quad, mecbf_representation, mecbf_series, mellin_relation, summation_first,
    summation_second, MecbfParam, NTerms, Representation, COMPAT_RADIUS,
};
use crate::quadrature::QuadConfig;
use crate::special::{beta_classical, ShapeParams};

/// Shape values of the standard grid, used for both α and β.
pub const GRID_SHAPES: [f64; 5] = [0.5, 1.0, 2.0, 5.0, 10.0];

/// `m` values of the standard grid.
pub const GRID_M: [f64; 7] = [-COMPAT_RADIUS, -1.0, -0.5, 0.0, 0.5, 1.0, COMPAT_RADIUS];

/// Points where every integral representation is compared with direct
/// quadrature.
pub const REPRESENTATION_POINTS: [(f64, f64, f64); 4] =
    [(1.0, 1.0, 1.0), (2.0, 3.0, 1.5), (0.7, 2.5, -1.0), (5.0, 5.0, COMPAT_RADIUS)];

/// Size and seed of the sampling checks.
pub const KS_SAMPLES: usize = 10_000;
pub const KS_SEED: u64 = 20_240_901;

/// Relative perturbation applied to one side of every comparison when a
/// fault is injected.
const FAULT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Identities,
    Representations,
    Distribution,
    Convergence,
    All,
}

impl Suite {
    pub const EACH: [Suite; 4] = [Suite::Identities, Suite::Representations, Suite::Distribution, Suite::Convergence];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Representations => "representations",
            Suite::Distribution => "distribution",
            Suite::Convergence => "convergence",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct VerifyOptions {
    /// Replaces the limit of every two-sided comparison. Bounds and KS
    /// tests keep their own limits.
    pub tol: Option<f64>,
    /// Negative control: perturb one side of every comparison.
    pub fault: bool,
}

/// One check of a suite.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub alpha: f64,
    pub beta: f64,
    pub m: f64,
    /// Residual, ratio or statistic that is compared with `limit`.
    pub measured: f64,
    pub limit: f64,
    /// Set when an evaluation failed; the check then fails.
    pub error: Option<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.measured <= self.limit
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{verdict} {:<15} {:<22} alpha={:<7} beta={:<7} m={:<8} ",
            self.suite.name(),
            self.name,
            self.alpha,
            self.beta,
            self.m
        )?;
        match &self.error {
            Some(e) => write!(f, "error: {e}"),
            None => write!(f, "measured={:.3e} limit={:.3e}", self.measured, self.limit),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

#[derive(Clone, Copy)]
enum Tol {
    Abs(f64),
    Rel(f64),
}

// Builds checks for one suite with the shared options applied.
struct Ctx {
    suite: Suite,
    opts: VerifyOptions,
}

impl Ctx {
    fn perturb(&self, x: f64) -> f64 {
        if self.opts.fault {
            x * (1.0 + FAULT)
        } else {
            x
        }
    }

    fn base(&self, name: &str, (a, b, m): (f64, f64, f64)) -> Check {
        Check {
            suite: self.suite,
            name: name.to_string(),
            alpha: a,
            beta: b,
            m,
            measured: f64::NAN,
            limit: f64::NAN,
            error: None,
        }
    }

    /// `|lhs − rhs|` against `tol`; the fault perturbs `rhs`.
    fn pair(&self, name: &str, at: (f64, f64, f64), sides: Result<(f64, f64)>, tol: Tol) -> Check {
        let mut c = self.base(name, at);
        match sides {
            Ok((lhs, rhs)) => {
                let rhs = self.perturb(rhs);
                let diff = (lhs - rhs).abs();
                let (measured, limit) = match tol {
                    Tol::Abs(t) => (diff, t),
                    Tol::Rel(t) => (diff / rhs.abs(), t),
                };
                c.measured = if measured.is_nan() { f64::INFINITY } else { measured };
                c.limit = self.opts.tol.unwrap_or(limit);
            }
            Err(e) => c.error = Some(e.to_string()),
        }
        c
    }

    /// `value ≤ upper`; the fault perturbs `value`.
    fn bound(&self, name: &str, at: (f64, f64, f64), value: Result<f64>, upper: f64) -> Check {
        let mut c = self.base(name, at);
        match value {
            Ok(v) => {
                c.measured = self.perturb(v);
                c.limit = upper;
            }
            Err(e) => c.error = Some(e.to_string()),
        }
        c
    }
}

type Job<'a> = Box<dyn Fn() -> Vec<Check> + Send + Sync + 'a>;

/// Run `suite`. Checks come back in a fixed order regardless of threading.
pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Report {
    if suite == Suite::All {
        let checks = Suite::EACH.iter().flat_map(|&s| run_suite(s, opts).checks).collect();
        return Report { checks };
    }
    let ctx = Ctx { suite, opts: *opts };
    let jobs = match suite {
        Suite::Identities => identity_jobs(&ctx),
        Suite::Representations => representation_jobs(&ctx),
        Suite::Distribution => distribution_jobs(&ctx),
        Suite::Convergence => convergence_jobs(&ctx),
        Suite::All => unreachable!(),
    };
    let checks = jobs.par_iter().map(|job| job()).collect::<Vec<_>>().into_iter().flatten().collect();
    Report { checks }
}

fn cfg() -> QuadConfig {
    QuadConfig::default()
}

fn sp(a: f64, b: f64) -> ShapeParams {
    ShapeParams::new(a, b)
}

fn grid() -> Vec<(f64, f64, f64)> {
    let mut out = Vec::new();
    for &a in &GRID_SHAPES {
        for &b in &GRID_SHAPES {
            for &m in &GRID_M {
                out.push((a, b, m));
            }
        }
    }
    out
}

fn quad(a: f64, b: f64, m: f64) -> Result<f64> {
    Ok(mecbf_quad(sp(a, b), &MecbfParam::new(m), &cfg())?.value)
}

fn identity_jobs(ctx: &Ctx) -> Vec<Job<'_>> {
    let mut jobs: Vec<Job<'_>> = Vec::new();
    for at in grid() {
        jobs.push(Box::new(move || {
            let (a, b, m) = at;
            let mp = MecbfParam::new(m);
            let tol = Tol::Abs(1e-8);
            let mut out = vec![
                ctx.pair(
                    "functional",
                    at,
                    (|| Ok((quad(a, b + 1.0, m)? + quad(a + 1.0, b, m)?, quad(a, b, m)?)))(),
                    tol,
                ),
                ctx.pair("symmetry", at, (|| Ok((quad(a, b, m)?, quad(b, a, m)?)))(), tol),
                ctx.pair(
                    "summation_first",
                    at,
                    summation_first(sp(a, 1.0 - b), &mp, NTerms::Adaptive, &cfg()).map(|r| (r.partial, r.target)),
                    tol,
                ),
                ctx.pair(
                    "summation_second",
                    at,
                    summation_second(sp(a, b), &mp, NTerms::Adaptive, &cfg()).map(|r| (r.partial, r.target)),
                    tol,
                ),
            ];
            if m.abs() <= 2.0 {
                out.push(ctx.pair(
                    "derivative",
                    at,
                    derivative_relation(sp(a, b), &mp, 1, &cfg()).map(|(d, r)| (d, r.value)),
                    Tol::Rel(1e-5),
                ));
            }
            let ratio = quad(a, b, m).and_then(|v| Ok(v / beta_classical(sp(a, b))?));
            if m == COMPAT_RADIUS {
                out.push(ctx.bound("bound_radius", at, ratio.clone(), 1.6626 + 1e-4));
            }
            if m > 0.0 {
                out.push(ctx.bound("bound_exp", at, ratio, (m / 4.0).exp() * (1.0 + 1e-14)));
            }
            out
        }));
    }
    for &(a, order) in &[(2.0, 1.0), (3.0, 1.0), (3.0, 2.0)] {
        jobs.push(Box::new(move || {
            let name = format!("mellin_s{order}");
            let sides = mellin_relation(sp(a, a), order, &cfg()).map(|(l, r)| (l.value, r));
            vec![ctx.pair(&name, (a, a, f64::NAN), sides, Tol::Rel(1e-6))]
        }));
    }
    jobs
}

fn representation_jobs(ctx: &Ctx) -> Vec<Job<'_>> {
    let mut jobs: Vec<Job<'_>> = Vec::new();
    for &at in &REPRESENTATION_POINTS {
        for rep in Representation::ALL {
            jobs.push(Box::new(move || {
                let (a, b, m) = at;
                let name = format!("representation_{}", rep.index());
                let sides = (|| {
                    let v = mecbf_representation(rep, sp(a, b), &MecbfParam::new(m), &cfg())?.value;
                    Ok((v, quad(a, b, m)?))
                })();
                vec![ctx.pair(&name, at, sides, Tol::Abs(1e-8))]
            }));
        }
    }
    jobs
}

fn convergence_jobs(ctx: &Ctx) -> Vec<Job<'_>> {
    let mut jobs: Vec<Job<'_>> = Vec::new();
    for &a in &GRID_SHAPES {
        for &b in &GRID_SHAPES {
            for m in GRID_M.iter().copied().chain([-10.0, 10.0]) {
                jobs.push(Box::new(move || {
                    let sides = (|| {
                        let s = mecbf_series(sp(a, b), &MecbfParam::new(m), 1e-16)?.0.value;
                        Ok((s, quad(a, b, m)?))
                    })();
                    vec![ctx.pair("series_vs_quadrature", (a, b, m), sides, Tol::Rel(1e-9))]
                }));
            }
        }
    }
    jobs
}

fn distribution_jobs(ctx: &Ctx) -> Vec<Job<'_>> {
    let mut jobs: Vec<Job<'_>> = Vec::new();
    for &(p, q) in &[(1.0, 1.0), (2.0, 3.0), (0.5, 4.0)] {
        jobs.push(Box::new(move || {
            let at = (p, q, 0.0);
            let d = DistSpec::new(p, q, 0.0);
            let s = p + q;
            vec![
                ctx.pair(
                    "mean_classical",
                    at,
                    d.clone().and_then(|d| Ok((mebd::mean(&d)?, p / s))),
                    Tol::Abs(1e-10),
                ),
                ctx.pair(
                    "variance_classical",
                    at,
                    d.and_then(|d| Ok((mebd::variance(&d)?, p * q / (s * s * (s + 1.0))))),
                    Tol::Abs(1e-10),
                ),
            ]
        }));
    }
    for &(p, q) in &[(0.5, 0.5), (1.0, 1.0), (2.0, 3.0), (0.5, 4.0), (7.0, 2.5)] {
        for &m in &[-COMPAT_RADIUS, 0.0, 1.5, COMPAT_RADIUS] {
            jobs.push(Box::new(move || {
                let at = (p, q, m);
                let d = DistSpec::new(p, q, m);
                vec![
                    ctx.pair(
                        "normalization",
                        at,
                        d.clone().and_then(|d| Ok((normalization(&d)?, 1.0))),
                        Tol::Abs(1e-9),
                    ),
                    ctx.pair(
                        "second_moment",
                        at,
                        d.clone().and_then(|d| {
                            let mu = mebd::mean(&d)?;
                            Ok((mebd::raw_moment(&d, 2.0)?, mu * mu + mebd::variance(&d)?))
                        }),
                        Tol::Abs(1e-9),
                    ),
                    ctx.pair(
                        "mgf_zero",
                        at,
                        d.clone().and_then(|d| Ok((mebd::mgf(&d, 0.0, 1e-15)?.0, 1.0))),
                        Tol::Abs(0.0),
                    ),
                    ctx.pair(
                        "mgf_slope",
                        at,
                        d.and_then(|d| {
                            let h = 1e-5;
                            let up = mebd::mgf(&d, h, 1e-15)?.0;
                            let down = mebd::mgf(&d, -h, 1e-15)?.0;
                            Ok(((up - down) / (2.0 * h), mebd::mean(&d)?))
                        }),
                        Tol::Abs(1e-6),
                    ),
                ]
            }));
        }
    }
    for &(p, q, m) in &[(2.0, 3.0, 0.0), (2.0, 2.0, 1.5), (0.8, 5.0, -1.0)] {
        jobs.push(Box::new(move || {
            let at = (p, q, m);
            let stat = (|| {
                let d = DistSpec::new(p, q, m)?;
                let xs = mebd::sample(&d, KS_SAMPLES, KS_SEED)?;
                let table = CdfTable::new(&d)?;
                mebd::ks_statistic(&xs, |x| table.cdf(x))
            })();
            vec![ctx.bound("ks_1pct", at, stat, mebd::ks_critical(KS_SAMPLES))]
        }));
    }
    jobs
}

// ∫ pdf over (0, 1), with `1 − t` passed exactly so endpoint singularities
// keep full precision
fn normalization(d: &DistSpec) -> Result<f64> {
    let ln_norm = d.normalizer.ln();
    let (p1, q1, m) = (d.p - 1.0, d.q - 1.0, d.m);
    let cfg = QuadConfig::default().with_abs_tol(0.0).with_rel_tol(1e-13);
    Ok(crate::quadrature::integrate_unit(
        |t: f64, c: f64| (p1 * t.ln() + q1 * c.ln() + m * t * c - ln_norm).exp(),
        &cfg,
    )?
    .value)
}
