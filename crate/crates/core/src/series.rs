//! Term-ratio series summation shared by the hypergeometric and MECBF
//! series engines.

use crate::scalar::Scalar;

/// Why a series summation stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    Tolerance,
    TermCap,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesConfig {
    /// Relative size below which a term counts as negligible.
    pub tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        SeriesConfig {
            tol: f64::EPSILON,
            max_terms: 100_000,
        }
    }
}

impl SeriesConfig {
    pub fn with_tol(tol: f64) -> Self {
        SeriesConfig {
            tol,
            ..Default::default()
        }
    }
}

/// Record of one series evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesDiagnostics {
    pub terms_used: usize,
    /// Bound on the magnitude of the discarded tail.
    pub tail_bound: f64,
    /// `|a_{n+1} / a_n|` at the stopping index.
    pub last_term_ratio: f64,
    pub stopped_by: StopReason,
}

pub(crate) struct SeriesSum<T> {
    pub sum: T,
    /// Sum of term magnitudes, for rounding estimates.
    pub abs_sum: f64,
    pub diagnostics: SeriesDiagnostics,
}

/// Sum `a_0 + a_1 + ...` where `ratio(n) = a_{n+1} / a_n`.
///
/// Stops once three consecutive terms are below `tol * |sum|` and the next
/// ratio is below one. `ratio_bound(n)`, when given, must bound
/// `|a_{k+1}/a_k|` for every `k >= n`; otherwise the current ratio is used
/// for the tail estimate.
pub(crate) fn sum_by_ratio<T, R, B>(first: T, mut ratio: R, ratio_bound: B, cfg: &SeriesConfig) -> SeriesSum<T>
where
    T: Scalar,
    R: FnMut(usize) -> T,
    B: Fn(usize) -> Option<f64>,
{
    let mut term = first;
    let mut sum = first;
    let mut abs_sum = first.modulus();
    let mut run = 0usize;
    let mut n = 0usize;
    loop {
        let r = ratio(n);
        let rmag = r.modulus();
        if term.modulus() <= cfg.tol * sum.modulus() {
            run += 1;
        } else {
            run = 0;
        }
        let stop = if run >= 3 && rmag < 1.0 {
            Some(StopReason::Tolerance)
        } else if n + 1 >= cfg.max_terms {
            Some(StopReason::TermCap)
        } else {
            None
        };
        if let Some(stopped_by) = stop {
            let rho = ratio_bound(n).unwrap_or(rmag);
            let tail_bound = if term.modulus() == 0.0 {
                0.0
            } else if rho < 1.0 {
                term.modulus() * rho / (1.0 - rho)
            } else {
                f64::INFINITY
            };
            return SeriesSum {
                sum,
                abs_sum,
                diagnostics: SeriesDiagnostics {
                    terms_used: n + 1,
                    tail_bound,
                    last_term_ratio: rmag,
                    stopped_by,
                },
            };
        }
        term = term * r;
        sum = sum + term;
        abs_sum += term.modulus();
        n += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_series() {
        let x = 1.0;
        let s = sum_by_ratio(1.0, |n| x / (n as f64 + 1.0), |_| None, &SeriesConfig::default());
        assert!((s.sum - std::f64::consts::E).abs() < 2e-15);
        assert_eq!(s.diagnostics.stopped_by, StopReason::Tolerance);
        assert!(s.diagnostics.tail_bound < 1e-15);
    }

    #[test]
    fn zero_term_does_not_stop_early() {
        // 1 + 0 + 0 + ... then nothing: stops after the three-term run.
        let s = sum_by_ratio(1.0, |_| 0.0, |_| None, &SeriesConfig::default());
        assert_eq!(s.sum, 1.0);
        assert_eq!(s.diagnostics.terms_used, 4);
        assert_eq!(s.diagnostics.tail_bound, 0.0);
    }

    #[test]
    fn growing_terms_are_not_cut() {
        // tiny first term then fast growth: e^{-30} * sum 30^n/n! = 1
        let x = 30.0f64;
        let s = sum_by_ratio((-x).exp(), |n| x / (n as f64 + 1.0), |_| None, &SeriesConfig::default());
        assert!((s.sum - 1.0).abs() < 1e-14, "{}", s.sum);
    }

    #[test]
    fn term_cap() {
        let cfg = SeriesConfig { tol: 1e-16, max_terms: 10 };
        let s = sum_by_ratio(1.0, |_| 0.9, |_| None, &cfg);
        assert_eq!(s.diagnostics.stopped_by, StopReason::TermCap);
        assert_eq!(s.diagnostics.terms_used, 10);
    }
}
