use rayon::prelude::*;

use crate::error::Error;
use crate::quadrature::{EvalResult, QuadConfig};
use crate::series::SeriesDiagnostics;
use crate::special::ShapeParams;

use super::{mecbf_quad, mecbf_series, MecbfParam};

/// One `m` value of a convergence probe.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeRow {
    pub m: f64,
    pub series: Result<EvalResult<f64>, Error>,
    pub quad: Result<EvalResult<f64>, Error>,
    /// `|series − quad|` when both engines succeeded.
    pub discrepancy: Option<f64>,
    pub diagnostics: Option<SeriesDiagnostics>,
}

impl ProbeRow {
    /// Both engines succeeded and agree within `tol` relative to the
    /// quadrature value.
    pub fn agrees(&self, tol: f64) -> bool {
        match (&self.quad, self.discrepancy) {
            (Ok(q), Some(d)) => d <= tol * q.value.abs().max(f64::MIN_POSITIVE),
            _ => false,
        }
    }
}

/// Run both engines at each `m` and compare. Rows come back in grid order.
pub fn convergence_probe(s: ShapeParams, m_grid: &[f64], tol: f64, cfg: &QuadConfig) -> Vec<ProbeRow> {
    m_grid
        .par_iter()
        .map(|&m| {
            let mp = MecbfParam::new(m);
            let (series, diagnostics) = match mecbf_series(s, &mp, tol) {
                Ok((r, d)) => (Ok(r), Some(d)),
                Err(e) => (Err(e), None),
            };
            let quad = mecbf_quad(s, &mp, cfg);
            let discrepancy = match (&series, &quad) {
                (Ok(a), Ok(b)) => Some((a.value - b.value).abs()),
                _ => None,
            };
            ProbeRow {
                m,
                series,
                quad,
                discrepancy,
                diagnostics,
            }
        })
        .collect()
}
