use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use xbeta::{
    beta_classical, ext_beta_chaudhry, mecbf, naive_series_partial_sums, Engine, Error, MecbfParam, QuadConfig,
    ShapeParams, TermStatus,
};

use crate::format::fmt_g;

/// Terms `n = 0..=NAIVE_TERMS` of the naive expansion go into an `EB` cell.
pub const NAIVE_TERMS: usize = 5;

/// Evenly spaced values written `start:step:stop`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub step: f64,
    pub stop: f64,
}

impl Range {
    pub fn new(start: f64, step: f64, stop: f64) -> Result<Self, String> {
        if !(start.is_finite() && step.is_finite() && stop.is_finite()) {
            return Err("range bounds must be finite".into());
        }
        if !(step > 0.0) {
            return Err(format!("range step must be positive, got {step}"));
        }
        if start > stop {
            return Err(format!("range start {start} exceeds stop {stop}"));
        }
        Ok(Range { start, step, stop })
    }

    pub fn values(&self) -> Vec<f64> {
        // tolerate rounding in (stop − start)/step so the stop value is kept
        let n = ((self.stop - self.start) / self.step * (1.0 + 1e-12) + 1e-9).floor() as usize;
        (0..=n).map(|i| self.start + i as f64 * self.step).collect()
    }
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("bad number {p:?} in range {s:?}: {e}"));
        match parts.as_slice() {
            [v] => {
                let v = num(v)?;
                Range::new(v, 1.0, v)
            }
            [a, b] => Range::new(num(a)?, 1.0, num(b)?),
            [a, h, b] => Range::new(num(a)?, num(h)?, num(b)?),
            _ => Err(format!("range must be start:step:stop, got {s:?}")),
        }
    }
}

/// Where a column takes its second shape from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum YSource {
    Row,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ColumnKind {
    Classical,
    /// Truncated naive expansion of `B_p`, terms `0..=NAIVE_TERMS`.
    ExtendedNaive { p: f64 },
    /// `B_p` by quadrature of its integral.
    ExtendedQuad { p: f64 },
    Mecbf { m: f64, engine: Engine },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub kind: ColumnKind,
    pub y: YSource,
}

/// Which column families to emit in a generic request.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Classical,
    ExtendedP,
    Mecbf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    DomainError,
    UndefinedTerm,
    BudgetExceeded,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Ok => "ok",
            Status::DomainError => "domain_error",
            Status::UndefinedTerm => "undefined_term",
            Status::BudgetExceeded => "budget_exceeded",
        })
    }
}

impl Status {
    pub fn of(e: &Error) -> Status {
        match e {
            Error::BudgetExceeded { .. } => Status::BudgetExceeded,
            _ => Status::DomainError,
        }
    }
}

/// A table value; `value` is `None` unless the status is `Ok`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub value: Option<f64>,
    pub status: Status,
}

impl Cell {
    fn ok(v: f64) -> Cell {
        Cell {
            value: Some(v),
            status: Status::Ok,
        }
    }

    fn failed(status: Status) -> Cell {
        Cell { value: None, status }
    }

    fn from_result(r: xbeta::Result<f64>) -> Cell {
        match r {
            Ok(v) if v.is_finite() => Cell::ok(v),
            Ok(_) => Cell::failed(Status::DomainError),
            Err(e) => Cell::failed(Status::of(&e)),
        }
    }
}

/// Rows pair `x[i]` with `y[i]`, or with `fixed_y`; with neither the row
/// has `y = x`.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRequest {
    pub x: Range,
    pub y: Option<Range>,
    pub fixed_y: Option<f64>,
    pub columns: Vec<Column>,
}

impl TableRequest {
    /// Columns for the chosen families: `B`, `EB_naive_p*` with its
    /// `EB_quad_p*` companion, and one `MB*` column per `m`.
    pub fn generic(
        x: Range,
        y: Option<Range>,
        fixed_y: Option<f64>,
        families: &[Family],
        p: f64,
        m_values: &[f64],
        engine: Engine,
    ) -> Result<Self, String> {
        if families.is_empty() {
            return Err("at least one column family is required".into());
        }
        if fixed_y.is_some_and(|v| !v.is_finite()) {
            return Err("fixed y must be finite".into());
        }
        let mut columns = Vec::new();
        for f in families {
            match f {
                Family::Classical => columns.push(Column {
                    name: "B".into(),
                    kind: ColumnKind::Classical,
                    y: YSource::Row,
                }),
                Family::ExtendedP => {
                    columns.push(Column {
                        name: format!("EB_naive_p{}", fmt_g(p)),
                        kind: ColumnKind::ExtendedNaive { p },
                        y: YSource::Row,
                    });
                    columns.push(Column {
                        name: format!("EB_quad_p{}", fmt_g(p)),
                        kind: ColumnKind::ExtendedQuad { p },
                        y: YSource::Row,
                    });
                }
                Family::Mecbf => {
                    if m_values.is_empty() {
                        return Err("mecbf columns need at least one m value".into());
                    }
                    for (k, &m) in m_values.iter().enumerate() {
                        columns.push(Column {
                            name: format!("MB{}_{}_m{}", k + 1, engine_tag(engine), fmt_g(m)),
                            kind: ColumnKind::Mecbf { m, engine },
                            y: YSource::Row,
                        });
                    }
                }
            }
        }
        let req = TableRequest { x, y, fixed_y, columns };
        req.rows()?;
        Ok(req)
    }

    /// Classical, extended and modified columns over `x = y = 0:1:10`, with
    /// second shape 0.25 in the `*2`/`*3` columns.
    pub fn table1(engine: Engine) -> Self {
        let x = Range::new(0.0, 1.0, 10.0).expect("valid range");
        let tag = engine_tag(engine);
        let col = |name: String, kind, y| Column { name, kind, y };
        let fixed = YSource::Fixed(0.25);
        let mb = |m: f64| ColumnKind::Mecbf { m, engine };
        let columns = vec![
            col("B1".into(), ColumnKind::Classical, YSource::Row),
            col("B2".into(), ColumnKind::Classical, fixed),
            col("EB1_naive".into(), ColumnKind::ExtendedNaive { p: 0.01 }, YSource::Row),
            col("EB2_naive".into(), ColumnKind::ExtendedNaive { p: 0.0 }, fixed),
            col("EB3_naive".into(), ColumnKind::ExtendedNaive { p: 0.01 }, fixed),
            col("EB4_naive".into(), ColumnKind::ExtendedNaive { p: 0.0 }, YSource::Row),
            col("EB1_quad".into(), ColumnKind::ExtendedQuad { p: 0.01 }, YSource::Row),
            col("EB3_quad".into(), ColumnKind::ExtendedQuad { p: 0.01 }, fixed),
            col(format!("MB1_{tag}"), mb(0.01), YSource::Row),
            col(format!("MB2_{tag}"), mb(0.0), fixed),
            col(format!("MB3_{tag}"), mb(0.01), fixed),
            col(format!("MB4_{tag}"), mb(0.0), YSource::Row),
        ];
        TableRequest {
            x,
            y: None,
            fixed_y: None,
            columns,
        }
    }

    /// `B(x, x; m)` for `x = 0:1:10` and seven `m` values spanning the
    /// compatibility interval.
    pub fn table2(engine: Engine) -> Self {
        let x = Range::new(0.0, 1.0, 10.0).expect("valid range");
        let ms = [-xbeta::COMPAT_RADIUS, -1.0, -0.5, 0.0, 0.5, 1.0, xbeta::COMPAT_RADIUS];
        TableRequest::generic(x, None, None, &[Family::Classical, Family::Mecbf], 0.0, &ms, engine)
            .expect("valid preset")
    }

    /// `(x, y)` per row.
    pub fn rows(&self) -> Result<Vec<(f64, f64)>, String> {
        let xs = self.x.values();
        if let Some(v) = self.fixed_y {
            return Ok(xs.iter().map(|&x| (x, v)).collect());
        }
        match &self.y {
            None => Ok(xs.iter().map(|&x| (x, x)).collect()),
            Some(r) => {
                let ys = r.values();
                if ys.len() != xs.len() {
                    return Err(format!(
                        "x and y ranges pair row by row and must have equal length, got {} and {}",
                        xs.len(),
                        ys.len()
                    ));
                }
                Ok(xs.into_iter().zip(ys).collect())
            }
        }
    }
}

fn engine_tag(e: Engine) -> &'static str {
    match e {
        Engine::Series => "series",
        Engine::Quadrature => "quad",
    }
}

fn tight() -> QuadConfig {
    QuadConfig::default().with_abs_tol(0.0).with_rel_tol(1e-13)
}

pub fn eval_cell(kind: ColumnKind, a: f64, b: f64) -> Cell {
    let s = ShapeParams::new(a, b);
    match kind {
        ColumnKind::Classical => Cell::from_result(beta_classical(s)),
        ColumnKind::ExtendedNaive { p } => {
            let terms = naive_series_partial_sums(s, p, NAIVE_TERMS);
            if terms.iter().any(|t| t.status == TermStatus::TermUndefined) {
                Cell::failed(Status::UndefinedTerm)
            } else {
                Cell::from_result(Ok(terms.last().expect("at least one term").partial_sum))
            }
        }
        ColumnKind::ExtendedQuad { p } => Cell::from_result(ext_beta_chaudhry(s, p, &tight()).map(|r| r.value)),
        ColumnKind::Mecbf { m, engine } => {
            Cell::from_result(mecbf(s, &MecbfParam::new(m), engine, &tight()).map(|r| r.value))
        }
    }
}

/// Compute every cell; rows are evaluated in parallel and returned in order.
pub fn compute(req: &TableRequest) -> Result<Vec<((f64, f64), Vec<Cell>)>, String> {
    let rows = req.rows()?;
    Ok(rows
        .par_iter()
        .map(|&(x, y)| {
            let cells = req
                .columns
                .iter()
                .map(|c| {
                    let b = match c.y {
                        YSource::Row => y,
                        YSource::Fixed(v) => v,
                    };
                    eval_cell(c.kind, x, b)
                })
                .collect();
            ((x, y), cells)
        })
        .collect())
}

/// Write the table as CSV.
pub fn write_csv<W: Write>(req: &TableRequest, out: W) -> Result<(), Box<dyn std::error::Error>> {
    let rows = compute(req)?;
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let mut header = vec!["x".to_string(), "y".to_string()];
    for c in &req.columns {
        header.push(c.name.clone());
        header.push(format!("{}_status", c.name));
    }
    w.write_record(&header)?;
    for ((x, y), cells) in rows {
        let mut rec = vec![fmt_g(x), fmt_g(y)];
        for c in cells {
            rec.push(c.value.map(fmt_g).unwrap_or_default());
            rec.push(c.status.to_string());
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!("0:1:10".parse::<Range>().unwrap().values().len(), 11);
        assert_eq!("0:0.1:1".parse::<Range>().unwrap().values().last(), Some(&1.0));
        assert_eq!("3".parse::<Range>().unwrap().values(), vec![3.0]);
        assert!("1:0:2".parse::<Range>().is_err());
        assert!("2:1:1".parse::<Range>().is_err());
        assert!("a:1".parse::<Range>().is_err());
    }

    #[test]
    fn naive_cells() {
        let k = ColumnKind::ExtendedNaive { p: 0.01 };
        assert_eq!(eval_cell(k, 5.0, 5.0).status, Status::UndefinedTerm);
        assert_eq!(eval_cell(k, 6.0, 6.0).status, Status::Ok);
        assert_eq!(eval_cell(k, 8.0, 0.25).status, Status::UndefinedTerm);
    }

    #[test]
    fn failed_cells_have_no_value() {
        let c = eval_cell(ColumnKind::Classical, 0.0, 0.0);
        assert_eq!(c, Cell::failed(Status::DomainError));
    }

    #[test]
    fn mismatched_y_range() {
        let x = Range::new(0.0, 1.0, 3.0).unwrap();
        let y = Some(Range::new(0.0, 1.0, 5.0).unwrap());
        assert!(TableRequest::generic(x, y, None, &[Family::Classical], 0.0, &[], Engine::Series).is_err());
    }
}
