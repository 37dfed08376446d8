use std::io::Write;

use rayon::prelude::*;
use xbeta::Engine;

use crate::format::fmt_g;
use crate::table::{eval_cell, ColumnKind, Range};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// `B(x, β; m)` against `x ∈ (0, 1]`, one curve per `m`.
    Fig1,
    /// Surface `B(x, y; m)` over `(0, 25]²`.
    Fig2,
    /// `B(x, y; m)` against `m` at fixed `(x, y)`.
    Fig3,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotRequest {
    pub figure: Figure,
    pub x: Range,
    pub y: Range,
    pub m: Range,
    pub engine: Engine,
}

impl PlotRequest {
    /// Defaults: fig1 has `β = 1`, `m = −2:1:2`, `x = 0.05:0.05:1`; fig2 has
    /// `m = 2`, `x, y = 1:1:25`; fig3 has `x = y = 2`, `m = −2:0.5:2`.
    pub fn defaults(figure: Figure) -> Self {
        let r = |a, h, b| Range::new(a, h, b).expect("valid default range");
        let (x, y, m) = match figure {
            Figure::Fig1 => (r(0.05, 0.05, 1.0), r(1.0, 1.0, 1.0), r(-2.0, 1.0, 2.0)),
            Figure::Fig2 => (r(1.0, 1.0, 25.0), r(1.0, 1.0, 25.0), r(2.0, 1.0, 2.0)),
            Figure::Fig3 => (r(2.0, 1.0, 2.0), r(2.0, 1.0, 2.0), r(-2.0, 0.5, 2.0)),
        };
        PlotRequest {
            figure,
            x,
            y,
            m,
            engine: Engine::Quadrature,
        }
    }

    /// `(x, y, m)` for every point, in output order.
    pub fn points(&self) -> Vec<(f64, f64, f64)> {
        let (xs, ys, ms) = (self.x.values(), self.y.values(), self.m.values());
        let mut out = Vec::new();
        match self.figure {
            Figure::Fig1 => {
                for &m in &ms {
                    for &x in &xs {
                        for &y in &ys {
                            out.push((x, y, m));
                        }
                    }
                }
            }
            Figure::Fig2 | Figure::Fig3 => {
                for &x in &xs {
                    for &y in &ys {
                        for &m in &ms {
                            out.push((x, y, m));
                        }
                    }
                }
            }
        }
        out
    }
}

/// Columns `x, y, m, value, value_status`.
pub fn write_csv<W: Write>(req: &PlotRequest, out: W) -> Result<(), Box<dyn std::error::Error>> {
    let points = req.points();
    let cells: Vec<_> = points
        .par_iter()
        .map(|&(x, y, m)| eval_cell(ColumnKind::Mecbf { m, engine: req.engine }, x, y))
        .collect();
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(["x", "y", "m", "value", "value_status"])?;
    for (&(x, y, m), c) in points.iter().zip(cells) {
        w.write_record([
            fmt_g(x),
            fmt_g(y),
            fmt_g(m),
            c.value.map(fmt_g).unwrap_or_default(),
            c.status.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
