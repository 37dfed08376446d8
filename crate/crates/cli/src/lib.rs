//! Command-line frontend for the `xbeta` library.

pub mod format;
pub mod plot;
pub mod table;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use xbeta::{
    beta_classical, beta_rel_err, ext_beta_chaudhry, ext_beta_srivastava, mecbf, mecbf_incomplete,
    naive_series_partial_sums, run_suite, Engine, Error, EvalResult, ExtendedBetaParams, MecbfParam, Method, QuadConfig,
    ShapeParams, Suite, TermStatus, VerifyOptions,
};

use crate::format::{fmt_fixed, fmt_g};
use crate::plot::{Figure, PlotRequest};
use crate::table::{Family, Range, TableRequest};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "xbeta", version, about = "Beta function extensions: evaluation, tables and checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one function at one point.
    Eval(EvalArgs),
    /// Tabulate functions over a grid of shapes as CSV.
    Table(TableArgs),
    /// Curve or surface data as CSV.
    Plotdata(PlotArgs),
    /// Partial sums of the term-by-term expansion of the extended beta function.
    DivergenceDemo(DivergenceArgs),
    /// Run a built-in verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FunctionName {
    Beta,
    ExtBeta,
    GenExtBeta,
    Mecbf,
    MecbfIncomplete,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineArg {
    Series,
    Quadrature,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Engine {
        match e {
            EngineArg::Series => Engine::Series,
            EngineArg::Quadrature => Engine::Quadrature,
        }
    }
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long = "fn", value_enum)]
    pub function: FunctionName,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: f64,
    /// Extension parameter of the modified function.
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub m: f64,
    /// Imaginary part of `m`.
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub m_im: f64,
    /// Regularization parameter of the extended functions.
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub p: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
    pub delta: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
    pub zeta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub kappa: f64,
    #[arg(long, default_value_t = 1.0)]
    pub mu: f64,
    /// Upper limit of the incomplete function.
    #[arg(long, default_value_t = 1.0)]
    pub x: f64,
    #[arg(long, value_enum, default_value_t = EngineArg::Quadrature)]
    pub engine: EngineArg,
    /// Reject |m| above 2.0335.
    #[arg(long)]
    pub compat: bool,
    #[arg(long, default_value_t = 1e-12)]
    pub abs_tol: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub rel_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Table1,
    Table2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ColumnArg {
    Classical,
    ExtendedP,
    Mecbf,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Predefined request; the grid and column flags are ignored.
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// First shape, `start:step:stop`.
    #[arg(long, default_value = "0:1:10", allow_hyphen_values = true)]
    pub x: Range,
    /// Second shape, paired with `x` row by row; defaults to `y = x`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "fixed_y")]
    pub y: Option<Range>,
    /// Second shape held fixed.
    #[arg(long, allow_hyphen_values = true)]
    pub fixed_y: Option<f64>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "classical,mecbf")]
    pub columns: Vec<ColumnArg>,
    /// Values of `m` for the modified columns.
    #[arg(long = "m", value_delimiter = ',', allow_hyphen_values = true, default_value = "0")]
    pub m_values: Vec<f64>,
    /// Regularization parameter of the extended columns.
    #[arg(long, default_value_t = 0.01)]
    pub p: f64,
    #[arg(long, value_enum, default_value_t = EngineArg::Series)]
    pub engine: EngineArg,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureArg {
    Fig1,
    Fig2,
    Fig3,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[arg(long, value_enum)]
    pub figure: FigureArg,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<Range>,
    #[arg(long, allow_hyphen_values = true)]
    pub y: Option<Range>,
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<Range>,
    #[arg(long, value_enum, default_value_t = EngineArg::Quadrature)]
    pub engine: EngineArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DivergenceArgs {
    #[arg(long, default_value_t = 5.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 7.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 3.0)]
    pub p: f64,
    #[arg(long, default_value_t = 8)]
    pub n_max: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Identities,
    Representations,
    Distribution,
    Convergence,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Identities => Suite::Identities,
            SuiteArg::Representations => Suite::Representations,
            SuiteArg::Distribution => Suite::Distribution,
            SuiteArg::Convergence => Suite::Convergence,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = SuiteArg::All)]
    pub suite: SuiteArg,
    /// Override the limit of every two-sided comparison.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Print every check, not only failures.
    #[arg(long)]
    pub verbose: bool,
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}

/// Parse `args` (program name first) and run. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match cli.command {
        Command::Eval(a) => cmd_eval(&a, out),
        Command::Table(a) => cmd_table(&a, out),
        Command::Plotdata(a) => cmd_plotdata(&a, out),
        Command::DivergenceDemo(a) => cmd_divergence_demo(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Eval(e)) => {
            let _ = writeln!(err, "{e}");
            EXIT_DOMAIN
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_DOMAIN
        }
    }
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Eval(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Eval(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type CmdResult = Result<i32, Failure>;

fn print_result(out: &mut dyn Write, r: &EvalResult<f64>) -> io::Result<()> {
    writeln!(out, "{}", fmt_fixed(r.value))?;
    writeln!(out, "abs_err_est {:.3e}", r.abs_err_est)?;
    writeln!(out, "method {}", r.method)?;
    writeln!(out, "evals {}", r.evals)
}

pub fn cmd_eval(a: &EvalArgs, out: &mut dyn Write) -> CmdResult {
    let cfg = QuadConfig::new(a.abs_tol, a.rel_tol, QuadConfig::default().max_evals, QuadConfig::default().level_cap)?;
    let s = ShapeParams::new(a.alpha, a.beta);
    let r = match a.function {
        FunctionName::Beta => {
            let v = beta_classical(s)?;
            EvalResult {
                value: v,
                abs_err_est: beta_rel_err(s) * v.abs(),
                evals: 0,
                method: Method::GammaRelation,
            }
        }
        FunctionName::ExtBeta => ext_beta_chaudhry(s, a.p, &cfg)?,
        FunctionName::GenExtBeta => {
            let params = ExtendedBetaParams::new(s, a.p, a.delta, a.zeta).with_exponents(a.kappa, a.mu);
            ext_beta_srivastava(&params, &cfg)?
        }
        FunctionName::Mecbf if a.m_im != 0.0 => {
            let m = Complex64::new(a.m, a.m_im);
            let mp = if a.compat { MecbfParam::compat(m) } else { MecbfParam::new(m) };
            let r = mecbf(s, &mp, a.engine.into(), &cfg)?;
            writeln!(out, "{} {}i", fmt_fixed(r.value.re), fmt_fixed(r.value.im))?;
            writeln!(out, "abs_err_est {:.3e}", r.abs_err_est)?;
            writeln!(out, "method {}", r.method)?;
            writeln!(out, "evals {}", r.evals)?;
            return Ok(EXIT_OK);
        }
        FunctionName::Mecbf => {
            let mp = if a.compat { MecbfParam::compat(a.m) } else { MecbfParam::new(a.m) };
            mecbf(s, &mp, a.engine.into(), &cfg)?
        }
        FunctionName::MecbfIncomplete => {
            let mp = if a.compat { MecbfParam::compat(a.m) } else { MecbfParam::new(a.m) };
            mecbf_incomplete(a.x, s, &mp, &cfg)?
        }
    };
    print_result(out, &r)?;
    Ok(EXIT_OK)
}

pub fn table_request(a: &TableArgs) -> Result<TableRequest, String> {
    let engine = a.engine.into();
    match a.preset {
        Some(Preset::Table1) => Ok(TableRequest::table1(engine)),
        Some(Preset::Table2) => Ok(TableRequest::table2(engine)),
        None => {
            let families: Vec<Family> = a
                .columns
                .iter()
                .map(|c| match c {
                    ColumnArg::Classical => Family::Classical,
                    ColumnArg::ExtendedP => Family::ExtendedP,
                    ColumnArg::Mecbf => Family::Mecbf,
                })
                .collect();
            TableRequest::generic(a.x, a.y, a.fixed_y, &families, a.p, &a.m_values, engine)
        }
    }
}

fn with_output<F>(path: &Option<PathBuf>, out: &mut dyn Write, f: F) -> Result<(), Failure>
where
    F: FnOnce(&mut dyn Write) -> Result<(), Box<dyn std::error::Error>>,
{
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?;
            let mut w = BufWriter::new(file);
            f(&mut w).map_err(|e| Failure::Io(e.to_string()))?;
            w.flush()?;
        }
        None => f(out).map_err(|e| Failure::Io(e.to_string()))?,
    }
    Ok(())
}

pub fn cmd_table(a: &TableArgs, out: &mut dyn Write) -> CmdResult {
    let req = table_request(a).map_err(Failure::Usage)?;
    with_output(&a.out, out, |w| table::write_csv(&req, w))?;
    Ok(EXIT_OK)
}

pub fn cmd_plotdata(a: &PlotArgs, out: &mut dyn Write) -> CmdResult {
    let figure = match a.figure {
        FigureArg::Fig1 => Figure::Fig1,
        FigureArg::Fig2 => Figure::Fig2,
        FigureArg::Fig3 => Figure::Fig3,
    };
    let mut req = PlotRequest::defaults(figure);
    req.engine = a.engine.into();
    if let Some(x) = a.x {
        req.x = x;
    }
    if let Some(y) = a.y {
        req.y = y;
    }
    if let Some(m) = a.m {
        req.m = m;
    }
    with_output(&a.out, out, |w| plot::write_csv(&req, w))?;
    Ok(EXIT_OK)
}

pub fn cmd_divergence_demo(a: &DivergenceArgs, out: &mut dyn Write) -> CmdResult {
    let s = ShapeParams::new(a.alpha, a.beta);
    writeln!(out, "B_p(alpha, beta) term by term: alpha={} beta={} p={}", fmt_g(a.alpha), fmt_g(a.beta), fmt_g(a.p))?;
    writeln!(out, "{:>4}  {:>20}  {:>20}", "n", "term", "partial_sum")?;
    let terms = naive_series_partial_sums(s, a.p, a.n_max);
    for t in &terms {
        let term = t.term.map(fmt_g).unwrap_or_else(|| "UNDEFINED".into());
        writeln!(out, "{:>4}  {:>20}  {:>20}", t.n, term, fmt_g(t.partial_sum))?;
    }
    match ext_beta_chaudhry(s, a.p, &QuadConfig::default()) {
        Ok(r) => writeln!(out, "quadrature: {} (abs_err_est {:.3e})", fmt_g(r.value), r.abs_err_est)?,
        Err(e) => writeln!(out, "quadrature: {e}")?,
    }
    let undefined: Vec<usize> = terms
        .iter()
        .filter(|t| t.status == TermStatus::TermUndefined)
        .map(|t| t.n)
        .collect();
    match (undefined.first(), undefined.last()) {
        (Some(first), Some(last)) if undefined.len() == last - first + 1 => {
            writeln!(out, "undefined terms: n = {first}..={last}")?
        }
        (Some(_), _) => writeln!(out, "undefined terms: n in {undefined:?}")?,
        _ => writeln!(out, "undefined terms: none")?,
    }
    Ok(EXIT_OK)
}

pub fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> CmdResult {
    if let Some(t) = a.tol {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Failure::Usage(format!("tol must be a finite non-negative number, got {t}")));
        }
    }
    let opts = VerifyOptions {
        tol: a.tol,
        fault: a.inject_fault,
    };
    let report = run_suite(a.suite.into(), &opts);
    for c in &report.checks {
        if a.verbose || !c.passed() {
            writeln!(out, "{c}")?;
        }
    }
    let failed = report.failures().count();
    let total = report.checks.len();
    if failed == 0 {
        writeln!(out, "PASS {}: {total} checks", Suite::from(a.suite))?;
        Ok(EXIT_OK)
    } else {
        writeln!(out, "FAIL {}: {failed} of {total} checks failed", Suite::from(a.suite))?;
        for c in report.failures() {
            writeln!(out, "  ({}, {}, {}, {})", fmt_g(c.alpha), fmt_g(c.beta), fmt_g(c.m), c.name)?;
        }
        Ok(EXIT_VERIFY)
    }
}
