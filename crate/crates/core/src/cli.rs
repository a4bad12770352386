//! Command-line front end. The `gch` binary only parses arguments and exits
//! with the code returned by [`run`].
//!
//! Every flag can also come from a JSON file given with `--config`; keys are
//! the flag names with `_` for `-` (`omega_cap`, `x_start`, ...). A flag on the
//! command line wins over the file.
//!
//! Exit codes: 0 ok, 1 tolerance failure, 2 configuration or validation
//! error, 3 non-convergence.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::asymptotics::{asym_small_eps, asym_small_mu, asym_small_mu_resummed};
use crate::error::GchError;
use crate::params::{validate, GchParams, SolutionKind};
use crate::recurrence::{EvalResult, Truncation};
use crate::series::{
    betas_from_omega, eval_qw_infinite, eval_qw_poly, eval_rw_infinite, eval_rw_poly,
    nested_coefficients, NestedTruncation,
};
use crate::spectra::{normalize_fn, radial_factor, spectrum, wavefunction, QuantumSystem};
use crate::verify::{cross_validate, ode_residual, ParamGrid};

pub const EXIT_OK: i32 = 0;
pub const EXIT_TOLERANCE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NO_CONVERGENCE: i32 = 3;

pub const EVAL_HEADER: &str = "x,value,terms_used,est_error,converged";
pub const SPECTRUM_HEADER: &str = "i,beta,eigenvalue";
pub const WAVEFUNCTION_HEADER: &str = "r,psi,converged";
pub const ASYMPTOTE_HEADER: &str = "x,value";
pub const VERIFY_HEADER: &str =
    "kind,mu,epsilon,nu,omega_cap,omega,x,nested,oracle,rel_err,residual,converged,error";

#[derive(Debug, Parser)]
#[command(name = "gch", version, about = "Grand confluent hypergeometric series toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a first- or second-kind series on an x grid.
    Eval(Options),
    /// List eigenvalues of a mapped quantum system.
    Spectrum(Options),
    /// Sample the radial wavefunction of one bound state on an r grid.
    Wavefunction(Options),
    /// Cross-validate nested sums against the recurrence and check ODE residuals.
    Verify(Options),
    /// Evaluate a large-index limiting form on an x grid.
    Asymptote(Options),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindArg {
    First,
    Second,
}

impl From<KindArg> for SolutionKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::First => SolutionKind::FirstKind,
            KindArg::Second => SolutionKind::SecondKind,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassArg {
    Infinite,
    Polynomial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemArg {
    Oscillator,
    Confinement,
    Qqbar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegimeArg {
    SmallMu,
    SmallMuResummed,
    SmallEps,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormatArg {
    Csv,
    Json,
}

/// All settings, shared by every subcommand.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Options {
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<f64>,
    /// Capital Omega.
    #[arg(long, allow_hyphen_values = true)]
    pub omega_cap: Option<f64>,
    /// Lower-case omega.
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<f64>,
    #[arg(long, value_enum)]
    pub kind: Option<KindArg>,
    /// Series class for `eval` (default infinite).
    #[arg(long, value_enum)]
    pub class: Option<ClassArg>,

    #[arg(long, allow_hyphen_values = true)]
    pub x_start: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub x_stop: Option<f64>,
    #[arg(long)]
    pub x_count: Option<usize>,

    #[arg(long)]
    pub max_order: Option<usize>,
    #[arg(long)]
    pub max_inner: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub rel_tol: Option<f64>,

    #[arg(long, value_enum)]
    pub system: Option<SystemArg>,
    /// Angular momentum quantum number.
    #[arg(long)]
    pub l: Option<u32>,
    /// Oscillator coupling.
    #[arg(long, allow_hyphen_values = true)]
    pub omega_c: Option<f64>,
    /// Confinement Coulomb coupling.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    /// Confinement linear coupling.
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    /// Confinement quadratic coupling.
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub mass: Option<f64>,
    /// Quark mass.
    #[arg(long, allow_hyphen_values = true)]
    pub m_q: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub b_slope: Option<f64>,
    #[arg(long)]
    pub i_max: Option<u32>,
    #[arg(long)]
    pub beta_max: Option<u32>,
    /// Termination order of the state for `wavefunction`.
    #[arg(long)]
    pub i: Option<u32>,
    #[arg(long)]
    pub beta: Option<u32>,
    /// Scale `wavefunction` output by the normalization constant.
    #[arg(long)]
    pub normalize: Option<bool>,

    #[arg(long, value_enum)]
    pub regime: Option<RegimeArg>,

    /// Cross-validation tolerance for `verify` (default 1e-9).
    #[arg(long, allow_hyphen_values = true)]
    pub tol: Option<f64>,
    /// Relative ODE residual tolerance for `verify` (default 1e-8).
    #[arg(long, allow_hyphen_values = true)]
    pub residual_tol: Option<f64>,
    /// Parameter grid for `verify`; only settable from the config file.
    #[arg(skip)]
    pub grid: Option<ParamGrid>,

    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

/// Failure carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<GchError> for Failure {
    fn from(e: GchError) -> Self {
        Failure {
            code: EXIT_CONFIG,
            message: e.to_string(),
        }
    }
}

fn config_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_CONFIG,
        message: message.into(),
    }
}

macro_rules! merge_fields {
    ($flags:ident, $file:ident; $($f:ident),* $(,)?) => {
        Options {
            $($f: $flags.$f.or($file.$f),)*
            config: None,
        }
    };
}

impl Options {
    /// Fills unset flags from the `--config` file.
    fn merged(self) -> Result<Options, Failure> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let text = std::fs::read_to_string(&path)
            .map_err(|e| config_error(format!("cannot read config {}: {e}", path.display())))?;
        let file: Options = serde_json::from_str(&text)
            .map_err(|e| config_error(format!("invalid config {}: {e}", path.display())))?;
        let flags = self;
        Ok(merge_fields!(flags, file;
            mu, epsilon, nu, omega_cap, omega, kind, class, x_start, x_stop, x_count,
            max_order, max_inner, rel_tol, system, l, omega_c, a, b, c, mass, m_q, b_slope,
            i_max, beta_max, i, beta, normalize, regime, tol, residual_tol, grid, format, output,
        ))
    }

    fn need<T: Copy>(v: Option<T>, flag: &str) -> Result<T, Failure> {
        v.ok_or_else(|| config_error(format!("missing --{flag}")))
    }

    fn params(&self) -> Result<GchParams, Failure> {
        Ok(GchParams::new(
            Self::need(self.mu, "mu")?,
            Self::need(self.epsilon, "epsilon")?,
            Self::need(self.nu, "nu")?,
            Self::need(self.omega_cap, "omega-cap")?,
            Self::need(self.omega, "omega")?,
        )?)
    }

    fn nested(&self) -> Result<NestedTruncation, Failure> {
        let d = NestedTruncation::default();
        Ok(NestedTruncation::new(
            self.max_order.unwrap_or(d.max_order_n),
            self.max_inner.unwrap_or(d.max_inner),
            self.rel_tol.unwrap_or(d.rel_tol),
        )?)
    }

    fn grid(&self, default: (f64, f64, usize)) -> Result<Vec<f64>, Failure> {
        let start = self.x_start.unwrap_or(default.0);
        let stop = self.x_stop.unwrap_or(default.1);
        let count = self.x_count.unwrap_or(default.2);
        linspace(start, stop, count)
    }

    fn system(&self) -> Result<QuantumSystem, Failure> {
        let l = self.l.unwrap_or(0);
        let system = match Self::need(self.system, "system")? {
            SystemArg::Oscillator => QuantumSystem::RotatingOscillator {
                l,
                omega_c: Self::need(self.omega_c, "omega-c")?,
            },
            SystemArg::Confinement => QuantumSystem::Confinement {
                a: Self::need(self.a, "a")?,
                b: Self::need(self.b, "b")?,
                c: Self::need(self.c, "c")?,
                mass: Self::need(self.mass, "mass")?,
                l,
            },
            SystemArg::Qqbar => QuantumSystem::QQbar {
                m_q: self.m_q.unwrap_or(0.0),
                b_slope: Self::need(self.b_slope, "b-slope")?,
                l,
            },
        };
        system.map()?;
        Ok(system)
    }

    fn format(&self) -> FormatArg {
        self.format.unwrap_or(FormatArg::Csv)
    }
}

/// `count` evenly spaced points from `start` to `stop`.
fn linspace(start: f64, stop: f64, count: usize) -> Result<Vec<f64>, Failure> {
    if count == 0 {
        return Err(config_error("grid is empty: --x-count must be >= 1"));
    }
    if !(start.is_finite() && stop.is_finite()) || start > stop {
        return Err(config_error(format!(
            "grid needs finite start <= stop (got {start}, {stop})"
        )));
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let h = (stop - start) / (count - 1) as f64;
    Ok((0..count)
        .map(|k| if k == count - 1 { stop } else { start + k as f64 * h })
        .collect())
}

fn fmt_f(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt_f(v: Option<f64>) -> String {
    v.map(fmt_f).unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRow {
    pub x: f64,
    pub value: f64,
    pub terms_used: usize,
    pub est_error: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub i: u32,
    pub beta: u32,
    pub eigenvalue: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveRow {
    pub r: f64,
    pub psi: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymRow {
    pub x: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyRow {
    pub kind: SolutionKind,
    pub mu: f64,
    pub epsilon: f64,
    pub nu: f64,
    pub omega_cap: f64,
    pub omega: f64,
    pub x: f64,
    pub nested: Option<f64>,
    pub oracle: Option<f64>,
    pub rel_err: Option<f64>,
    pub residual: Option<f64>,
    pub converged: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifySummary {
    pub points: usize,
    pub evaluated: usize,
    pub rejected: usize,
    pub max_rel_err: f64,
    pub worst_index: Option<usize>,
    pub max_residual: f64,
    pub tol: f64,
    pub residual_tol: f64,
    pub pass: bool,
}

/// JSON document written by every subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report<R> {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summary: Option<VerifySummary>,
    pub rows: Vec<R>,
}

trait CsvRow {
    fn csv(&self) -> String;
}

impl CsvRow for EvalRow {
    fn csv(&self) -> String {
        format!(
            "{},{},{},{},{}",
            fmt_f(self.x),
            fmt_f(self.value),
            self.terms_used,
            fmt_f(self.est_error),
            self.converged
        )
    }
}

impl CsvRow for SpectrumRow {
    fn csv(&self) -> String {
        format!("{},{},{}", self.i, self.beta, fmt_f(self.eigenvalue))
    }
}

impl CsvRow for WaveRow {
    fn csv(&self) -> String {
        format!("{},{},{}", fmt_f(self.r), fmt_f(self.psi), self.converged)
    }
}

impl CsvRow for AsymRow {
    fn csv(&self) -> String {
        format!("{},{}", fmt_f(self.x), fmt_f(self.value))
    }
}

impl CsvRow for VerifyRow {
    fn csv(&self) -> String {
        let kind = match self.kind {
            SolutionKind::FirstKind => "first",
            SolutionKind::SecondKind => "second",
        };
        let error = self
            .error
            .as_deref()
            .map(|e| format!("\"{}\"", e.replace('"', "\"\"")))
            .unwrap_or_default();
        format!(
            "{kind},{},{},{},{},{},{},{},{},{},{},{},{error}",
            fmt_f(self.mu),
            fmt_f(self.epsilon),
            fmt_f(self.nu),
            fmt_f(self.omega_cap),
            fmt_f(self.omega),
            fmt_f(self.x),
            opt_f(self.nested),
            opt_f(self.oracle),
            opt_f(self.rel_err),
            opt_f(self.residual),
            self.converged,
        )
    }
}

fn render<R: CsvRow + Serialize>(
    format: FormatArg,
    command: &str,
    header: &str,
    rows: Vec<R>,
    summary: Option<VerifySummary>,
) -> Result<String, Failure> {
    match format {
        FormatArg::Csv => {
            let mut s = String::with_capacity(64 * (rows.len() + 1));
            s.push_str(header);
            s.push('\n');
            for r in &rows {
                s.push_str(&r.csv());
                s.push('\n');
            }
            Ok(s)
        }
        FormatArg::Json => {
            let doc = Report {
                command: command.to_string(),
                summary,
                rows,
            };
            let mut s = serde_json::to_string_pretty(&doc)
                .map_err(|e| config_error(format!("cannot encode JSON: {e}")))?;
            s.push('\n');
            Ok(s)
        }
    }
}

struct Outcome {
    body: String,
    note: String,
    code: i32,
}

fn cmd_eval(o: &Options) -> Result<Outcome, Failure> {
    let p = o.params()?;
    let kind: SolutionKind = o.kind.unwrap_or(KindArg::First).into();
    validate(&p, kind)?;
    let nt = o.nested()?;
    let xs = o.grid((0.0, 1.0, 11))?;
    let class = o.class.unwrap_or(ClassArg::Infinite);
    let betas = match class {
        ClassArg::Polynomial => Some(betas_from_omega(&p, kind.lambda_of(p.nu), nt.max_order_n + 1)?),
        ClassArg::Infinite => None,
    };
    let mut rows = Vec::with_capacity(xs.len());
    for &x in &xs {
        let r: EvalResult = match (kind, &betas) {
            (SolutionKind::FirstKind, None) => eval_qw_infinite(&p, x, &nt)?,
            (SolutionKind::SecondKind, None) => eval_rw_infinite(&p, x, &nt)?,
            (SolutionKind::FirstKind, Some(b)) => eval_qw_poly(&p, b, x, &nt)?,
            (SolutionKind::SecondKind, Some(b)) => eval_rw_poly(&p, b, x, &nt)?,
        };
        rows.push(EvalRow {
            x,
            value: r.value,
            terms_used: r.terms_used,
            est_error: r.last_term_mag,
            converged: r.converged,
        });
    }
    let unconverged = rows.iter().filter(|r| !r.converged).count();
    let code = if unconverged > 0 { EXIT_NO_CONVERGENCE } else { EXIT_OK };
    let note = if unconverged > 0 {
        format!("{unconverged} of {} points did not converge\n", rows.len())
    } else {
        String::new()
    };
    Ok(Outcome {
        body: render(o.format(), "eval", EVAL_HEADER, rows, None)?,
        note,
        code,
    })
}

fn cmd_spectrum(o: &Options) -> Result<Outcome, Failure> {
    let system = o.system()?;
    let states = spectrum(&system, o.i_max.unwrap_or(0), o.beta_max.unwrap_or(3))?;
    let rows = states
        .iter()
        .map(|s| SpectrumRow {
            i: s.i,
            beta: s.beta_i,
            eigenvalue: s.eigenvalue,
        })
        .collect();
    Ok(Outcome {
        body: render(o.format(), "spectrum", SPECTRUM_HEADER, rows, None)?,
        note: String::new(),
        code: EXIT_OK,
    })
}

fn cmd_wavefunction(o: &Options) -> Result<Outcome, Failure> {
    let system = o.system()?;
    let state = system.eigenstate(o.i.unwrap_or(0), o.beta.unwrap_or(0))?;
    let nt = o.nested()?;
    let rs = o.grid((0.05, 10.0, 200))?;
    if rs[0] <= 0.0 {
        return Err(config_error("wavefunction needs r > 0: set --x-start above 0"));
    }
    let scale = system.x_scale()?;
    let mut rows = Vec::with_capacity(rs.len());
    for &r in &rs {
        let psi = wavefunction(&system, &state, r, &nt)?;
        let converged = radial_factor(&state, scale * r, &nt)?.converged;
        rows.push(WaveRow { r, psi, converged });
    }
    let mut note = String::new();
    let mut code = EXIT_OK;
    if o.normalize.unwrap_or(false) {
        let r_max = *rs.last().expect("grid is non-empty");
        match normalize_fn(|r| wavefunction(&system, &state, r, &nt), r_max, 4000) {
            Ok(n) => {
                for row in &mut rows {
                    row.psi *= n;
                }
                let _ = writeln!(note, "normalization constant N = {}", fmt_f(n));
            }
            Err(e @ GchError::TailNotDecayed { .. }) => {
                let _ = writeln!(note, "not normalized: {e}");
                code = EXIT_TOLERANCE;
            }
            Err(e) => return Err(e.into()),
        }
    }
    let unconverged = rows.iter().filter(|r| !r.converged).count();
    if unconverged > 0 {
        let _ = writeln!(note, "{unconverged} of {} points did not converge", rows.len());
        code = EXIT_NO_CONVERGENCE;
    }
    Ok(Outcome {
        body: render(o.format(), "wavefunction", WAVEFUNCTION_HEADER, rows, None)?,
        note,
        code,
    })
}

fn cmd_asymptote(o: &Options) -> Result<Outcome, Failure> {
    let regime = Options::need(o.regime, "regime")?;
    let xs = o.grid((0.0, 1.0, 11))?;
    let rows = match regime {
        RegimeArg::SmallMu | RegimeArg::SmallMuResummed => {
            let eps = Options::need(o.epsilon, "epsilon")?;
            if !eps.is_finite() {
                return Err(config_error("epsilon must be finite"));
            }
            let f = if regime == RegimeArg::SmallMu {
                asym_small_mu
            } else {
                asym_small_mu_resummed
            };
            xs.iter().map(|&x| AsymRow { x, value: f(eps, x) }).collect()
        }
        RegimeArg::SmallEps => {
            let mu = Options::need(o.mu, "mu")?;
            if !mu.is_finite() {
                return Err(config_error("mu must be finite"));
            }
            xs.iter()
                .map(|&x| AsymRow {
                    x,
                    value: asym_small_eps(mu, x),
                })
                .collect()
        }
    };
    Ok(Outcome {
        body: render(o.format(), "asymptote", ASYMPTOTE_HEADER, rows, None)?,
        note: String::new(),
        code: EXIT_OK,
    })
}

fn cmd_verify(o: &Options) -> Result<Outcome, Failure> {
    let mut grid = o.grid.clone().unwrap_or_default();
    if o.x_start.is_some() || o.x_stop.is_some() || o.x_count.is_some() {
        grid.x = o.grid((0.1, 1.0, 3))?;
    }
    if grid.is_empty() {
        return Err(config_error("verification grid is empty"));
    }
    let tol = o.tol.unwrap_or(1e-9);
    let residual_tol = o.residual_tol.unwrap_or(1e-8);
    if !(tol > 0.0 && residual_tol > 0.0) {
        return Err(config_error("--tol and --residual-tol must be positive"));
    }
    let nt = o.nested()?;
    let t = Truncation::default();
    let report = cross_validate(&grid, &t, &nt);

    let mut rows = Vec::with_capacity(report.records.len());
    let mut max_residual = 0.0f64;
    for rec in &report.records {
        let p = &rec.params;
        let mut row = VerifyRow {
            kind: rec.kind,
            mu: p.mu,
            epsilon: p.epsilon,
            nu: p.nu,
            omega_cap: p.omega_cap,
            omega: p.omega,
            x: rec.x,
            nested: None,
            oracle: None,
            rel_err: None,
            residual: None,
            converged: false,
            error: None,
        };
        match &rec.outcome {
            Ok(v) => {
                row.nested = Some(v.nested);
                row.oracle = Some(v.oracle);
                row.rel_err = Some(v.rel_err);
                row.converged = v.nested_converged && v.oracle_converged;
                let lambda = rec.kind.lambda_of(p.nu);
                match nested_coefficients(p, lambda, 1.0, None, t.max_terms) {
                    Ok(c) => {
                        let res = ode_residual(&c, lambda, p, rec.x).relative();
                        max_residual = max_residual.max(if res.is_nan() { f64::INFINITY } else { res });
                        row.residual = Some(res);
                    }
                    Err(e) => row.error = Some(e.to_string()),
                }
            }
            Err(e) => row.error = Some(e.to_string()),
        }
        rows.push(row);
    }

    let rejected = rows.iter().filter(|r| r.error.is_some()).count();
    let unconverged = rows.iter().filter(|r| r.error.is_none() && !r.converged).count();
    let pass = rejected == 0 && report.max_rel_err <= tol && max_residual <= residual_tol;
    let summary = VerifySummary {
        points: rows.len(),
        evaluated: report.evaluated(),
        rejected,
        max_rel_err: report.max_rel_err,
        worst_index: report.worst,
        max_residual,
        tol,
        residual_tol,
        pass: pass && unconverged == 0,
    };
    let mut note = String::new();
    let _ = writeln!(
        note,
        "points {}  evaluated {}  rejected {}  unconverged {unconverged}",
        summary.points, summary.evaluated, rejected
    );
    let _ = writeln!(note, "max relative error {:.3e} (tol {:.1e})", report.max_rel_err, tol);
    let _ = writeln!(note, "max relative ODE residual {:.3e} (tol {:.1e})", max_residual, residual_tol);
    let code = if rejected > 0 {
        EXIT_CONFIG
    } else if unconverged > 0 {
        EXIT_NO_CONVERGENCE
    } else if !pass {
        EXIT_TOLERANCE
    } else {
        EXIT_OK
    };
    Ok(Outcome {
        body: render(o.format(), "verify", VERIFY_HEADER, rows, Some(summary))?,
        note,
        code,
    })
}

/// Runs a parsed command, writing data to `out` (or `--output`) and
/// diagnostics to `err`. Returns the exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let (name, opts) = match cli.command {
        Command::Eval(o) => ("eval", o),
        Command::Spectrum(o) => ("spectrum", o),
        Command::Wavefunction(o) => ("wavefunction", o),
        Command::Verify(o) => ("verify", o),
        Command::Asymptote(o) => ("asymptote", o),
    };
    let result = opts.merged().and_then(|o| {
        let outcome = match name {
            "eval" => cmd_eval(&o),
            "spectrum" => cmd_spectrum(&o),
            "wavefunction" => cmd_wavefunction(&o),
            "verify" => cmd_verify(&o),
            _ => cmd_asymptote(&o),
        }?;
        Ok((o.output, outcome))
    });
    match result {
        Ok((path, outcome)) => {
            let written = match path {
                Some(p) => std::fs::write(&p, outcome.body.as_bytes())
                    .map_err(|e| format!("cannot write {}: {e}", p.display())),
                None => out
                    .write_all(outcome.body.as_bytes())
                    .map_err(|e| format!("cannot write output: {e}")),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "gch {name}: {e}");
                return EXIT_CONFIG;
            }
            let _ = err.write_all(outcome.note.as_bytes());
            outcome.code
        }
        Err(f) => {
            let _ = writeln!(err, "gch {name}: {}", f.message);
            f.code
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_from<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, out, err),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(rendered.as_bytes());
            } else {
                let _ = out.write_all(rendered.as_bytes());
            }
            code
        }
    }
}
