//! The `weber` command-line front end.
//!
//! Flags override config-file entries, which override built-in defaults. Config
//! keys are the long flag names (`nu`, `tol-abs`, `x`, ...); lists are
//! comma-separated.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical non-convergence,
//! 4 invariant failure (`verify`), 5 I/O failure.

pub mod config;
pub mod report;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::closedform::{f_nu_closed, f_nu_quadrature};
use crate::kernels::{weber_kernel, KernelParams};
use crate::mellin::ContourSpec;
use crate::quadrature::QuadratureConfig;
use crate::solver::{
    forward_direct, log_grid, round_trip, solve_grid, working_contour, ContourTransform, TestFunctionFamily,
};
use crate::verify::run_invariants;
use crate::{Complex, Error, EvaluationReport};

use config::{ComplexArg, ConfigFile, FamilyArg, Fixture, LogGridArg};
use report::{Input, Row, Table};

/// Failure of a CLI run, carrying its exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(Error),
    #[error("{failed} rows did not converge")]
    Unconverged { failed: usize },
    #[error("invariant failure: {0}")]
    Invariant(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            Self::Numerical(_) | Self::Unconverged { .. } => 3,
            Self::Invariant(_) => 4,
            Self::Io(_) => 5,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NonPositiveArgument(_)
            | Error::OrderOutOfRange(_)
            | Error::GammaPole { .. }
            | Error::HypergeometricPole { .. }
            | Error::HypergeometricArgument(_)
            | Error::StripViolation { .. }
            | Error::BelowInnerRadius { .. }
            | Error::OrderOutsideRange { .. }
            | Error::DegeneratePhase(_)
            | Error::NonMember { .. }
            | Error::InvalidConfig(_) => Self::Config(e.to_string()),
            Error::NotConverged { .. }
            | Error::NonFinite(_)
            | Error::Divergent(_)
            | Error::TailBound { .. }
            | Error::DenominatorUnderflow(_)
            | Error::StepUnderflow(_) => Self::Numerical(e),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <Self as ValueEnum>::from_str(s, true)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Contour,
    Direct,
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <Self as ValueEnum>::from_str(s, true)
    }
}

/// Weber-type integral equation toolkit.
#[derive(Debug, Parser)]
#[command(name = "weber", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandArgs,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// Kernel K(x, λ) on the product of the x and λ grids.
    #[command(allow_negative_numbers = true)]
    EvalKernel {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_delimiter = ',')]
        x: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        lambda: Vec<f64>,
    },
    /// Closed-form F_ν(x, s), or its quadrature oracle.
    #[command(name = "eval-F", allow_negative_numbers = true)]
    EvalF {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_delimiter = ',')]
        x: Vec<f64>,
        /// Contour points `re+imi`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        s: Vec<ComplexArg>,
        #[arg(long)]
        oracle: bool,
    },
    /// Forward transform of a test family.
    #[command(allow_negative_numbers = true)]
    Forward {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_delimiter = ',')]
        x: Vec<f64>,
        #[arg(long, value_enum)]
        method: Option<Method>,
    },
    /// Explicit inverse for a fixture right-hand side.
    #[command(allow_negative_numbers = true)]
    Solve {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        lambdas: LambdaArgs,
        /// `zero`, `family` or `power:<k>` (f(t) = t^-k).
        #[arg(long)]
        fixture: Option<Fixture>,
    },
    /// Forward through the contour form, back through the inverse.
    #[command(allow_negative_numbers = true)]
    Roundtrip {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        lambdas: LambdaArgs,
    },
    /// Invariant suite; exits 4 on any failure.
    #[command(allow_negative_numbers = true)]
    Verify {
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Flat `key = value` config file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub tol_abs: Option<f64>,
    #[arg(long)]
    pub tol_rel: Option<f64>,
    #[arg(long)]
    pub max_half_periods: Option<usize>,
    #[arg(long)]
    pub contour_mu: Option<f64>,
    #[arg(long)]
    pub contour_tmax: Option<f64>,
    #[arg(long)]
    pub panels: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Test family `p=<int>,q=<real>`.
    #[arg(long)]
    pub family: Option<FamilyArg>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct LambdaArgs {
    #[arg(long, value_delimiter = ',')]
    pub lambda: Vec<f64>,
    /// Log-spaced grid `lo:hi:n`.
    #[arg(long, conflicts_with = "lambda")]
    pub lambda_grid: Option<LogGridArg>,
}

/// A validated run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub params: KernelParams,
    pub quadrature: QuadratureConfig,
    pub contour: ContourSpec,
    pub output_format: Format,
    pub output_path: Option<PathBuf>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "name")]
pub enum Command {
    EvalKernel { x: Vec<f64>, lambda: Vec<f64> },
    EvalF { x: Vec<f64>, s: Vec<Complex>, oracle: bool },
    Forward { x: Vec<f64>, method: Method, family: TestFunctionFamily },
    Solve { lambda: Vec<f64>, fixture: Fixture, family: TestFunctionFamily },
    Roundtrip { lambda: Vec<f64>, family: TestFunctionFamily },
    Verify,
}

const DEFAULT_NU: f64 = -0.75;
const DEFAULT_A: f64 = 1.0;
const DEFAULT_SEED: u64 = 0;
const DEFAULT_ROUNDTRIP_GRID: (f64, f64, usize) = (0.1, 10.0, 20);

fn check_grid(name: &str, grid: &[f64]) -> Result<(), CliError> {
    if grid.is_empty() {
        return Err(CliError::Config(format!("--{name} needs at least one value")));
    }
    if grid.iter().any(|v| !v.is_finite()) || grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(CliError::Config(format!("--{name} must be finite and strictly increasing")));
    }
    Ok(())
}

fn lambda_grid(args: LambdaArgs, file: &ConfigFile, default: Option<Vec<f64>>) -> Result<Vec<f64>, CliError> {
    let listed = file.pick_list(args.lambda, "lambda")?;
    let grid = if !listed.is_empty() {
        listed
    } else if let Some(g) = file.pick(args.lambda_grid, "lambda-grid")? {
        g.points()
    } else {
        default.unwrap_or_default()
    };
    check_grid("lambda", &grid)?;
    Ok(grid)
}

impl RunConfig {
    /// Resolves flags, config file and defaults into a validated run.
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let common = match &cli.command {
            CommandArgs::EvalKernel { common, .. }
            | CommandArgs::EvalF { common, .. }
            | CommandArgs::Forward { common, .. }
            | CommandArgs::Solve { common, .. }
            | CommandArgs::Roundtrip { common, .. }
            | CommandArgs::Verify { common } => common.clone(),
        };
        let file = match &common.config {
            Some(path) => ConfigFile::load(path).map_err(|e| CliError::Config(e.to_string()))?,
            None => ConfigFile::default(),
        };
        let nu = file.pick(common.nu, "nu")?.unwrap_or(DEFAULT_NU);
        let a = file.pick(common.a, "a")?.unwrap_or(DEFAULT_A);
        let params = KernelParams::new(nu, a)?;

        let defaults = QuadratureConfig::default();
        let quadrature = QuadratureConfig {
            max_half_periods: file
                .pick(common.max_half_periods, "max-half-periods")?
                .unwrap_or(defaults.max_half_periods),
            ..defaults.with_tolerances(
                file.pick(common.tol_abs, "tol-abs")?.unwrap_or(defaults.abs_tol),
                file.pick(common.tol_rel, "tol-rel")?.unwrap_or(defaults.rel_tol),
            )
        };
        quadrature.validate()?;

        let base = working_contour(nu);
        let contour = ContourSpec {
            mu: file.pick(common.contour_mu, "contour-mu")?.unwrap_or(base.mu),
            t_max: file.pick(common.contour_tmax, "contour-tmax")?.unwrap_or(base.t_max),
            n_panels: file.pick(common.panels, "panels")?.unwrap_or(base.n_panels),
        };
        contour.validate()?;

        let family = match file.pick(common.family, "family")? {
            Some(f) => f.0,
            None => TestFunctionFamily::new(2, 1.0)?,
        };

        let command = match cli.command {
            CommandArgs::EvalKernel { x, lambda, .. } => {
                let (x, lambda) = (file.pick_list(x, "x")?, file.pick_list(lambda, "lambda")?);
                check_grid("x", &x)?;
                check_grid("lambda", &lambda)?;
                Command::EvalKernel { x, lambda }
            }
            CommandArgs::EvalF { x, s, oracle, .. } => {
                let x = file.pick_list(x, "x")?;
                check_grid("x", &x)?;
                let s: Vec<Complex> = file.pick_list(s, "s")?.into_iter().map(|z| z.0).collect();
                if s.is_empty() {
                    return Err(CliError::Config("--s needs at least one value".into()));
                }
                let oracle = oracle || file.pick(None::<bool>, "oracle")?.unwrap_or(false);
                Command::EvalF { x, s, oracle }
            }
            CommandArgs::Forward { x, method, .. } => {
                let x = file.pick_list(x, "x")?;
                check_grid("x", &x)?;
                let method = file.pick(method, "method")?.unwrap_or(Method::Contour);
                Command::Forward { x, method, family }
            }
            CommandArgs::Solve { lambdas, fixture, .. } => Command::Solve {
                lambda: lambda_grid(lambdas, &file, None)?,
                fixture: file.pick(fixture, "fixture")?.unwrap_or(Fixture::Zero),
                family,
            },
            CommandArgs::Roundtrip { lambdas, .. } => {
                let (lo, hi, n) = DEFAULT_ROUNDTRIP_GRID;
                Command::Roundtrip {
                    lambda: lambda_grid(lambdas, &file, Some(log_grid(lo, hi, n)))?,
                    family,
                }
            }
            CommandArgs::Verify { .. } => Command::Verify,
        };
        Ok(Self {
            command,
            params,
            quadrature,
            contour,
            output_format: file.pick(common.format, "format")?.unwrap_or(Format::Csv),
            output_path: file.pick(common.output, "output")?,
            seed: file.pick(common.seed, "seed")?.unwrap_or(DEFAULT_SEED),
        })
    }
}

fn num_row(inputs: &[f64], report: &EvaluationReport) -> Row {
    Row {
        inputs: inputs.iter().copied().map(Input::Num).collect(),
        value: report.value,
        abs_err: report.abs_error_estimate,
        converged: report.converged,
    }
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

fn family_transform(cfg: &RunConfig, family: TestFunctionFamily) -> Result<ContourTransform, CliError> {
    Ok(ContourTransform::new(&family.representation(cfg.contour)?, cfg.params)?)
}

/// Executes the configured pipeline.
pub fn run(cfg: &RunConfig) -> Result<Table, CliError> {
    let p = cfg.params;
    let q = &cfg.quadrature;
    match &cfg.command {
        Command::EvalKernel { x, lambda } => {
            let pairs: Vec<(f64, f64)> = x.iter().flat_map(|&x| lambda.iter().map(move |&l| (x, l))).collect();
            let rows = pairs
                .par_iter()
                .map(|&(x, l)| Ok(num_row(&[x, l], &EvaluationReport::exact(Complex::new(weber_kernel(p, x, l)?, 0.0)))))
                .collect::<Result<_, Error>>()?;
            Ok(Table {
                input_names: names(&["x", "lambda"]),
                rows,
            })
        }
        Command::EvalF { x, s, oracle } => {
            let pairs: Vec<(f64, Complex)> = x.iter().flat_map(|&x| s.iter().map(move |&s| (x, s))).collect();
            let rows = pairs
                .par_iter()
                .map(|&(x, s)| {
                    let report = if *oracle {
                        f_nu_quadrature(p, x, s, q)?
                    } else {
                        // Rounding of the largest term bounds the closed form's error.
                        let b = f_nu_closed(p, x, s)?;
                        EvaluationReport::new(b.total, 8.0 * f64::EPSILON * b.largest_term(), true)
                    };
                    Ok(num_row(&[x, s.re, s.im], &report))
                })
                .collect::<Result<_, Error>>()?;
            Ok(Table {
                input_names: names(&["x", "s_re", "s_im"]),
                rows,
            })
        }
        Command::Forward { x, method, family } => {
            let rows = match method {
                Method::Contour => {
                    let tr = family_transform(cfg, *family)?;
                    x.par_iter().map(|&x| Ok(num_row(&[x], &tr.eval(x)?))).collect::<Result<_, Error>>()?
                }
                Method::Direct => x
                    .par_iter()
                    .map(|&x| {
                        let phi = |l: f64| Ok(Complex::new(family.phi(l), 0.0));
                        Ok(num_row(&[x], &forward_direct(phi, p, x, q)?))
                    })
                    .collect::<Result<_, Error>>()?,
            };
            Ok(Table {
                input_names: names(&["x"]),
                rows,
            })
        }
        Command::Solve { lambda, fixture, family } => {
            let solved = match fixture {
                Fixture::Zero => solve_grid(|_| Ok(Complex::new(0.0, 0.0)), p, lambda, q)?,
                Fixture::Power(k) => solve_grid(|t: f64| Ok(Complex::new(t.powf(-k), 0.0)), p, lambda, q)?,
                Fixture::Family => {
                    let tr = family_transform(cfg, *family)?;
                    solve_grid(|t| tr.eval(t).map(|r| r.value), p, lambda, q)?
                }
            };
            let rows = solved
                .phi_values
                .iter()
                .map(|&(l, v, err)| num_row(&[l], &EvaluationReport::new(v, err, true)))
                .collect();
            Ok(Table {
                input_names: names(&["lambda"]),
                rows,
            })
        }
        Command::Roundtrip { lambda, family } => {
            let rows = round_trip(*family, p, cfg.contour, lambda, q)?
                .into_iter()
                .map(|r| Row {
                    inputs: vec![Input::Num(r.lambda), Input::Num(r.exact), Input::Num(r.rel_error)],
                    value: r.recovered,
                    abs_err: r.abs_error_estimate,
                    converged: true,
                })
                .collect();
            Ok(Table {
                input_names: names(&["lambda", "exact", "rel_error"]),
                rows,
            })
        }
        Command::Verify => {
            p.require_solver_range()?;
            let rows = run_invariants(p, cfg.seed, q)
                .into_iter()
                .map(|o| Row {
                    inputs: vec![Input::Text(o.name), Input::Num(o.tolerance)],
                    value: Complex::new(o.measured, 0.0),
                    abs_err: 0.0,
                    converged: o.passed,
                })
                .collect();
            Ok(Table {
                input_names: names(&["check", "tolerance"]),
                rows,
            })
        }
    }
}

/// Writes the report to the configured path, or stdout.
pub fn emit_report(table: &Table, cfg: &RunConfig) -> Result<(), CliError> {
    let write = |out: &mut dyn Write| match cfg.output_format {
        Format::Csv => report::write_csv(table, out),
        Format::Json => report::write_json(table, cfg, out),
    };
    match &cfg.output_path {
        Some(path) => {
            let file = File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            let mut out = BufWriter::new(file);
            write(&mut out)?;
            out.flush().map_err(|e| CliError::Io(e.to_string()))
        }
        None => {
            let stdout = std::io::stdout();
            let mut out = stdout.lock();
            write(&mut out)
        }
    }
}

/// Status after a report has been written: failed checks or unconverged rows.
fn post_status(cfg: &RunConfig, table: &Table) -> Result<(), CliError> {
    let failed: Vec<String> = table
        .rows
        .iter()
        .filter(|r| !r.converged)
        .map(|r| match r.inputs.first() {
            Some(Input::Text(t)) => t.clone(),
            Some(Input::Num(v)) => v.to_string(),
            None => String::new(),
        })
        .collect();
    match (&cfg.command, failed.is_empty()) {
        (_, true) => Ok(()),
        (Command::Verify, false) => Err(CliError::Invariant(failed.join(", "))),
        (_, false) => Err(CliError::Unconverged { failed: failed.len() }),
    }
}

/// Parses `args`, runs, writes the report and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let outcome = RunConfig::from_cli(cli).and_then(|cfg| {
        let table = run(&cfg)?;
        emit_report(&table, &cfg)?;
        post_status(&cfg, &table)
    });
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("weber: {e}");
            e.exit_code()
        }
    }
}
