//! Command-line surface: argument parsing, command dispatch and exit codes.
//!
//! Exit codes: 0 on success, 1 on domain errors (constant sample, target out
//! of range, invalid parameters, ...), 2 on I/O or parse errors.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::distributions::{
    empirical_cdf, empirical_pdf, find_modes, linear_cdf_coeffs, Breve, BreveParams, LogBreve,
};
use crate::error::Error;
use crate::inversion::{invert, invert_series, InversionMethod};
use crate::io::{read_series, Cell, Format, IoError, Table};
use crate::moment::BreveMoment;
use crate::normalize::{NormalizationPipeline, PositiveSample};
use crate::signal::{
    breve_features, breve_spectrogram_with, NormalizationScope, Padding, SpectrogramOptions,
    TimeSeries, WindowPlan,
};
use crate::transform::{lehmer, lehmer_spectrum};

pub const DEFAULT_GRID: &str = "-inf,-30:30:241,+inf";
pub const DEFAULT_MODE_GRID: &str = "-30:30:1201";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Domain(#[from] Error),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Io(_) | CliError::Usage(_) => 2,
        }
    }
}

/// Discrete Lehmer transform toolkit.
#[derive(Debug, Parser)]
#[command(name = "lehmer", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Clone, Args)]
pub struct IoArgs {
    /// Input series (CSV with `value` or `time,value` header, or JSON)
    #[arg(value_name = "INPUT")]
    pub input: PathBuf,
    /// Output file; standard output when omitted
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Output format
    #[arg(long, default_value = "csv")]
    pub format: Format,
    /// Input format; inferred from the file extension when omitted
    #[arg(long)]
    pub input_format: Option<Format>,
    /// Normalization pipeline, e.g. `affine-unit:0.01` or `shift-min:1,scale-to-max:1`
    #[arg(long = "normalize", value_name = "PIPELINE")]
    pub pipeline: Option<NormalizationPipeline>,
}

#[derive(Debug, Clone, Args)]
pub struct PointArgs {
    /// Single breve moment (`-inf`, `+inf` or a number)
    #[arg(long, allow_hyphen_values = true, conflicts_with = "grid")]
    pub s: Option<BreveMoment>,
    /// Grid: comma separated moments and `lo:hi:n` ranges
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    /// Shape parameter alpha in (0, 1]
    #[arg(long)]
    pub alpha: f64,
    /// Rate parameter beta > 0
    #[arg(long)]
    pub beta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScopeArg {
    PerWindow,
    Global,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Transform value at one breve moment
    Transform {
        #[command(flatten)]
        io: IoArgs,
        /// Breve moment (`-inf`, `+inf` or a number)
        #[arg(long, allow_hyphen_values = true)]
        s: BreveMoment,
    },
    /// Transform over an s-grid
    Spectrum {
        #[command(flatten)]
        io: IoArgs,
        /// Grid: comma separated moments and `lo:hi:n` ranges
        #[arg(long, allow_hyphen_values = true, default_value = DEFAULT_GRID)]
        grid: String,
    },
    /// Breve moment at which the transform equals a target
    Invert {
        #[command(flatten)]
        io: IoArgs,
        /// Target transform value
        #[arg(long)]
        target: f64,
        /// Accepted residual, relative to max(1, target)
        #[arg(long, default_value = "1e-12")]
        tol: f64,
        /// Use the truncated inversion series around this expansion point
        #[arg(long, allow_hyphen_values = true)]
        series_s0: Option<f64>,
        /// Number of series terms (1 to 6)
        #[arg(long, default_value_t = 4)]
        terms: usize,
    },
    /// Linear-family CDF
    Cdf {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        points: PointArgs,
    },
    /// Linear-family density
    Pdf {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        points: PointArgs,
    },
    /// Breve density
    BrevePdf {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        params: ParamArgs,
        /// Lower endpoint floor, relative to the upper endpoint
        #[arg(long, default_value = "1e-9")]
        eps: f64,
        #[command(flatten)]
        points: PointArgs,
    },
    /// Log-Breve density
    LogBrevePdf {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        points: PointArgs,
    },
    /// Extreme points of the Breve density
    Modes {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        params: ParamArgs,
        /// Lower endpoint floor, relative to the upper endpoint
        #[arg(long, default_value = "1e-9")]
        eps: f64,
        /// Finite search grid: `lo:hi:n` ranges
        #[arg(long, allow_hyphen_values = true, default_value = DEFAULT_MODE_GRID)]
        grid: String,
    },
    /// Sliding-window transform matrix
    Spectrogram {
        #[command(flatten)]
        io: IoArgs,
        /// Window length in samples
        #[arg(long)]
        width: usize,
        /// Step between window starts
        #[arg(long)]
        hop: usize,
        /// Grid: comma separated moments and `lo:hi:n` ranges
        #[arg(long, allow_hyphen_values = true, default_value = DEFAULT_GRID)]
        grid: String,
        /// Normalize each window on its own or fit on the whole series
        #[arg(long, value_enum, default_value = "per-window")]
        scope: ScopeArg,
        /// Keep a shorter trailing window instead of dropping it
        #[arg(long)]
        keep_partial: bool,
        /// Evaluate windows on the thread pool
        #[arg(long)]
        parallel: bool,
    },
    /// Transform at the classical mean landmarks
    Features {
        #[command(flatten)]
        io: IoArgs,
        /// Window length; features are computed per window when given
        #[arg(long, requires = "hop")]
        width: Option<usize>,
        /// Step between window starts
        #[arg(long, requires = "width")]
        hop: Option<usize>,
    },
}

/// Points at which a distribution command is evaluated.
#[derive(Debug, Clone, PartialEq)]
pub enum Points {
    Single(BreveMoment),
    Grid(Vec<BreveMoment>),
}

impl Points {
    fn moments(&self) -> Vec<BreveMoment> {
        match self {
            Points::Single(s) => vec![*s],
            Points::Grid(g) => g.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Transform { s: BreveMoment },
    Spectrum { grid: Vec<BreveMoment> },
    Invert { target: f64, tol: f64, series: Option<(f64, usize)> },
    Cdf { points: Points },
    Pdf { points: Points },
    BrevePdf { params: BreveParams, eps: f64, points: Points },
    LogBrevePdf { params: BreveParams, points: Points },
    Modes { params: BreveParams, eps: f64, grid: Vec<f64> },
    Spectrogram { plan: WindowPlan, grid: Vec<BreveMoment>, options: SpectrogramOptions },
    Features { plan: Option<WindowPlan> },
}

/// Fully validated invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub input: PathBuf,
    pub input_format: Format,
    pub output: Option<PathBuf>,
    pub format: Format,
    /// `None` means pass-through, valid only for all-positive input.
    pub pipeline: Option<NormalizationPipeline>,
}

/// Parses a grid such as `-inf,-30:30:241,+inf`.
pub fn parse_grid(text: &str) -> Result<Vec<BreveMoment>, String> {
    let mut grid = Vec::new();
    for item in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [single] => grid.push(single.parse::<BreveMoment>()?),
            [lo, hi, n] => {
                let lo: f64 = lo.trim().parse().map_err(|_| format!("bad range start in {item:?}"))?;
                let hi: f64 = hi.trim().parse().map_err(|_| format!("bad range end in {item:?}"))?;
                let n: usize = n.trim().parse().map_err(|_| format!("bad point count in {item:?}"))?;
                if !(lo.is_finite() && hi.is_finite()) || n == 0 || (n == 1 && lo != hi) {
                    return Err(format!("invalid range {item:?}"));
                }
                let step = if n > 1 { (hi - lo) / (n - 1) as f64 } else { 0.0 };
                grid.extend((0..n).map(|i| {
                    let s = if i + 1 == n { hi } else { lo + step * i as f64 };
                    BreveMoment::Finite(s)
                }));
            }
            _ => return Err(format!("invalid grid item {item:?}")),
        }
    }
    if grid.is_empty() {
        return Err("grid is empty".into());
    }
    Ok(grid)
}

fn finite_grid(text: &str) -> Result<Vec<f64>, String> {
    parse_grid(text)?
        .into_iter()
        .map(|m| match m {
            BreveMoment::Finite(s) => Ok(s),
            other => Err(format!("grid point {other} must be finite here")),
        })
        .collect()
}

fn points_from(args: PointArgs) -> Result<Points, CliError> {
    match (args.s, args.grid) {
        (Some(s), None) => Ok(Points::Single(s)),
        (None, Some(g)) => Ok(Points::Grid(parse_grid(&g).map_err(CliError::Usage)?)),
        (None, None) => Ok(Points::Grid(parse_grid(DEFAULT_GRID).map_err(CliError::Usage)?)),
        (Some(_), Some(_)) => Err(CliError::Usage("pass either --s or --grid".into())),
    }
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let usage = CliError::Usage;
        let (io, command) = match cli.command {
            CliCommand::Transform { io, s } => (io, Command::Transform { s }),
            CliCommand::Spectrum { io, grid } => (
                io,
                Command::Spectrum {
                    grid: parse_grid(&grid).map_err(usage)?,
                },
            ),
            CliCommand::Invert {
                io,
                target,
                tol,
                series_s0,
                terms,
            } => (
                io,
                Command::Invert {
                    target,
                    tol,
                    series: series_s0.map(|s0| (s0, terms)),
                },
            ),
            CliCommand::Cdf { io, points } => (io, Command::Cdf { points: points_from(points)? }),
            CliCommand::Pdf { io, points } => (io, Command::Pdf { points: points_from(points)? }),
            CliCommand::BrevePdf {
                io,
                params,
                eps,
                points,
            } => (
                io,
                Command::BrevePdf {
                    params: BreveParams::new(params.alpha, params.beta)?,
                    eps,
                    points: points_from(points)?,
                },
            ),
            CliCommand::LogBrevePdf { io, params, points } => (
                io,
                Command::LogBrevePdf {
                    params: BreveParams::new(params.alpha, params.beta)?,
                    points: points_from(points)?,
                },
            ),
            CliCommand::Modes {
                io,
                params,
                eps,
                grid,
            } => (
                io,
                Command::Modes {
                    params: BreveParams::new(params.alpha, params.beta)?,
                    eps,
                    grid: finite_grid(&grid).map_err(usage)?,
                },
            ),
            CliCommand::Spectrogram {
                io,
                width,
                hop,
                grid,
                scope,
                keep_partial,
                parallel,
            } => {
                let pad = if keep_partial { Padding::None } else { Padding::DropPartial };
                let scope = match scope {
                    ScopeArg::PerWindow => NormalizationScope::PerWindow,
                    ScopeArg::Global => NormalizationScope::Global,
                };
                (
                    io,
                    Command::Spectrogram {
                        plan: WindowPlan::new(width, hop, pad)?,
                        grid: parse_grid(&grid).map_err(usage)?,
                        options: SpectrogramOptions { scope, parallel },
                    },
                )
            }
            CliCommand::Features { io, width, hop } => {
                let plan = match (width, hop) {
                    (Some(w), Some(h)) => Some(WindowPlan::new(w, h, Padding::DropPartial)?),
                    _ => None,
                };
                (io, Command::Features { plan })
            }
        };
        Ok(Self {
            command,
            input_format: io.input_format.unwrap_or_else(|| Format::from_path(&io.input)),
            input: io.input,
            output: io.output,
            format: io.format,
            pipeline: io.pipeline,
        })
    }
}

fn pipeline_for(config: &RunConfig, ts: &TimeSeries) -> Result<NormalizationPipeline, CliError> {
    match &config.pipeline {
        Some(p) => Ok(p.clone()),
        None if ts.values().iter().all(|&v| v > 0.0) => Ok(NormalizationPipeline::identity()),
        None => Err(Error::InvalidStepParameter {
            step: "identity",
            reason: "input has non-positive values; pass an explicit --normalize pipeline".into(),
        }
        .into()),
    }
}

fn normalized(config: &RunConfig, ts: &TimeSeries) -> Result<PositiveSample, CliError> {
    Ok(pipeline_for(config, ts)?.normalize(&ts.to_sample())?)
}

fn scalar_or_rows(points: &Points, f: impl Fn(BreveMoment) -> Result<f64, Error>) -> Result<Table, CliError> {
    let mut table = Table::new(vec!["s", "value"]);
    table.single_record = matches!(points, Points::Single(_));
    for s in points.moments() {
        table.push(vec![Cell::Moment(s), Cell::Num(f(s)?)]);
    }
    Ok(table)
}

fn finite_only(s: BreveMoment) -> Result<f64, Error> {
    match s {
        BreveMoment::Finite(x) => Ok(x),
        // densities vanish at the sentinels
        _ => Ok(f64::NAN),
    }
}

fn density_at(s: BreveMoment, pdf: impl Fn(f64) -> f64) -> Result<f64, Error> {
    let x = finite_only(s)?;
    Ok(if x.is_nan() { 0.0 } else { pdf(x) })
}

/// Executes a validated command and returns the result table.
pub fn execute(config: &RunConfig) -> Result<Table, CliError> {
    let ts = read_series(&config.input, config.input_format)?;
    let table = match &config.command {
        Command::Transform { s } => {
            let h = normalized(config, &ts)?;
            scalar_or_rows(&Points::Single(*s), |s| Ok(lehmer(&h, s)))?
        }
        Command::Spectrum { grid } => {
            let h = normalized(config, &ts)?;
            let mut table = Table::new(vec!["s", "value"]);
            for (s, v) in lehmer_spectrum(&h, grid)? {
                table.push(vec![Cell::Moment(s), Cell::Num(v)]);
            }
            table
        }
        Command::Invert { target, tol, series } => {
            let h = normalized(config, &ts)?;
            let mut table = Table::new(vec!["target", "moment", "residual", "iterations", "method"]);
            table.single_record = true;
            match series {
                None => {
                    let r = invert(&h, *target, *tol)?;
                    let method = match r.method {
                        InversionMethod::BisectionNewton => "bisection-newton",
                        InversionMethod::LagrangeSeries => "lagrange-series",
                    };
                    table.push(vec![
                        Cell::Num(*target),
                        Cell::Moment(r.moment),
                        Cell::Num(r.residual),
                        Cell::Int(r.iterations as u64),
                        Cell::Text(method.into()),
                    ]);
                }
                Some((s0, terms)) => {
                    let s = invert_series(&h, *target, *s0, *terms)?;
                    let residual = (lehmer(&h, BreveMoment::Finite(s)) - target).abs();
                    table.push(vec![
                        Cell::Num(*target),
                        Cell::Moment(BreveMoment::Finite(s)),
                        Cell::Num(residual),
                        Cell::Int(*terms as u64),
                        Cell::Text("lagrange-series".into()),
                    ]);
                }
            }
            table
        }
        Command::Cdf { points } => {
            let h = normalized(config, &ts)?;
            let coeffs = linear_cdf_coeffs(&h)?;
            scalar_or_rows(points, |s| Ok(empirical_cdf(&h, &coeffs, s)))?
        }
        Command::Pdf { points } => {
            let h = normalized(config, &ts)?;
            let coeffs = linear_cdf_coeffs(&h)?;
            scalar_or_rows(points, |s| density_at(s, |x| empirical_pdf(&h, &coeffs, x)))?
        }
        Command::BrevePdf { params, eps, points } => {
            let dist = Breve::from_sample(&normalized(config, &ts)?, *params, *eps)?;
            scalar_or_rows(points, |s| density_at(s, |x| dist.pdf(x)))?
        }
        Command::LogBrevePdf { params, points } => {
            let dist = LogBreve::from_sample(&normalized(config, &ts)?, *params)?;
            scalar_or_rows(points, |s| density_at(s, |x| dist.pdf(x)))?
        }
        Command::Modes { params, eps, grid } => {
            let dist = Breve::from_sample(&normalized(config, &ts)?, *params, *eps)?;
            let mut table = Table::new(vec!["s", "density", "kind"]);
            for m in find_modes(dist.sample(), params, grid)? {
                let kind = match m.kind {
                    crate::distributions::ModeKind::Maximum => "maximum",
                    crate::distributions::ModeKind::Minimum => "minimum",
                };
                table.push(vec![
                    Cell::Moment(BreveMoment::Finite(m.s)),
                    Cell::Num(m.density),
                    Cell::Text(kind.into()),
                ]);
            }
            table
        }
        Command::Spectrogram { plan, grid, options } => {
            let pipeline = pipeline_for(config, &ts)?;
            let sg = breve_spectrogram_with(&ts, plan, &pipeline, grid, *options)?;
            let mut table = Table::new(vec!["window_start", "s", "value"]);
            for (start, row) in sg.window_starts.iter().zip(sg.rows()) {
                for (s, v) in sg.s_grid.iter().zip(row) {
                    table.push(vec![Cell::Int(*start as u64), Cell::Moment(*s), Cell::Num(*v)]);
                }
            }
            table
        }
        Command::Features { plan } => {
            let pipeline = pipeline_for(config, &ts)?;
            match plan {
                None => {
                    let mut table = Table::new(vec!["label", "s", "value"]);
                    for f in breve_features(&ts.to_sample(), &pipeline)? {
                        table.push(vec![Cell::Text(f.label.into()), Cell::Moment(f.moment), Cell::Num(f.value)]);
                    }
                    table
                }
                Some(plan) => {
                    let mut table = Table::new(vec!["window_start", "label", "s", "value"]);
                    for r in plan.ranges(ts.len())? {
                        let window = crate::normalize::Sample::new(ts.values()[r.clone()].to_vec())?;
                        let features = breve_features(&window, &pipeline).map_err(|e| Error::Window {
                            window: r.start / plan.hop(),
                            source: Box::new(e),
                        })?;
                        for f in features {
                            table.push(vec![
                                Cell::Int(r.start as u64),
                                Cell::Text(f.label.into()),
                                Cell::Moment(f.moment),
                                Cell::Num(f.value),
                            ]);
                        }
                    }
                    table
                }
            }
        }
    };
    Ok(table)
}

/// Runs the command, writes its output, and returns the process exit code.
/// Errors are reported on standard error.
pub fn run(config: &RunConfig) -> i32 {
    match execute(config).and_then(|t| Ok(t.write(config.output.as_deref(), config.format)?)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Parses process arguments and runs.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match RunConfig::from_cli(cli) {
        Ok(config) => run(&config),
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
