//! Command-line surface over `seqshare-core`: bound tables, threshold
//! chains, cascade simulations, figure datasets, the POM game, the
//! brute-force oracles and an invariant suite.

pub mod commands;
pub mod output;

use std::ffi::OsString;
use std::fmt;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use seqshare_core::Error as CoreError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;

#[derive(Debug, Parser, Serialize)]
#[command(name = "seqshare", version, about = "Sequential sharing of non-locality and preparation contextuality")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Subcommand, Serialize, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Local, preparation non-contextual and quantum bounds
    Bounds,
    /// Critical sharpness chain for successive Bobs
    Thresholds,
    /// Density-matrix simulation of a chain of Bobs (--etas, --alphas)
    Cascade,
    /// Correlated setting choices: simulation against the product formula
    Biased,
    /// Figure datasets 1 to 4
    Figure {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=4))]
        which: u8,
    },
    /// Parity-oblivious multiplexing game
    Pom,
    /// Brute-force classical bounds and matrix quantum maximum
    Oracle,
    /// Run the invariant suite
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundArg {
    Local,
    Pnc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyArg {
    OneParam,
    SumToOne,
    FixedAlpha,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Table,
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Args, Serialize, Clone)]
pub struct Options {
    /// Number of bits (smallest n for sweeps)
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Largest n for sweeps
    #[arg(long, global = true)]
    pub n_max: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub bound: Option<BoundArg>,
    #[arg(long, global = true, value_enum)]
    pub family: Option<FamilyArg>,
    /// Biasedness for the fixed-alpha family or a single POVM
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Maximum chain length
    #[arg(long, global = true)]
    pub k_max: Option<usize>,
    /// Probability that a Bob repeats his predecessor's setting
    #[arg(long, global = true)]
    pub bias_p: Option<f64>,
    #[arg(long, global = true)]
    pub trials: Option<u64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Comma-separated sharpness values, one per Bob
    #[arg(long, global = true, value_delimiter = ',')]
    pub etas: Option<Vec<f64>>,
    /// Comma-separated biasedness values, one per Bob
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub alphas: Option<Vec<f64>>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Infeasible(String),
    Invariant(String),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::Infeasible(_) => EXIT_INFEASIBLE,
            CliError::Invariant(_) => EXIT_INVARIANT,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Infeasible(m) => write!(f, "infeasible parameters: {m}"),
            CliError::Invariant(m) => write!(f, "invariant failure: {m}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InfeasibleFamily { .. }
            | CoreError::InvalidParams { .. }
            | CoreError::NoFeasibleAssignment(_) => CliError::Infeasible(e.to_string()),
            CoreError::NumericalInconsistency { .. } => CliError::Invariant(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

/// Renders the report in the requested format.
pub fn render(report: &output::Report, format: Format) -> Result<String, CliError> {
    Ok(match format {
        Format::Table => report.to_table(),
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json(),
        Format::Svg => report
            .to_svg()
            .ok_or_else(|| CliError::Usage("this command has no plottable series".into()))?,
    })
}

/// Runs a parsed command and returns the rendered artifact. A failed
/// invariant check still renders, then reports [`CliError::Invariant`]
/// through the second element.
pub fn execute(cli: &Cli) -> Result<(String, Option<CliError>), CliError> {
    let report = commands::dispatch(cli)?;
    let text = render(&report, cli.opts.format)?;
    let failed: Vec<&str> = report
        .checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| c.name.as_str())
        .collect();
    let status = (!failed.is_empty()).then(|| CliError::Invariant(failed.join(", ")));
    Ok((text, status))
}

/// Full entry point: parse, run, write. Returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = execute(&cli).and_then(|(text, status)| {
        match &cli.opts.out {
            Some(path) => std::fs::write(path, text.as_bytes())?,
            None => print!("{text}"),
        }
        status.map_or(Ok(()), Err)
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("seqshare: {e}");
            e.exit_code()
        }
    }
}
