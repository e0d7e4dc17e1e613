//! Command-line front end of the `sdf-dirac` executable.
//!
//! Exit codes: 0 success, 1 usage or validation error, 2 computational
//! failure.

mod commands;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::model::{ProblemSpec, ShapeConvention, Symmetry};
use crate::oracle::OracleChoice;
use crate::spectrum::{Block, Preset};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAILURE: i32 = 2;

/// Environment variable capping the worker threads.
pub const THREADS_VAR: &str = "SDF_DIRAC_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "sdf-dirac",
    version,
    about = "Dirac bound states in the shifted Deng-Fan potential with a Yukawa tensor term"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the energy equation for one state.
    Solve(SolveArgs),
    /// Regenerate a spectrum table.
    Table(TableArgs),
    /// Sample the radial spinor components of one state.
    Wavefunction(WavefunctionArgs),
    /// Cross-check analytic energies against independent oracles.
    Verify(VerifyArgs),
    /// Tabulate 1/r² against its exponential approximation.
    Approx(ApproxArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SymmetryArg {
    Spin,
    Pseudospin,
}

impl From<SymmetryArg> for Symmetry {
    fn from(s: SymmetryArg) -> Self {
        match s {
            SymmetryArg::Spin => Symmetry::Spin,
            SymmetryArg::Pseudospin => Symmetry::Pseudospin,
        }
    }
}

/// How `b` follows from `a` and `r_e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ShapeArg {
    /// `b = e^(a r_e) − 1`
    Standard,
    /// `b = e^(2 a r_e) + 1`, the convention behind the tabulated spectra
    Tabulated,
}

impl From<ShapeArg> for ShapeConvention {
    fn from(s: ShapeArg) -> Self {
        match s {
            ShapeArg::Standard => ShapeConvention::Standard,
            ShapeArg::Tabulated => ShapeConvention::Tabulated,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
    Pretty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleArg {
    Shooting,
    Nu,
    Both,
}

impl From<OracleArg> for OracleChoice {
    fn from(o: OracleArg) -> Self {
        match o {
            OracleArg::Shooting => OracleChoice::Shooting,
            OracleArg::Nu => OracleChoice::Nu,
            OracleArg::Both => OracleChoice::Both,
        }
    }
}

/// Output destination and decoration shared by every command.
#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Add a generation-time comment line (csv and pretty only).
    #[arg(long)]
    pub stamp: bool,
}

/// One fully specified state.
#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    #[arg(long, value_enum)]
    pub symmetry: SymmetryArg,
    /// Fermion mass M (fm⁻¹).
    #[arg(long = "M", default_value_t = 1.0)]
    pub mass: f64,
    /// Well depth D (fm⁻¹).
    #[arg(long = "D")]
    pub d: f64,
    /// Range parameter a (fm⁻¹).
    #[arg(long)]
    pub a: f64,
    /// Equilibrium distance r_e (fm).
    #[arg(long = "re")]
    pub r_e: f64,
    /// Symmetry constant C_s or C_ps (fm⁻¹).
    #[arg(long = "C", default_value_t = 0.0)]
    pub constant: f64,
    /// Tensor strength A.
    #[arg(long = "A", default_value_t = 0.0)]
    pub tensor: f64,
    /// Radial index of the closed form.
    #[arg(long)]
    pub n: i64,
    #[arg(long)]
    pub kappa: i64,
    #[arg(long, value_enum, default_value = "tabulated")]
    pub shape: ShapeArg,
}

impl StateArgs {
    pub fn spec(&self) -> ProblemSpec {
        ProblemSpec {
            symmetry: self.symmetry.into(),
            mass: self.mass,
            d: self.d,
            r_e: self.r_e,
            a: self.a,
            constant: self.constant,
            tensor: self.tensor,
            n: self.n,
            kappa: self.kappa,
            convention: self.shape.into(),
        }
    }
}

/// A parameter block without quantum numbers; every flag may be left out in
/// favour of `--preset`.
#[derive(Debug, Clone, Args)]
pub struct BlockArgs {
    #[arg(long, value_enum)]
    pub symmetry: Option<SymmetryArg>,
    #[arg(long = "M")]
    pub mass: Option<f64>,
    #[arg(long = "D")]
    pub d: Option<f64>,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long = "re")]
    pub r_e: Option<f64>,
    #[arg(long = "C")]
    pub constant: Option<f64>,
    /// Tensor strengths, comma separated.
    #[arg(long = "A", value_delimiter = ',')]
    pub tensor: Vec<f64>,
    #[arg(long, value_enum)]
    pub shape: Option<ShapeArg>,
}

/// Names of the block flags, for conflicts with `--preset`.
const BLOCK_FLAGS: [&str; 7] = ["symmetry", "mass", "d", "a", "r_e", "constant", "shape"];
const STATE_FLAGS: [&str; 9] = ["symmetry", "mass", "d", "a", "r_e", "constant", "shape", "n", "kappa"];

impl BlockArgs {
    /// The block, or `None` when a required flag is missing.
    pub fn block(&self) -> Option<Block> {
        Some(Block {
            symmetry: self.symmetry?.into(),
            mass: self.mass.unwrap_or(1.0),
            d: self.d?,
            a: self.a?,
            r_e: self.r_e?,
            constant: self.constant.unwrap_or(0.0),
            convention: self.shape.unwrap_or(ShapeArg::Tabulated).into(),
        })
    }
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct SolveArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[arg(long, value_enum, default_value = "pretty")]
    pub format: FormatArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct TableArgs {
    /// Built-in parameter set; otherwise give a block with --symmetry, --D,
    /// --a and --re (--M 1, --C 0, --A 0,0.5 by default).
    #[arg(long, conflicts_with_all = BLOCK_FLAGS)]
    pub preset: Option<Preset>,
    #[command(flatten)]
    pub block: BlockArgs,
    /// Reference CSV to compare against.
    #[arg(long)]
    pub diff: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "pretty")]
    pub format: FormatArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct WavefunctionArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Outer end of the grid (fm); default 200/a.
    #[arg(long)]
    pub rmax: Option<f64>,
    /// Number of logarithmically spaced radii, from 10⁻⁴/a.
    #[arg(long, default_value_t = 2000, value_parser = clap::value_parser!(u64).range(2..))]
    pub points: u64,
    /// Scale so that the closed-form component has unit norm.
    #[arg(long)]
    pub normalize: bool,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: FormatArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct VerifyArgs {
    /// Built-in parameter set; otherwise give one state with the block flags
    /// plus --n and --kappa (--A 0 by default).
    #[arg(long, conflicts_with_all = STATE_FLAGS)]
    pub preset: Option<Preset>,
    #[command(flatten)]
    pub block: BlockArgs,
    #[arg(long)]
    pub n: Option<i64>,
    #[arg(long)]
    pub kappa: Option<i64>,
    #[arg(long, value_enum, default_value = "both")]
    pub oracle: OracleArg,
    /// Reference CSV; analytic energies must match it to 10⁻⁶.
    #[arg(long)]
    pub diff: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: FormatArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct ApproxArgs {
    #[arg(long = "a-values", value_delimiter = ',', default_value = "0.1,0.5,1.0")]
    pub a_values: Vec<f64>,
    #[arg(long, default_value_t = 0.05)]
    pub rmin: f64,
    #[arg(long, default_value_t = 10.0)]
    pub rmax: f64,
    /// Number of evenly spaced radii.
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(2..))]
    pub points: u64,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: FormatArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Exit code for a library error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NonPositiveParameter { .. }
        | Error::DomainError { .. }
        | Error::InvalidKappa
        | Error::Validation(_)
        | Error::WrongSymmetry { .. }
        | Error::ParameterOutOfRange { .. }
        | Error::Io(_)
        | Error::Parse(_) => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(value) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| format!("{THREADS_VAR} must be a positive integer, got '{value}'"))?;
    // a pool may already exist when called twice in one process
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Diagnostics go to standard error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = err.print();
            return code;
        }
    };
    if let Err(message) = configure_threads() {
        eprintln!("error: {message}");
        return EXIT_USAGE;
    }
    let result = match &cli.command {
        Command::Solve(args) => commands::solve(args),
        Command::Table(args) => commands::table(args),
        Command::Wavefunction(args) => commands::wavefunction(args),
        Command::Verify(args) => commands::verify(args),
        Command::Approx(args) => commands::approx(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code(&err)
        }
    }
}
