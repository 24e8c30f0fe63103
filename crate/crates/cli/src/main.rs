mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::CliError;

#[derive(Parser)]
#[command(
    name = "casimir",
    version,
    about = "Casimir free energy, pressure, force gradient and entropy between material plates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one quantity at one separation and temperature (JSON).
    Compute(ComputeArgs),
    /// Sweep separation or temperature (CSV).
    Scan(ScanArgs),
    /// Min/max envelope over a swept material parameter (CSV).
    Band(BandArgs),
    /// Transform an optical data table to ε(iξ_l) and cache it.
    Ingest(IngestArgs),
    /// Entropy on a falling temperature grid and the Nernst verdict (JSON).
    Nernst(NernstArgs),
}

macro_rules! value_enum_from_str {
    ($($t:ty),*) => {$(
        impl FromStr for $t {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, String> {
                <$t as ValueEnum>::from_str(s, true)
            }
        }
    )*};
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Quantity {
    FreeEnergy,
    Pressure,
    Gradient,
    Entropy,
    ThermalCorrection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum ConventionArg {
    AtT,
    AtZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variable {
    Separation,
    Temperature,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum BandParam {
    OmegaP,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExtMode {
    Drude,
    Plasma,
}

value_enum_from_str!(Quantity, ConventionArg, Variable, Spacing, BandParam, ExtMode);

/// Material and engine options shared by every command.
#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Built-in material, `cache:<file>` from `ingest`, or a section of --materials.
    #[arg(long)]
    pub model: Option<String>,
    /// Material of the second plate; defaults to --model.
    #[arg(long)]
    pub model2: Option<String>,
    /// File of user-defined materials.
    #[arg(long)]
    pub materials: Option<PathBuf>,
    /// `key = value` file supplying defaults for any long flag.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Relative tolerance of the Matsubara engine.
    #[arg(long)]
    pub rel_tol: Option<f64>,
}

/// What to compute and how to map it to the sphere-plate geometry.
#[derive(Args, Debug, Clone)]
pub struct QuantityArgs {
    #[arg(long)]
    pub quantity: Option<Quantity>,
    /// Sphere radius for gradients, m.
    #[arg(long)]
    pub radius: Option<f64>,
    /// First-order PFA correction coefficient.
    #[arg(long)]
    pub beta: Option<f64>,
    /// rms roughness of the sphere, m.
    #[arg(long)]
    pub delta1: Option<f64>,
    /// rms roughness of the plate, m.
    #[arg(long)]
    pub delta2: Option<f64>,
    /// Denominator of the thermal correction.
    #[arg(long)]
    pub convention: Option<ConventionArg>,
}

#[derive(Args, Debug)]
pub struct ComputeArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub what: QuantityArgs,
    /// Separation, m.
    #[arg(long)]
    pub a: Option<f64>,
    /// Temperature, K.
    #[arg(long = "T", alias = "temperature")]
    pub t: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    #[arg(long)]
    pub variable: Option<Variable>,
    #[arg(long)]
    pub min: Option<f64>,
    #[arg(long)]
    pub max: Option<f64>,
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long)]
    pub spacing: Option<Spacing>,
    /// Fixed separation when sweeping temperature, m.
    #[arg(long)]
    pub a: Option<f64>,
    /// Fixed temperature when sweeping separation, K.
    #[arg(long = "T", alias = "temperature")]
    pub t: Option<f64>,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Also write a gnuplot script next to --output.
    #[arg(long)]
    pub plot: bool,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub what: QuantityArgs,
    #[command(flatten)]
    pub sweep: SweepArgs,
}

#[derive(Args, Debug)]
pub struct BandArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub what: QuantityArgs,
    #[command(flatten)]
    pub sweep: SweepArgs,
    #[arg(long)]
    pub param: Option<BandParam>,
    #[arg(long)]
    pub param_min: Option<f64>,
    #[arg(long)]
    pub param_max: Option<f64>,
    /// Parameter values evaluated across the interval.
    #[arg(long)]
    pub param_steps: Option<usize>,
}

#[derive(Args, Debug)]
pub struct IngestArgs {
    /// Optical table: `omega_eV eps_imag` or `omega_eV n k` rows.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub ext: Option<ExtMode>,
    /// Plasma frequency of the extrapolation, eV.
    #[arg(long)]
    pub omega_p: Option<f64>,
    /// Relaxation of the Drude extrapolation, eV.
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long = "T", alias = "temperature")]
    pub t: Option<f64>,
    /// Highest Matsubara index stored.
    #[arg(long)]
    pub l_max: Option<u64>,
    /// Cache directory; defaults to $CASIMIR_CACHE_DIR.
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct NernstArgs {
    #[command(flatten)]
    pub common: Common,
    /// Separation, m.
    #[arg(long)]
    pub a: Option<f64>,
    /// Highest temperature of the default grid, K.
    #[arg(long)]
    pub t_high: Option<f64>,
    /// Decades spanned by the default grid.
    #[arg(long)]
    pub decades: Option<f64>,
    #[arg(long)]
    pub per_decade: Option<usize>,
    /// Explicit comma-separated descending grid, K.
    #[arg(long)]
    pub grid: Option<String>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Compute(a) => commands::compute(a),
        Command::Scan(a) => commands::scan(a),
        Command::Band(a) => commands::band(a),
        Command::Ingest(a) => commands::ingest(a),
        Command::Nernst(a) => commands::nernst(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("casimir: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &CliError) -> u8 {
    e.exit_code() as u8
}
