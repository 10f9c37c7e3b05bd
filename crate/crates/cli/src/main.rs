//! `swtl`: command-line front end for the spin-wave threshold-logic toolchain.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use swtl_core::simulator::Mode;
use swtl_core::CalibrationStrategy;

#[derive(Parser, Debug)]
#[command(name = "swtl", version, about = "Spin-wave threshold-logic design and verification")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,

    #[command(subcommand)]
    pub command: Command,
}

/// Settings shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Material preset name or path to a TOML material file
    #[arg(long, global = true, default_value = "cofeb-paper")]
    pub preset: String,

    /// Operating frequency in GHz
    #[arg(long, global = true, default_value_t = 35.0, allow_negative_numbers = true)]
    pub freq_ghz: f64,

    /// Baseline field along the magnetization, in tesla
    #[arg(long, global = true, default_value_t = 0.0, allow_negative_numbers = true)]
    pub baseline_t: f64,

    /// Phase per weight unit, in degrees
    #[arg(long, global = true, default_value_t = 10.0)]
    pub unit_deg: f64,

    /// Phase-shifter length in nm
    #[arg(long, global = true, default_value_t = 100.0)]
    pub shifter_nm: f64,

    /// Write result files into this directory instead of printing them
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Dispersion curves f(k), one per field value
    Dispersion(DispersionArgs),
    /// Phase shift versus field, frequency or shifter length
    Sweep {
        #[command(subcommand)]
        kind: SweepKind,
    },
    /// Field a shifter needs for a target phase shift
    Calibrate(CalibrateArgs),
    /// Compile a netlist into a calibrated layout
    Compile(CompileArgs),
    /// Simulate a compiled layout
    Simulate(SimulateArgs),
    /// Device cost of a netlist
    Cost(NetlistArg),
    /// Ideal truth table of a netlist
    TruthTable(NetlistArg),
}

#[derive(Args, Debug)]
pub struct DispersionArgs {
    /// Field values in tesla, comma separated
    #[arg(
        long,
        required = true,
        num_args = 1,
        value_delimiter = ',',
        allow_hyphen_values = true
    )]
    pub fields: Vec<f64>,

    #[arg(long, default_value_t = 1e6)]
    pub k_min: f64,

    #[arg(long, default_value_t = 1e9)]
    pub k_max: f64,

    /// Log-spaced wavenumbers per curve
    #[arg(long, default_value_t = 200)]
    pub points: usize,
}

#[derive(Args, Debug)]
pub struct FieldRange {
    #[arg(long, default_value_t = -0.1, allow_negative_numbers = true)]
    pub min_t: f64,

    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    pub max_t: f64,

    #[arg(long, default_value_t = 21)]
    pub steps: usize,
}

#[derive(Subcommand, Debug)]
pub enum SweepKind {
    /// Phase shift across a field range at the configured frequency
    Field(FieldRange),
    /// Field sweeps repeated at several frequencies
    Frequency {
        /// Frequencies in GHz, comma separated
        #[arg(long, num_args = 1, value_delimiter = ',', default_value = "30,35,40")]
        freqs_ghz: Vec<f64>,

        #[command(flatten)]
        range: FieldRange,
    },
    /// Phase shift versus shifter length at a fixed field
    Length {
        /// Shifter lengths in nm, comma separated
        #[arg(long, num_args = 1, value_delimiter = ',', default_value = "100,150,200,250,300")]
        lengths_nm: Vec<f64>,

        #[arg(long, default_value_t = 0.01, allow_negative_numbers = true)]
        field_t: f64,
    },
}

#[derive(Args, Debug)]
pub struct CalibrateArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub target_deg: f64,

    /// Search bound on |field| in tesla
    #[arg(long, default_value_t = swtl_core::phase_shifter::DEFAULT_FIELD_BOUND_T)]
    pub bound_t: f64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Calibration {
    WeightScaled,
    PerShifter,
}

impl From<Calibration> for CalibrationStrategy {
    fn from(c: Calibration) -> Self {
        match c {
            Calibration::WeightScaled => CalibrationStrategy::WeightScaled,
            Calibration::PerShifter => CalibrationStrategy::PerShifter,
        }
    }
}

#[derive(Args, Debug)]
pub struct CompileArgs {
    pub netlist: PathBuf,

    #[arg(long, value_enum, default_value_t = Calibration::WeightScaled)]
    pub calibration: Calibration,

    /// Also check the phase budget with modelled shifter phases
    #[arg(long)]
    pub strict: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeArg {
    Ideal,
    Physical,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Ideal => Mode::Ideal,
            ModeArg::Physical => Mode::Physical,
        }
    }
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    pub layout: PathBuf,

    /// Every primary input vector
    #[arg(long, conflicts_with = "input", required_unless_present = "input")]
    pub exhaustive: bool,

    /// One primary input vector, e.g. 101, in primary-input order
    #[arg(long)]
    pub input: Option<String>,

    #[arg(long, value_enum, default_value_t = ModeArg::Physical)]
    pub mode: ModeArg,
}

#[derive(Args, Debug)]
pub struct NetlistArg {
    /// Netlist JSON file
    pub netlist: PathBuf,
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    category: &'a str,
    message: String,
}

fn fail(category: &str, message: String, code: u8) -> ExitCode {
    let report = ErrorReport { category, message };
    eprintln!("{}", serde_json::to_string(&report).expect("error report serializes"));
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail("usage", e.render().to_string().trim_end().to_owned(), 2),
    };
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e.category(), e.to_string(), 1),
    }
}
