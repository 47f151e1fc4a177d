//! `corrcoh`: build two-qubit states, report their correlation measures,
//! verify the closed-form identities in bulk and simulate the preparation
//! protocol.
//!
//! Exit codes: 0 success, 1 invalid input, 2 verification failure.

mod output;
mod report;
mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use corrcoh::io::{StateFile, StateFileError};
use corrcoh::linalg::{UnitVector, Vec3};
use corrcoh::rsp::simulate_rsp;
use corrcoh::state::{
    make_bell, make_bell_diagonal, make_product, make_werner, paper_channel_state,
    paper_product_state, random_density, BellState, DensityMatrix,
};

use crate::output::{render, Format};

#[derive(Debug, Parser)]
#[command(name = "corrcoh", version, about = "Correlated coherence toolkit for two-qubit states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a state file for one of the built-in families.
    Make(MakeArgs),
    /// Compute every measure for one or more state files.
    Report(ReportArgs),
    /// Check the closed-form identities over seeded random states.
    Verify(VerifyArgs),
    /// Run the preparation protocol shot by shot and compare with theory.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Family {
    Bell,
    Werner,
    BellDiagonal,
    Product,
    Random,
    PaperProduct,
    PaperChannel,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BellArg {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl From<BellArg> for BellState {
    fn from(b: BellArg) -> Self {
        match b {
            BellArg::PhiPlus => BellState::PhiPlus,
            BellArg::PhiMinus => BellState::PhiMinus,
            BellArg::PsiPlus => BellState::PsiPlus,
            BellArg::PsiMinus => BellState::PsiMinus,
        }
    }
}

#[derive(Debug, Args)]
struct MakeArgs {
    family: Family,
    /// Which Bell state (`bell` family).
    #[arg(long, value_enum, default_value = "phi-plus")]
    which: BellArg,
    /// Bell-projector weight of the Werner state, in [0, 1].
    #[arg(long)]
    p: Option<f64>,
    /// Diagonal of the correlation matrix (`bell-diagonal` family).
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
    c: Option<Vec3>,
    /// Bloch vector of qubit A (`product` family).
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
    a: Option<Vec3>,
    /// Bloch vector of qubit B (`product` family).
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
    b: Option<Vec3>,
    /// Rank of the Ginibre sample (`random` family).
    #[arg(long, default_value_t = 4)]
    rank: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    label: Option<String>,
    /// Output path; stdout when absent.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ReportArgs {
    #[arg(required = true)]
    states: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Target for the optimal payoff; repeatable.
    #[arg(long = "target", value_parser = parse_unit, allow_hyphen_values = true)]
    targets: Vec<UnitVector>,
    /// Axis for the circular average payoff.
    #[arg(long, value_parser = parse_unit, allow_hyphen_values = true)]
    beta: Option<UnitVector>,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    state: PathBuf,
    #[arg(long, value_parser = parse_unit, allow_hyphen_values = true)]
    target: UnitVector,
    #[arg(long, default_value_t = 1_000_000)]
    shots: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

/// Failure with its exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("verification failed")]
    VerifyFailed,
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::VerifyFailed => 2,
        }
    }
}

impl From<corrcoh::Error> for CliError {
    fn from(e: corrcoh::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<StateFileError> for CliError {
    fn from(e: StateFileError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

fn parse_vec3(s: &str) -> Result<Vec3, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected x,y,z, got {s:?}"));
    }
    let mut v = [0.0; 3];
    for (slot, p) in v.iter_mut().zip(parts) {
        *slot = p.parse().map_err(|_| format!("not a number: {p:?}"))?;
    }
    Ok(v)
}

fn parse_unit(s: &str) -> Result<UnitVector, String> {
    UnitVector::new(parse_vec3(s)?).map_err(|e| e.to_string())
}

fn require<T>(value: Option<T>, flag: &str, family: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Invalid(format!("{family} requires --{flag}")))
}

fn build_state(args: &MakeArgs) -> Result<(DensityMatrix, String), CliError> {
    let (rho, label) = match args.family {
        Family::Bell => {
            let name = args.which.to_possible_value().expect("no skipped variants");
            (make_bell(args.which.into()), format!("bell {}", name.get_name()))
        }
        Family::Werner => {
            let p = require(args.p, "p", "werner")?;
            (make_werner(p)?, format!("werner p={p}"))
        }
        Family::BellDiagonal => {
            let c = require(args.c, "c", "bell-diagonal")?;
            (
                make_bell_diagonal(c[0], c[1], c[2])?,
                format!("bell-diagonal c={},{},{}", c[0], c[1], c[2]),
            )
        }
        Family::Product => {
            let a = require(args.a, "a", "product")?;
            let b = require(args.b, "b", "product")?;
            let rho = make_product(&DensityMatrix::qubit(a)?, &DensityMatrix::qubit(b)?)?;
            (rho, "product".to_owned())
        }
        Family::Random => (
            random_density(4, args.rank, args.seed)?,
            format!("random seed={} rank={}", args.seed, args.rank),
        ),
        Family::PaperProduct => (paper_product_state(), "paper-product".to_owned()),
        Family::PaperChannel => (paper_channel_state(), "paper-channel".to_owned()),
    };
    Ok((rho, args.label.clone().unwrap_or(label)))
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<(DensityMatrix, Option<String>), CliError> {
    let file = StateFile::read(path)
        .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
    let rho = file
        .to_density()
        .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
    Ok((rho, file.label))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Make(args) => {
            let (rho, label) = build_state(&args)?;
            emit(&StateFile::from_density(&rho, Some(label)).to_json(), args.out.as_deref())
        }
        Command::Report(args) => {
            let mut docs = Vec::with_capacity(args.states.len());
            for path in &args.states {
                let (rho, label) = load(path)?;
                let label = label.unwrap_or_else(|| path.display().to_string());
                docs.push(report::build(&rho, label, &args.targets, args.beta.as_ref())?);
            }
            emit(&render(&docs, args.format)?, args.out.as_deref())
        }
        Command::Verify(args) => {
            if args.trials == 0 {
                return Err(CliError::Invalid("--trials must be at least 1".into()));
            }
            if !(args.tol.is_finite() && args.tol >= 0.0) {
                return Err(CliError::Invalid("--tol must be a finite non-negative number".into()));
            }
            let summary = verify::run(args.trials, args.seed, args.tol)?;
            emit(&verify::render(&summary, args.format)?, args.out.as_deref())?;
            if summary.passed {
                Ok(())
            } else {
                Err(CliError::VerifyFailed)
            }
        }
        Command::Simulate(args) => {
            let (rho, _) = load(&args.state)?;
            let sim = simulate_rsp(&rho, &args.target, args.shots, args.seed)?;
            emit(&render(&[sim], args.format)?, args.out.as_deref())?;
            if sim.degenerate {
                eprintln!("note: E s = 0, every measurement direction is optimal; used z");
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !matches!(e, CliError::VerifyFailed) {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
