//! `qdirac`: reproducible numerical checks for the quaternionic Dirac toolkit.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails (or, with
//! `--strict`, when a warning is raised), 2 for invalid configuration or input.

mod config;
mod report;
mod scenarios;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::ScenarioConfig;
use scenarios::Context;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),

    #[error("{failed} check(s) failed")]
    CheckFailed { failed: usize },

    #[error("{0} warning(s) raised under --strict")]
    StrictWarnings(usize),

    #[error(transparent)]
    Core(#[from] qdirac::Error),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl RunError {
    fn exit_code(&self) -> u8 {
        match self {
            RunError::CheckFailed { .. } | RunError::StrictWarnings(_) => 1,
            _ => 2,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "qdirac", version, about = "Numerical checks for complex-quaternionic Dirac boundary operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// TOML scenario file (schema_version = 1).
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Icosphere subdivision level (finest level for `convergence`).
    #[arg(long, value_name = "N")]
    level: Option<u32>,

    /// Output directory for the CSV and JSON reports.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Seed for the random samples.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,

    /// Treat warnings as failures.
    #[arg(long)]
    strict: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Algebra identities, gamma matrices, A / A^-1 and projectors on random samples.
    VerifyAlgebra(Common),
    /// Interior Cauchy reconstruction of a null field.
    CauchyInterior(Common),
    /// Exterior Cauchy reconstruction of a radiating null field.
    CauchyExterior(Common),
    /// Radiating / non-radiating classification along a ray.
    RadiationScan(Common),
    /// Exterior reconstruction and radiation check for a spinor field.
    SpinorExterior(Common),
    /// Quaternionic Stokes identity on a ball.
    StokesCheck(Common),
    /// Surface L2 norms over growing spheres.
    L2Scan(Common),
    /// Observed order of the interior reconstruction under mesh refinement.
    Convergence(Common),
}

fn run(command: Command) -> Result<(), RunError> {
    let (name, common) = match &command {
        Command::VerifyAlgebra(c) => ("verify-algebra", c),
        Command::CauchyInterior(c) => ("cauchy-interior", c),
        Command::CauchyExterior(c) => ("cauchy-exterior", c),
        Command::RadiationScan(c) => ("radiation-scan", c),
        Command::SpinorExterior(c) => ("spinor-exterior", c),
        Command::StokesCheck(c) => ("stokes-check", c),
        Command::L2Scan(c) => ("l2-scan", c),
        Command::Convergence(c) => ("convergence", c),
    };
    let mut cfg = match &common.config {
        Some(path) => ScenarioConfig::load(path)?,
        None => ScenarioConfig::empty(),
    };
    let convergence_top = common.level.filter(|_| name == "convergence");
    if let (Some(level), None) = (common.level, convergence_top) {
        if cfg.geometry.mesh.is_some() {
            return Err(RunError::ConfigInvalid("--level cannot be combined with geometry.mesh".into()));
        }
        cfg.geometry.level = Some(level);
    }
    if let Some(top) = convergence_top {
        if top > config::MAX_LEVEL {
            return Err(RunError::ConfigInvalid(format!("--level must be at most {}", config::MAX_LEVEL)));
        }
    }
    cfg.validate()?;
    let seed = common.seed.or(cfg.seed).unwrap_or(0);
    let out = common
        .out
        .clone()
        .or_else(|| cfg.output.as_ref().map(|p| cfg.base_dir.join(p)))
        .unwrap_or_else(|| PathBuf::from("qdirac-out"));
    let strict = common.strict;
    let ctx = Context { cfg, seed };

    let report = match command {
        Command::VerifyAlgebra(_) => scenarios::verify_algebra(&ctx)?,
        Command::CauchyInterior(_) => scenarios::cauchy_interior(&ctx)?,
        Command::CauchyExterior(_) => scenarios::cauchy_exterior(&ctx)?,
        Command::RadiationScan(_) => scenarios::radiation_scan(&ctx)?,
        Command::SpinorExterior(_) => scenarios::spinor_exterior(&ctx)?,
        Command::StokesCheck(_) => scenarios::stokes_check(&ctx)?,
        Command::L2Scan(_) => scenarios::l2_scan(&ctx)?,
        Command::Convergence(_) => scenarios::convergence(&ctx, convergence_top)?,
    };
    let timestamp = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
    report.write(&out, &timestamp)?;
    report.print_summary();
    if report.failed > 0 {
        return Err(RunError::CheckFailed { failed: report.failed });
    }
    if strict && !report.warnings.is_empty() {
        return Err(RunError::StrictWarnings(report.warnings.len()));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
