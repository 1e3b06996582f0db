//! `oner`: scenario-driven front end for pulsed optical nuclear electric
//! resonance simulations.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure,
//! 4 data-ingestion error.

mod commands;
mod error;
mod nuclei;
mod output;
mod scenario;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Model, Preset, Report};
use error::CliError;
use scenario::{Scenario, UnitMode};

#[derive(Debug, Parser)]
#[command(
    name = "oner",
    version,
    about = "Pulsed optical NQI modulation: two-level dynamics, spectra and spin Rabi maps"
)]
struct Cli {
    /// Scenario file (TOML).
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,
    /// Output CSV path; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Overrides the scenario's unit mode.
    #[arg(long, global = true, value_enum)]
    unit_mode: Option<UnitMode>,
    #[arg(long, short, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form steady state of the driven two-level system.
    SteadyState,
    /// Square-pulsed two-level time series and its Fourier coefficients.
    Pulse,
    /// Zeeman and first-order quadrupole terms of every Δm = 1, 2 transition.
    Spectrum,
    /// Predicted spin Rabi frequencies over the angle and field sweep.
    RabiMap,
    /// Spin Rabi oscillations of the coupled or the effective spin-only model.
    Coupled {
        #[arg(long, value_enum, default_value_t = Model::Coupled)]
        model: Model,
    },
    /// Surface mesh of r·Φ·r over the unit sphere.
    EfgMesh {
        #[arg(long, value_enum, conflicts_with = "tensor")]
        preset: Option<Preset>,
        /// Components xx,yy,zz,xy,xz,yz.
        #[arg(long, allow_hyphen_values = true)]
        tensor: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        #[arg(long, default_value_t = 33)]
        n_theta: usize,
        #[arg(long, default_value_t = 64)]
        n_phi: usize,
    },
    /// Validates an EFG-vs-field table.
    IngestCheck { path: PathBuf },
}

fn resolved(cli: &Cli) -> Result<scenario::Resolved, CliError> {
    let path = cli
        .scenario
        .as_deref()
        .ok_or_else(|| CliError::Config("--scenario is required for this command".into()))?;
    let base = path.parent().unwrap_or(Path::new("."));
    Scenario::load(path)?.resolve(base, cli.unit_mode)
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let report: Report = match &cli.command {
        Command::EfgMesh {
            preset,
            tensor,
            scale,
            n_theta,
            n_phi,
        } => {
            let t = match (preset, tensor) {
                (Some(p), _) => commands::preset_tensor(*p),
                (None, Some(text)) => commands::parse_tensor(text)?,
                (None, None) => {
                    return Err(CliError::Config(
                        "efg-mesh needs --preset or --tensor".into(),
                    ))
                }
            };
            commands::efg_mesh(&t, *scale, *n_theta, *n_phi)?
        }
        Command::IngestCheck { path } => commands::ingest_check(path)?,
        Command::SteadyState => commands::steady_state(&resolved(cli)?)?,
        Command::Pulse => commands::pulse(&resolved(cli)?)?,
        Command::Spectrum => commands::spectrum(&resolved(cli)?)?,
        Command::RabiMap => commands::rabi_map(&resolved(cli)?)?,
        Command::Coupled { model } => commands::coupled(&resolved(cli)?, *model)?,
    };
    for note in &report.notes {
        eprintln!("note: {note}");
    }
    output::emit(&output::render(&report.blocks)?, cli.out.as_deref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.verbose {
        log::LevelFilter::Info
    } else {
        log::LevelFilter::Warn
    };
    env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .init();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
