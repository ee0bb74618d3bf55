//! `cvent`: simulate, sweep, optimize and validate pulsed two-mode squeezing
//! in a lossy ring cavity.

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cvent::CventError;

use config::{ConfigError, Overrides};

#[derive(Debug, Parser)]
#[command(name = "cvent", version, about = "Entanglement dynamics of pulsed two-mode squeezing in a lossy ring")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Trajectory (t_tilde, u, n1, n2, g, delta_sq) at every step
    Simulate(Overrides),
    /// Minimum variance over a (tau_tilde, zeta) grid
    Sweep(Overrides),
    /// Optimum pulse and coupling with closed-form and numeric minima
    Optimize(Overrides),
    /// Analytic moments against a truncated Fock-space Lindblad solution
    Validate(Overrides),
    /// Pump-off thermal decay, closed form against the integrator
    Decay(Overrides),
}

const EXIT_FAILURE: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_INTEGRATION: u8 = 3;
const EXIT_TRUNCATION: u8 = 4;

fn core_exit_code(e: &CventError) -> u8 {
    match e {
        CventError::Domain(_) | CventError::InvalidParameter { .. } => EXIT_CONFIG,
        CventError::Truncation { .. } => EXIT_TRUNCATION,
        CventError::SweepPoint { source, .. } => core_exit_code(source),
        CventError::PhaseSingularity { .. }
        | CventError::Integration { .. }
        | CventError::EmptyTrajectory
        | CventError::TraceDrift { .. } => EXIT_INTEGRATION,
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<ConfigError>() {
            return EXIT_CONFIG;
        }
        if let Some(e) = cause.downcast_ref::<CventError>() {
            return core_exit_code(e);
        }
    }
    EXIT_FAILURE
}

fn run(command: &Command) -> anyhow::Result<()> {
    let (flags, f): (&Overrides, fn(&config::RunConfig) -> anyhow::Result<output::Table>) = match command {
        Command::Simulate(o) => (o, commands::simulate),
        Command::Sweep(o) => (o, commands::sweep),
        Command::Optimize(o) => (o, commands::optimize),
        Command::Validate(o) => (o, commands::validate),
        Command::Decay(o) => (o, commands::decay),
    };
    let cfg = config::resolve(flags)?;
    let table = f(&cfg)?;
    output::emit(&table, cfg.format, cfg.out.as_deref())?;
    if let Command::Validate(_) = command {
        if let Some(fail) = commands::validation_failure(&table) {
            return Err(fail.into());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
