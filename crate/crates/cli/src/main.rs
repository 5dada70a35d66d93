//! `cosserat`: command-line driver for the micropolar rod library.

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{
    cmd_dispersion, cmd_export_torus, cmd_simulate, cmd_soliton, cmd_verify, DispersionArgs,
    ExportTorusArgs, SimulateArgs, SolitonArgs, VerifyArgs,
};

#[derive(Parser)]
#[command(
    name = "cosserat",
    version,
    about = "Micropolar rod mechanics: traveling waves, reduced wave dynamics, \
             dispersion tables, self-verification, and plot-data export"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the closed-form traveling wave on a (z, t) lattice
    Soliton(SolitonArgs),
    /// Integrate the reduced wave system, writing snapshots and diagnostics
    Simulate(SimulateArgs),
    /// Tabulate wave number against speed with admissibility and residuals
    Dispersion(DispersionArgs),
    /// Run the self-verification suite, one JSON report per line
    Verify(VerifyArgs),
    /// Re-emit a snapshot as (z, rotation angle, axial displacement) rows
    ExportTorus(ExportTorusArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Soliton(args) => cmd_soliton(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Dispersion(args) => cmd_dispersion(args),
        Command::Verify(args) => cmd_verify(args),
        Command::ExportTorus(args) => cmd_export_torus(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
