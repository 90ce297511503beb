//! `epdt-lab`: command-line front end for the EPDT numerical laboratory.
//!
//! Every experiment reads a versioned TOML config, validates it fully
//! before computing, and writes deterministic CSV/JSON artifacts: the same
//! config and seed always produce byte-identical outputs.
//!
//! Exit codes: 0 success, 2 validation failure (with a machine-readable
//! JSON error object on stdout), 3 numeric failure.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::RunConfig;
use epdt_core::Error;

#[derive(Parser)]
#[command(name = "epdt-lab", version, about = "Numerical experiments for the semilinear Euler-Poisson-Darboux-Tricomi equation")]
struct Cli {
    /// Path to the TOML run configuration.
    #[arg(long, global = true, default_value = "epdt.toml")]
    config: PathBuf,

    /// Output directory (overridden by EPDT_LAB_OUT).
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Seed for Monte-Carlo draws.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads for internal sweeps.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Spectral constants and critical exponents as JSON.
    Exponents,
    /// Linear 1D: representation formula vs finite-difference oracle.
    Linear,
    /// Monte-Carlo verification of the Kato-type comparison lemma.
    Kato,
    /// Radon transform profiles of radial data.
    Radon,
    /// Lifespan sweep of the semilinear solver over an epsilon grid.
    BlowupSweep,
    /// Iteration sequences and the exponential lifespan bound.
    Iterate,
}

fn is_validation_error(err: &Error) -> bool {
    matches!(
        err,
        Error::InvalidParams(_)
            | Error::NegativeDelta(_)
            | Error::NonpositiveDimension(_)
            | Error::InvalidCriticalCondition(_)
            | Error::ZeroDenominator(_)
            | Error::InvalidC(_)
            | Error::DimensionTooSmall(_)
            | Error::Domain(_)
    )
}

fn report_error(err: &Error) -> ExitCode {
    let kind = if is_validation_error(err) { "validation" } else { "numeric" };
    let obj = serde_json::json!({
        "error": { "kind": kind, "message": err.to_string() }
    });
    println!("{}", serde_json::to_string(&obj).unwrap());
    if is_validation_error(err) {
        ExitCode::from(2)
    } else {
        ExitCode::from(3)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let out = std::env::var_os("EPDT_LAB_OUT")
        .map(PathBuf::from)
        .unwrap_or_else(|| cli.out.clone());

    let text = match std::fs::read_to_string(&cli.config) {
        Ok(t) => t,
        Err(e) => {
            return report_error(&Error::InvalidParams(format!(
                "cannot read config {}: {e}",
                cli.config.display()
            )))
        }
    };
    let cfg = match RunConfig::parse(&text) {
        Ok(c) => c,
        Err(e) => return report_error(&e),
    };
    if let Err(e) = std::fs::create_dir_all(&out) {
        return report_error(&Error::InvalidParams(format!(
            "cannot create output dir {}: {e}",
            out.display()
        )));
    }

    let result = match cli.command {
        Command::Exponents => commands::cmd_exponents(&cfg, &out).map(|_| ()),
        Command::Linear => commands::cmd_linear(&cfg, &out).map(|_| ()),
        Command::Kato => commands::cmd_kato(&cfg, &out, cli.seed).map(|_| ()),
        Command::Radon => commands::cmd_radon(&cfg, &out).map(|_| ()),
        Command::BlowupSweep => commands::cmd_blowup_sweep(&cfg, &out, cli.jobs.max(1)).map(|_| ()),
        Command::Iterate => commands::cmd_iterate(&cfg, &out).map(|_| ()),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => report_error(&e),
    }
}
