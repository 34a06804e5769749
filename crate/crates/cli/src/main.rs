//! Command-line front end: dataset generation, training, evaluation, sweeps,
//! baseline comparisons, the runtime model and oracle verification.

mod commands;
mod manifest;
mod settings;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use settings::Settings;

/// Bad or missing flags; exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Parser)]
#[command(
    name = "vmgbs",
    version,
    about = "Vertex-minor classification with spectra and simulated GBS"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a labeled dataset of (parent, child) pairs.
    GenDataset(Settings),
    /// Train a spectral or sample-based linear SVM.
    Train(Settings),
    /// Classify held-out pairs with repeated trials and majority vote.
    Eval(Settings),
    /// Trials needed for a target accuracy over a squeezing/loss grid.
    Sweep(Settings),
    /// Measured classical time against the modeled photonic time.
    RuntimeModel(Settings),
    /// Spectral classifier against the three kernel baselines.
    Baselines(Settings),
    /// Re-check dataset labels with the exact oracle.
    Verify(Settings),
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<UsageError>().is_some() {
        return 2;
    }
    match e.downcast_ref::<vmgbs::Error>() {
        Some(vmgbs::Error::InvalidArgument(_)) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let run = |s: Settings, f: fn(&Settings) -> anyhow::Result<()>| s.resolve().and_then(|s| f(&s));
    let result = match cli.command {
        Command::GenDataset(s) => run(s, commands::gen_dataset),
        Command::Train(s) => run(s, commands::train),
        Command::Eval(s) => run(s, commands::eval),
        Command::Sweep(s) => run(s, commands::sweep),
        Command::RuntimeModel(s) => run(s, commands::runtime_model),
        Command::Baselines(s) => run(s, commands::baselines),
        Command::Verify(s) => run(s, commands::verify),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
