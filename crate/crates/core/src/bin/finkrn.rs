use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use finkrn::experiment::{run, validate, ConfigError, ExperimentConfig};

#[derive(Parser)]
#[command(name = "finkrn", version, about = "Seeded experiments on finite Markov kernels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a TOML config.
    Run { config: PathBuf },
    /// Check a config without running it.
    Validate { config: PathBuf },
    /// Run a built-in canonical config.
    Demo { name: String },
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cmd: Command) -> Result<ExitCode, ConfigError> {
    let cfg = match cmd {
        Command::Validate { config } => {
            println!("ok: {}", validate(&config)?);
            return Ok(ExitCode::SUCCESS);
        }
        Command::Run { config } => ExperimentConfig::from_file(&config)?,
        Command::Demo { name } => ExperimentConfig::demo_by_name(&name)?,
    };
    let (outcome, path) = run(&cfg)?;
    println!("{}: {} -> {}", cfg.experiment, outcome.verdict, path.display());
    Ok(if outcome.verdict.is_success() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}
