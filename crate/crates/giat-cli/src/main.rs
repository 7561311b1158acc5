use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use giat_core::Strategy;

use giat_cli::config::ExperimentConfig;
use giat_cli::error::CliError;
use giat_cli::{cmd_compare, cmd_decompose, cmd_dump_indicators};

/// Interaction-based decomposition experiments for black-box optimization.
#[derive(Parser)]
#[command(name = "giat", version)]
struct Cli {
    /// Experiment configuration file (JSON)
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Override the config's output directory
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Override the config's master seed
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose one problem with one strategy
    Decompose {
        /// Problem name from the config
        #[arg(long, value_name = "NAME")]
        problem: String,
        /// FT, FST, CRET, or GIAT
        #[arg(long, value_name = "NAME")]
        strategy: String,
    },
    /// Run every problem under every strategy and write the comparison CSV
    Compare,
    /// Export the sorted indicator array and its quotient gaps
    DumpIndicators {
        /// Problem name from the config
        #[arg(long, value_name = "NAME")]
        problem: String,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config_path = cli
        .config
        .ok_or_else(|| CliError::Usage("--config PATH is required".into()))?;
    let mut config = ExperimentConfig::load(&config_path)?;
    if let Some(out) = cli.out {
        config.output_dir = out;
    }
    if let Some(seed) = cli.seed {
        config.master_seed = seed;
    }
    match cli.command {
        Command::Decompose { problem, strategy } => {
            let strategy: Strategy = strategy
                .parse()
                .map_err(|err: giat_core::Error| CliError::Usage(err.to_string()))?;
            cmd_decompose(&config, &problem, strategy)?;
        }
        Command::Compare => {
            cmd_compare(&config)?;
        }
        Command::DumpIndicators { problem } => {
            cmd_dump_indicators(&config, &problem)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
