//! `langmuir-mc`: kernels, mean responses, BER runs and sweeps from the
//! command line. Every run writes its outputs plus a `manifest.toml` that
//! `replay` (or `--config`) can reproduce byte for byte.

mod commands;
mod config;
mod error;
mod manifest;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use langmuir_mc::export::Format;

use crate::commands::{Command, Runtime};
use crate::config::{parse_override, Config};
use crate::error::CliError;

#[derive(Parser)]
#[command(name = "langmuir-mc", version, about = "Molecular-communication receiver simulator")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed (experiment.seed).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Output format: csv or jsonl.
    #[arg(long, global = true)]
    format: Option<String>,
    /// Override any config value, e.g. `--set pulse.t_b=30`. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE", value_parser = parse_override)]
    overrides: Vec<(String, String)>,
}

#[derive(Subcommand)]
enum Sub {
    /// Single-pulse response kernels (exact, SP, LP) on a time grid.
    Kernel,
    /// Mean response to a symbol string, with the per-symbol trace.
    Respond {
        /// Symbol string such as 1011 (respond.symbols).
        #[arg(long)]
        symbols: Option<String>,
    },
    /// Monte-Carlo bit-error rate at one operating point.
    Ber {
        /// Also write per-symbol decisions.
        #[arg(long)]
        decisions: bool,
    },
    /// BER over one parameter axis, one curve per pulse duration.
    Sweep {
        /// Worker threads; 0 uses all cores. Does not change results.
        #[arg(long, default_value_t = 0)]
        shards: usize,
    },
    /// Re-run the command recorded in a manifest.
    Replay {
        manifest: PathBuf,
        #[arg(long, default_value_t = 0)]
        shards: usize,
    },
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let g = cli.global;
    let mut overrides = Vec::new();
    if let Some(seed) = g.seed {
        overrides.push(("experiment.seed".to_string(), seed.to_string()));
    }
    if let Some(format) = &g.format {
        format.parse::<Format>().map_err(|e| CliError::config("--format", e))?;
        overrides.push(("output.format".to_string(), format!("{format:?}")));
    }
    let (command, text, rt) = match &cli.command {
        Sub::Replay { manifest, shards } => {
            let text = read(manifest)?;
            let parsed = Config::load(&text, &[])?;
            let run = parsed
                .run
                .ok_or_else(|| CliError::Config(format!("{}: no [run] section", manifest.display())))?;
            let command = Command::from_name(&run.command)
                .ok_or_else(|| CliError::Config(format!("run.command: unknown command {:?}", run.command)))?;
            (command, text, Runtime { shards: *shards })
        }
        other => {
            let text = match &g.config {
                Some(path) => read(path)?,
                None => String::new(),
            };
            let (command, rt) = match other {
                Sub::Kernel => (Command::Kernel, Runtime::default()),
                Sub::Respond { symbols } => {
                    if let Some(s) = symbols {
                        overrides.push(("respond.symbols".into(), format!("{s:?}")));
                    }
                    (Command::Respond, Runtime::default())
                }
                Sub::Ber { decisions } => {
                    if *decisions {
                        overrides.push(("output.decisions".into(), "true".into()));
                    }
                    (Command::Ber, Runtime::default())
                }
                Sub::Sweep { shards } => (Command::Sweep, Runtime { shards: *shards }),
                Sub::Replay { .. } => unreachable!(),
            };
            (command, text, rt)
        }
    };
    overrides.extend(g.overrides);
    let config = Config::load(&text, &overrides)?.resolved();
    commands::run(command, &config, &g.out, rt)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("langmuir-mc: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
