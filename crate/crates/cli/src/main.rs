//! `hyperbalance` — balanced allocations, densest subgraphs and the
//! local-limit machinery from the command line.
//!
//! Every run writes into `<out>/<command>/<tag>/` together with a
//! `manifest.json` echoing the full configuration. Outputs are a pure
//! function of inputs, flags and seed.

mod commands;
mod experiments;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hyperbalance::exec::Exec;

#[derive(Parser, Debug)]
#[command(name = "hyperbalance", version, about = "Balanced loads on hypergraphs and their local limits")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Global {
    /// Base seed for every random choice.
    #[arg(long, global = true, env = "HYPERBALANCE_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; 1 runs everything sequentially.
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,
    /// Root of the output tree.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Run directory name (default: hash of the configuration).
    #[arg(long, global = true)]
    pub tag: Option<String>,
}

impl Global {
    pub fn exec(&self) -> Exec {
        Exec::from_workers(self.workers)
    }
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Balanced (or ε-balanced) allocation of a hypergraph.
    Balance(commands::BalanceArgs),
    /// Maximum load: densest subgraph or balanced allocation.
    Maxload(commands::MaxloadArgs),
    /// Draw a configuration-model hypergraph or a Galton-Watson hypertree.
    Sample(commands::SampleArgs),
    /// Local census distance between erased configuration samples and UGWT(P).
    Lwc(experiments::LwcArgs),
    /// Fixed-point pools, mean excess and limiting maximum load of UGWT(P).
    Rde(experiments::RdeArgs),
    /// Finite maximum loads against the limiting value over an n-grid.
    ExperimentMaxload(experiments::MaxloadExperimentArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Balance(_) => "balance",
            Command::Maxload(_) => "maxload",
            Command::Sample(_) => "sample",
            Command::Lwc(_) => "lwc",
            Command::Rde(_) => "rde",
            Command::ExperimentMaxload(_) => "experiment-maxload",
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MaxloadMethod {
    Brute,
    Flow,
    Allocation,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    Config,
    Ugwt,
    Gwtk,
}

/// A statistical check requested with `--assert` did not hold.
#[derive(Debug)]
pub struct AssertionFailed(pub String);

impl std::fmt::Display for AssertionFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "assertion failed: {}", self.0)
    }
}

impl std::error::Error for AssertionFailed {}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<AssertionFailed>().is_some() {
        return 3;
    }
    match err.downcast_ref::<hyperbalance::Error>() {
        Some(hyperbalance::Error::NoConvergence { .. }) => 2,
        _ => 1,
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    Exec::init_workers(cli.global.workers);
    let name = cli.command.name();
    let mut run = output::RunDir::create(&cli.global, name, &cli.command)?;
    let g = &cli.global;
    let result = match &cli.command {
        Command::Balance(a) => commands::balance(a, g, &mut run),
        Command::Maxload(a) => commands::maxload(a, g, &mut run),
        Command::Sample(a) => commands::sample(a, g, &mut run),
        Command::Lwc(a) => experiments::lwc(a, g, &mut run),
        Command::Rde(a) => experiments::rde(a, g, &mut run),
        Command::ExperimentMaxload(a) => experiments::experiment_maxload(a, g, &mut run),
    };
    run.finish(&cli.global, name, &cli.command, result.as_ref().err())?;
    result
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
