//! Reproducible experiment runner for besovkit: builds domains from JSON
//! configs, evaluates norms, runs extensions and writes CSV/JSON reports.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod functions;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use commands::RunOptions;
pub use config::ExperimentConfig;
pub use error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "besovkit",
    version,
    about = "Function-space numerics on finite metric measure spaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Norm table for every configured function.
    Norms(CommonArgs),
    /// Whitney extension from S to the whole domain.
    Extend(CommonArgs),
    /// Measure density report for S.
    Density(CommonArgs),
    /// K-functional profiles.
    Kfunc(CommonArgs),
    /// Lorentz embedding check.
    Embed(CommonArgs),
}

#[derive(Debug, Clone, clap::Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Overrides the seed stored in the config.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Extra grid refinements (spacing halved per level).
    #[arg(long, default_value_t = 0)]
    pub refine: u32,
}

type Handler = fn(ExperimentConfig, &RunOptions) -> Result<Vec<PathBuf>, CliError>;

/// Runs one subcommand; returns the files written.
pub fn run(command: &Command) -> Result<Vec<PathBuf>, CliError> {
    let (args, f): (&CommonArgs, Handler) = match command {
        Command::Norms(a) => (a, commands::cmd_norms),
        Command::Extend(a) => (a, commands::cmd_extend),
        Command::Density(a) => (a, commands::cmd_density),
        Command::Kfunc(a) => (a, commands::cmd_kfunc),
        Command::Embed(a) => (a, commands::cmd_embed),
    };
    let cfg = ExperimentConfig::load(&args.config)?;
    let opts = RunOptions {
        out: args.out.clone(),
        seed: args.seed,
        refine: args.refine,
    };
    f(cfg, &opts)
}
