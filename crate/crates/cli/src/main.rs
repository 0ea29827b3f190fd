//! `dstrust`: dataset trust assessment from the command line.

mod assess;
mod config;
mod error;
mod eval;
mod input;
mod plot;
mod quantify;
mod report;
mod simulate;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::RunConfig;
use crate::error::CliResult;
use crate::report::emit;

#[derive(Debug, Parser)]
#[command(
    name = "dstrust",
    version,
    about = "Quantify trust in training datasets with Subjective Logic"
)]
struct Cli {
    /// JSON configuration file with `quant`, `bias` and `sim` sections.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Dotted-key override, e.g. `--set bias.eta1=0.03`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    overrides: Vec<String>,
    /// Human-readable summary instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Turn evidence into an opinion.
    Quantify(quantify::QuantifyArgs),
    /// Assess class-balance bias of one or more counts files.
    Assess(assess::AssessArgs),
    /// Sweep imbalanced OEM contributions and emit a CSV.
    Simulate(simulate::SimulateArgs),
    /// Emit plot data (CSV) or a static SVG chart.
    Plot(plot::PlotArgs),
    /// Evaluate a trust proposition over bound sources.
    Eval(eval::EvalArgs),
    /// Fuse two or more opinions.
    Fuse(eval::FuseArgs),
}

fn run(cli: &Cli) -> CliResult<()> {
    let cfg = RunConfig::load(cli.config.as_deref(), &cli.overrides)?;
    let text = match &cli.command {
        Command::Quantify(args) => quantify::run(args, cfg)?.render(cli.pretty),
        Command::Assess(args) => assess::run(args, cfg)?.render(cli.pretty),
        Command::Simulate(args) => simulate::run(args, cfg)?,
        Command::Plot(args) => plot::run(args, &cfg)?,
        Command::Eval(args) => eval::run_eval(args, &cfg)?.render(cli.pretty),
        Command::Fuse(args) => eval::run_fuse(args, &cfg)?.render(cli.pretty),
    };
    emit(&text, cli.out.as_deref())?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
