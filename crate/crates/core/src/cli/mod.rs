//! `spinconc` command-line frontend.
//!
//! Exit codes: 0 success, 2 usage or domain error, 3 I/O error.

mod report;

use std::fs;
use std::io::{self, Write as _};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::analysis::{self, AnalysisError};
use crate::protocol::{self, GhzSpec, PairSpec, ProtocolError, RoundOutcome, Sampler};

use report::Report;
pub use report::{CurveReport, Format, IterateRow, RoundReport};

#[derive(Debug, Parser)]
#[command(
    name = "spinconc",
    version,
    about = "Charge-detection entanglement concentration for electron spin pairs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one sampled concentration round.
    Round(RoundArgs),
    /// Table of the coefficient recursion and per-round success probability.
    Iterate(IterateArgs),
    /// Iterated yield against the single-round baseline.
    Yield(IterateArgs),
    /// Seeded Monte Carlo over full state-vector trajectories.
    MonteCarlo(MonteCarloArgs),
    /// One sampled round on an n-party GHZ-class source.
    Ghz(GhzArgs),
    /// Sweep |alpha|² over equispaced points in (0, 1).
    Curve(CurveArgs),
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RoundArgs {
    #[arg(long, value_parser = parse_alpha)]
    pub alpha: f64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct IterateArgs {
    #[arg(long, value_parser = parse_alpha)]
    pub alpha: f64,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_rounds: u32,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct MonteCarloArgs {
    #[arg(long, value_parser = parse_alpha)]
    pub alpha: f64,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_rounds: u32,
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct GhzArgs {
    #[arg(long, value_parser = parse_alpha)]
    pub alpha: f64,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(2..))]
    pub parties: u32,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[arg(long, default_value_t = 99, value_parser = clap::value_parser!(u32).range(1..))]
    pub points: u32,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_rounds: u32,
    #[command(flatten)]
    pub out: OutputArgs,
}

fn parse_alpha(raw: &str) -> Result<f64, String> {
    let alpha: f64 = raw.parse().map_err(|e| format!("{e}"))?;
    if alpha > 0.0 && alpha < 1.0 {
        Ok(alpha)
    } else {
        Err(format!("alpha must lie strictly inside (0, 1), got {raw}"))
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 3,
            _ => 2,
        }
    }
}

impl Command {
    fn output(&self) -> &OutputArgs {
        match self {
            Command::Round(a) => &a.out,
            Command::Iterate(a) | Command::Yield(a) => &a.out,
            Command::MonteCarlo(a) => &a.out,
            Command::Ghz(a) => &a.out,
            Command::Curve(a) => &a.out,
        }
    }
}

fn round_report(alpha: f64, parties: usize, seed: u64) -> Result<RoundReport, CliError> {
    let pair = PairSpec::from_real_alpha(alpha)?;
    let spec = GhzSpec::all_up(parties, pair)?;
    let mut rng = analysis::trial_rng(seed, 0);
    let run = protocol::run_ghz_round_with(&spec, &mut Sampler::new(&mut rng))?;
    let mut report = RoundReport {
        parties,
        alpha,
        beta: pair.beta().re,
        seed,
        outcome: "success",
        success_probability: run.success_probability,
        branch_probability: run.outcome.branch_probability(),
        correction: run.outcome.correction(),
        fidelity: None,
        new_alpha: None,
        new_beta: None,
    };
    match &run.outcome {
        RoundOutcome::Success { state, .. } => {
            let target = protocol::ghz_target(&spec)?;
            report.fidelity = Some(state.fidelity(&target).map_err(ProtocolError::from)?);
        }
        RoundOutcome::Failure { spec, .. } => {
            report.outcome = "failure";
            report.new_alpha = Some(spec.alpha().norm());
            report.new_beta = Some(spec.beta().norm());
        }
    }
    Ok(report)
}

fn build(command: &Command) -> Result<Report, CliError> {
    Ok(match command {
        Command::Round(a) => Report::Round(round_report(a.alpha, 2, a.seed)?),
        Command::Ghz(a) => Report::Round(round_report(a.alpha, a.parties as usize, a.seed)?),
        Command::Iterate(a) => {
            let report = analysis::iterated_yield(a.alpha * a.alpha, a.max_rounds as usize)?;
            Report::Iterate(
                report
                    .per_round
                    .iter()
                    .map(|r| IterateRow {
                        round: r.round,
                        s: r.s,
                        p: r.p,
                    })
                    .collect(),
            )
        }
        Command::Yield(a) => Report::Yield(analysis::iterated_yield(
            a.alpha * a.alpha,
            a.max_rounds as usize,
        )?),
        Command::Curve(a) => Report::Curve(CurveReport {
            max_rounds: a.max_rounds as usize,
            points: analysis::yield_curve(a.points as usize, a.max_rounds as usize)?,
        }),
        Command::MonteCarlo(a) => Report::MonteCarlo(analysis::monte_carlo(
            a.alpha * a.alpha,
            a.trials,
            a.max_rounds as usize,
            a.seed,
        )?),
    })
}

/// Renders the report for `cli` without writing it anywhere.
pub fn render(cli: &Cli) -> Result<String, CliError> {
    let command = &cli.command;
    Ok(build(command)?.render(command.output().format)?)
}

/// Runs a parsed command, writing to `--output` or standard output.
pub fn execute(cli: &Cli) -> Result<(), CliError> {
    let text = render(cli)?;
    match &cli.command.output().output {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}
