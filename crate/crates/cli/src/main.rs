use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cmop_cli::{emit_delta_report, emit_erd_report, run_experiment, ExperimentConfig, Grouping, RunOptions, Store};
use cmop_core::indicators::hypervolume;
use cmop_core::oracle::monte_carlo_hypervolume;
use cmop_core::{make_targets, Error, Registry, Result, RngStream};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "cmop",
    version,
    about = "Runtime-profile benchmarking of constrained multiobjective optimizers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Registered problems.
    Problems {
        #[command(subcommand)]
        action: ProblemsAction,
    },
    /// Print the target values of a problem as CSV.
    Targets {
        problem: String,
        #[arg(long, default_value_t = 5)]
        dim: usize,
    },
    /// Run every cell of an experiment configuration.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `output` of the configuration.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
        /// Recompute cells that are already complete.
        #[arg(long)]
        force: bool,
        /// Overrides `master_seed` of the configuration.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Write runtime distribution curves and plots into a store.
    Erd {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = GroupingArg::Problem)]
        grouping: GroupingArg,
    },
    /// Write pairwise algorithm differences into a store.
    Delta {
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare the exact hypervolume of a sampled front with a Monte-Carlo
    /// estimate.
    Oracle {
        problem: String,
        #[arg(long, default_value_t = 5)]
        dim: usize,
        #[arg(long, default_value_t = 10_000)]
        points: usize,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum ProblemsAction {
    List,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupingArg {
    Problem,
    Suite,
}

fn dispatch(command: Command) -> Result<bool> {
    let registry = Registry::with_builtins();
    let mut stdout = std::io::stdout().lock();
    match command {
        Command::Problems {
            action: ProblemsAction::List,
        } => {
            for name in registry.names() {
                writeln!(stdout, "{name}")?;
            }
        }
        Command::Targets { problem, dim } => {
            let definition = registry.get(&problem, dim)?;
            make_targets(definition.meta())?.write_csv(stdout)?;
        }
        Command::Run {
            config,
            out,
            workers,
            force,
            seed,
        } => {
            let mut config = ExperimentConfig::load(&config)?;
            if let Some(out) = out {
                config.output = out;
            }
            if let Some(seed) = seed {
                config.master_seed = seed;
            }
            let (store, summary) = run_experiment(&config, &registry, &RunOptions { force, workers })?;
            let incomplete = store.manifest.incomplete();
            let report = json!({
                "executed": summary.executed,
                "skipped": summary.skipped,
                "failed": summary.failed,
                "incomplete": incomplete,
            });
            writeln!(stdout, "{report}")?;
            if summary.failed > 0 {
                let err = json!({
                    "error": "incomplete",
                    "message": format!("{} cells failed", summary.failed),
                    "cells": incomplete,
                });
                eprintln!("{err}");
                return Ok(false);
            }
        }
        Command::Erd { out, grouping } => {
            let mut store = Store::open(&out)?;
            let grouping = match grouping {
                GroupingArg::Problem => Grouping::Problem,
                GroupingArg::Suite => Grouping::Suite,
            };
            for f in emit_erd_report(&mut store, grouping)? {
                writeln!(stdout, "{f}")?;
            }
        }
        Command::Delta { out } => {
            let mut store = Store::open(&out)?;
            for f in emit_delta_report(&mut store)? {
                writeln!(stdout, "{f}")?;
            }
        }
        Command::Oracle {
            problem,
            dim,
            points,
            samples,
            seed,
        } => {
            let definition = registry.get(&problem, dim)?;
            let meta = definition.meta();
            let front = definition
                .front_sample(points)
                .ok_or_else(|| Error::Unsupported(format!("{problem} has no front sampler")))?;
            let exact = hypervolume(&front, meta.n_obj)?;
            let mc = monte_carlo_hypervolume(&front, meta.n_obj, samples, &mut RngStream::new(seed))?;
            let report = json!({
                "problem": problem,
                "dim": dim,
                "points": front.len(),
                "reference": meta.hv_ref,
                "exact": exact,
                "monte_carlo": mc,
                "within_3_se": mc.agrees(exact, 3.0),
            });
            writeln!(stdout, "{report}")?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match dispatch(Cli::parse().command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{}", json!({ "error": e.kind(), "message": e.to_string() }));
            ExitCode::from(2)
        }
    }
}
