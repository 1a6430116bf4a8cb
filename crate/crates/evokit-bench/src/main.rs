//! `evokit` CLI: run benchmark scenarios, render plots, reproduce runs.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 invalid configuration
//! (including argument parse errors).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use evokit_bench::config::{CostFunction, RunConfig, ScenarioKind};
use evokit_bench::error::{BenchError, Result};
use evokit_bench::logging::StdoutLogger;
use evokit_bench::output::{read_meta, write_outputs};
use evokit_bench::plot::svg_convergence_plot;
use evokit_bench::scenarios::run_scenario;

#[derive(Parser)]
#[command(name = "evokit", version, about = "Benchmark harness for the evokit engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a benchmark scenario and write its outputs.
    Bench(BenchArgs),
    /// Render a convergence plot from an existing run.csv.
    Plot {
        /// Path to a run.csv file.
        #[arg(long)]
        run: PathBuf,
        /// Output SVG path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-run a scenario from a previously written meta.json.
    Rerun {
        /// Path to a meta.json file.
        #[arg(long)]
        meta: PathBuf,
        /// Output directory override (defaults to the one in meta.json).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct BenchArgs {
    /// Scenario to run.
    #[arg(value_enum)]
    scenario: ScenarioKind,
    /// Population size.
    #[arg(long)]
    popsize: usize,
    /// Number of generations.
    #[arg(long)]
    generations: usize,
    /// Random seed.
    #[arg(long)]
    seed: u64,
    /// Evaluation workers (overridden by EVOKIT_THREADS when set).
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Problem dimensionality (program length for gp-bench). Defaults per
    /// scenario: 100 / 100 / 3 / 20.
    #[arg(long)]
    dim: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Print a progress line every N generations (the final one always).
    #[arg(long, default_value_t = 1)]
    log_interval: usize,
    /// Initial search stdev (rastrigin-snes, cem-vs-adam).
    #[arg(long)]
    stdev_init: Option<f64>,
    /// Cost function for cem-vs-adam.
    #[arg(long, value_enum)]
    function: Option<CostFunction>,
    /// CEM parenthood ratio (cem-vs-adam).
    #[arg(long)]
    parenthood_ratio: Option<f64>,
    /// CEM max relative sigma change (cem-vs-adam).
    #[arg(long)]
    max_change: Option<f64>,
    /// Adam step size (cem-vs-adam).
    #[arg(long)]
    lr: Option<f64>,
    /// Gaussian mutation stdev (kursawe-nsga2).
    #[arg(long)]
    mutation_stdev: Option<f64>,
    /// Opcode mutation probability (gp-bench).
    #[arg(long)]
    mutation_prob: Option<f64>,
}

impl BenchArgs {
    fn into_config(self) -> RunConfig {
        RunConfig {
            dim: self.dim.unwrap_or_else(|| self.scenario.default_dim()),
            scenario: self.scenario,
            popsize: self.popsize,
            generations: self.generations,
            seed: self.seed,
            workers: self.workers,
            out_dir: self.out,
            log_interval: self.log_interval,
            stdev_init: self.stdev_init,
            function: self.function,
            parenthood_ratio: self.parenthood_ratio,
            max_change: self.max_change,
            lr: self.lr,
            mutation_stdev: self.mutation_stdev,
            mutation_prob: self.mutation_prob,
        }
    }
}

fn apply_thread_override(cfg: &mut RunConfig) -> Result<()> {
    if let Ok(raw) = std::env::var("EVOKIT_THREADS") {
        let n: usize = raw.trim().parse().map_err(|_| {
            BenchError::Config(format!("EVOKIT_THREADS must be a positive integer, got {raw:?}"))
        })?;
        if n < 1 {
            return Err(BenchError::Config(
                "EVOKIT_THREADS must be a positive integer, got 0".into(),
            ));
        }
        cfg.workers = n;
    }
    Ok(())
}

fn execute(cfg: &RunConfig) -> Result<()> {
    let methods = run_scenario(cfg)?;
    let logger = StdoutLogger::new(cfg.log_interval);
    for m in &methods {
        if let Some(name) = m.name {
            println!("# method={name}");
        }
        for record in &m.records {
            logger.log(record, cfg.generations);
        }
    }
    write_outputs(cfg, &methods)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Bench(args) => {
            let mut cfg = args.into_config();
            apply_thread_override(&mut cfg)?;
            let cfg = cfg.resolve()?;
            execute(&cfg)
        }
        Command::Plot { run, out } => svg_convergence_plot(&run, &out),
        Command::Rerun { meta, out } => {
            let mut meta = read_meta(&meta)?;
            if let Some(out) = out {
                meta.config.out_dir = out;
            }
            apply_thread_override(&mut meta.config)?;
            let cfg = meta.config.resolve()?;
            execute(&cfg)
        }
    }
}

fn main() -> ExitCode {
    // Clap itself exits with code 2 on usage errors, matching the config
    // error convention here.
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
