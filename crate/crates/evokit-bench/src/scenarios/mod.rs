//! Benchmark scenarios. Each scenario turns a resolved [`RunConfig`] into
//! one [`MethodRun`] per method; file writing and stdout logging live in the
//! CLI layer so the scenarios stay directly testable.
//!
//! All randomness flows from `RngStream::new(seed)`: substream 0 initializes
//! the search (centers/populations), substream 1 drives the per-generation
//! steps. Initialization draws use popsize-independent substreams where the
//! paper's setup calls for comparable starts across population sizes.

mod cem_adam;
mod gp_bench;
mod kursawe;
mod rastrigin_snes;

pub use cem_adam::{rastrigin_gradient, sphere_gradient};
pub use gp_bench::OpcodeMutation;

use crate::config::{RunConfig, ScenarioKind};
use crate::error::Result;
use crate::output::MethodRun;

pub fn run_scenario(cfg: &RunConfig) -> Result<Vec<MethodRun>> {
    match cfg.scenario {
        ScenarioKind::RastriginSnes => rastrigin_snes::run(cfg),
        ScenarioKind::CemVsAdam => cem_adam::run(cfg),
        ScenarioKind::KursaweNsga2 => kursawe::run(cfg),
        ScenarioKind::GpBench => gp_bench::run(cfg),
    }
}
