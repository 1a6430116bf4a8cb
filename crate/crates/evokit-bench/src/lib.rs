//! Benchmark scenarios, output formats and metrics for the evokit engine.
//!
//! The `evokit` binary in this crate wraps [`scenarios::run_scenario`] with
//! argument parsing, stdout progress logging and the on-disk output layout
//! (`run.csv`, `final.csv`, `front.csv`, `meta.json`, `plot.svg`). Everything
//! the binary does is reachable through this library so scenarios and file
//! formats can be exercised in-process by tests.

pub mod config;
pub mod csvio;
pub mod error;
pub mod logging;
pub mod metrics;
pub mod output;
pub mod plot;
pub mod scenarios;

pub use config::{CostFunction, RunConfig, ScenarioKind};
pub use error::{BenchError, Result};
pub use logging::{LogRecord, StdoutLogger};
pub use output::{MetaFile, MethodRun};
