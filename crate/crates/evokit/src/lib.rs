//! Batched evolutionary computation with deterministic parallelism.
//!
//! The crate stores whole populations as contiguous matrices and implements
//! every algorithm as batched operations over them:
//!
//! - [`batch`]: typed value matrices, float64 fitness matrices, and
//!   [`batch::SolutionBatch`] glueing them together with evaluated flags.
//! - [`rng`]: splittable counter-based random streams; results never depend
//!   on thread scheduling or worker count.
//! - [`problem`]: problem definitions, chunked (optionally rayon-parallel)
//!   batch evaluation, and the sphere / rastrigin / kursawe test functions.
//! - [`pareto`]: fast non-dominated sorting, crowding distance and the
//!   combined front/crowding ordering used for multi-objective truncation.
//! - [`optim`]: Adam and ClipUp gradient followers for distribution updates.
//! - [`es`]: separable-Gaussian search distributions with SNES, CEM and PGPE
//!   steps, plus a distributed mode that averages per-worker gradients.
//! - [`ga`]: tournament selection, two-point crossover, gaussian/bitflip
//!   mutation, and elitist single- and multi-objective generation steps.
//! - [`structures`]: batched fixed-capacity lists and stacks with masked
//!   per-slot operations.
//! - [`gp`]: a stack-based program interpreter that executes an entire
//!   program population in lockstep, plus symbolic-regression fitness.
//!
//! With the default `parallel` feature the batch-level inner loops run on
//! rayon; disabling it yields a dependency-free sequential build that
//! produces bit-identical results.

pub mod batch;
pub mod error;
pub mod es;
pub mod ga;
pub mod gp;
pub mod optim;
pub mod pareto;
pub mod problem;
pub mod rng;
pub mod structures;

pub use batch::{Dtype, EvalMatrix, MatrixData, ObjectiveSense, SolutionBatch, ValueMatrix};
pub use error::{Error, Result};
pub use rng::RngStream;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
