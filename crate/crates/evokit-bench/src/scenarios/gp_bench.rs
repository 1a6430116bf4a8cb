//! Genetic programming on the vectorized interpreter: evolves integer opcode
//! genomes against the built-in symbolic-regression task. `--dim` is the
//! program length. Timing columns in run.csv expose the interpreter's
//! population scaling.

use std::sync::Arc;
use std::time::Instant;

use rand::Rng;

use evokit::ga::{ga_step_single, GaConfig, Operator, TwoPointCrossover};
use evokit::gp::SymbolicRegression;
use evokit::problem::ProblemSpec;
use evokit::{Dtype, Error, ObjectiveSense, RngStream, ValueMatrix};

use crate::config::RunConfig;
use crate::error::Result;
use crate::logging::LogRecord;
use crate::metrics::{best, mean, median};
use crate::output::MethodRun;

/// Replaces each symbol with probability `prob` by a uniformly drawn opcode.
/// The genome dtype must be Int64; draws use one substream per row so results
/// are independent of worker count and batch layout.
#[derive(Clone, Debug)]
pub struct OpcodeMutation {
    pub prob: f64,
}

/// Opcodes range over 0..=6 (Pad through Div).
const MAX_OPCODE: i64 = 6;

impl Operator for OpcodeMutation {
    fn apply(&self, parents: &ValueMatrix, rng: RngStream) -> evokit::Result<ValueMatrix> {
        if !(0.0..=1.0).contains(&self.prob) {
            return Err(Error::Range(format!(
                "mutation probability must be in [0, 1], got {}",
                self.prob
            )));
        }
        if parents.dtype() != Dtype::Int64 {
            return Err(Error::Contract(format!(
                "opcode mutation needs Int64 genomes, got {:?}",
                parents.dtype()
            )));
        }
        let rows = parents.rows();
        let cols = parents.cols();
        let mut out = parents.clone();
        let data = out.i64_data_mut().expect("checked dtype");
        for r in 0..rows {
            let mut rr = rng.substream(r as u64).rng();
            for c in 0..cols {
                let u: f64 = rr.random();
                if u < self.prob {
                    data[r * cols + c] = rr.random_range(0..=MAX_OPCODE);
                }
            }
        }
        Ok(out)
    }
}

pub fn run(cfg: &RunConfig) -> Result<Vec<MethodRun>> {
    let program_length = cfg.dim;
    let prob = cfg.mutation_prob.expect("resolved config");
    let spec = ProblemSpec::new(
        vec![ObjectiveSense::Min],
        program_length,
        Dtype::Int64,
        Arc::new(SymbolicRegression::benchmark_default()),
    )?
    .with_bounds(0.0, MAX_OPCODE as f64)?
    .with_workers(cfg.workers)?;

    let root = RngStream::new(cfg.seed);
    let mut pop = spec.generate_batch(cfg.popsize, root.substream(0))?;
    spec.evaluate(&mut pop)?;

    let mut ga = GaConfig::new(cfg.popsize);
    ga.operators.push(Box::new(TwoPointCrossover));
    ga.operators.push(Box::new(OpcodeMutation { prob }));

    let steps = root.substream(1);
    let start = Instant::now();
    let mut best_ever = f64::INFINITY;
    let mut records = Vec::with_capacity(cfg.generations);
    for generation in 1..=cfg.generations {
        pop = ga_step_single(&pop, &spec, &ga, steps.substream(generation as u64))?;
        let fit = pop.evals().column(0)?;
        let gen_best = best(&fit, ObjectiveSense::Min);
        best_ever = best_ever.min(gen_best);
        records.push(LogRecord {
            generation,
            best_eval: gen_best,
            mean_eval: mean(&fit),
            median_eval: median(&fit),
            best_ever: Some(best_ever),
            elapsed_seconds: start.elapsed().as_secs_f64(),
        });
    }

    Ok(vec![MethodRun {
        name: None,
        records,
        finals: pop,
        front_rows: None,
    }])
}
