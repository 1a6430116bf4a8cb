//! NSGA-II on the Kursawe two-objective problem (three decision variables in
//! [-5, 5]). Logs objective-0 population statistics per generation and keeps
//! the final non-dominated front for `front.csv`.

use std::time::Instant;

use evokit::ga::{ga_step_multi, GaConfig, GaussianMutation, TwoPointCrossover};
use evokit::pareto::non_dominated_sort;
use evokit::problem::ProblemSpec;
use evokit::{ObjectiveSense, RngStream};

use crate::config::RunConfig;
use crate::error::Result;
use crate::logging::LogRecord;
use crate::metrics::{best, mean, median};
use crate::output::MethodRun;

pub fn run(cfg: &RunConfig) -> Result<Vec<MethodRun>> {
    let mutation_stdev = cfg.mutation_stdev.expect("resolved config");
    let spec = ProblemSpec::kursawe()?
        .with_bounds(-5.0, 5.0)?
        .with_workers(cfg.workers)?;

    let root = RngStream::new(cfg.seed);
    let mut pop = spec.generate_batch(cfg.popsize, root.substream(0))?;
    spec.evaluate(&mut pop)?;

    let mut ga = GaConfig::new(cfg.popsize);
    ga.operators.push(Box::new(TwoPointCrossover));
    ga.operators.push(Box::new(GaussianMutation {
        stdev: mutation_stdev,
    }));

    let steps = root.substream(1);
    let start = Instant::now();
    let mut records = Vec::with_capacity(cfg.generations);
    for generation in 1..=cfg.generations {
        pop = ga_step_multi(&pop, &spec, &ga, steps.substream(generation as u64))?;
        let f0 = pop.evals().column(0)?;
        records.push(LogRecord {
            generation,
            best_eval: best(&f0, ObjectiveSense::Min),
            mean_eval: mean(&f0),
            median_eval: median(&f0),
            best_ever: None,
            elapsed_seconds: start.elapsed().as_secs_f64(),
        });
    }

    let fronts = non_dominated_sort(pop.evals(), spec.senses())?;
    let front_rows = fronts.fronts[0].clone();
    Ok(vec![MethodRun {
        name: None,
        records,
        finals: pop,
        front_rows: Some(front_rows),
    }])
}
