//! CEM against Adam on classic cost landscapes.
//!
//! Three methods share one initializer stream drawing points elementwise from
//! [-10, 10]:
//!
//! - `cem`: cross-entropy method centered on draw 0;
//! - `adam`: a single Adam gradient descent from draw 0 (analytic gradients);
//! - `adam_parallel`: popsize independent Adam descents from draws
//!   0..popsize. Row 0 repeats the single-Adam trajectory exactly, so its
//!   best-of-population is never worse than the single descent.

use std::time::Instant;

use rand::Rng;

use evokit::es::{cem_step, CemConfig, EsState, SeparableGaussian};
use evokit::optim::AdamState;
use evokit::problem::ProblemSpec;
use evokit::{EvalMatrix, ObjectiveSense, RngStream, SolutionBatch, ValueMatrix};

use crate::config::{CostFunction, RunConfig};
use crate::error::Result;
use crate::logging::LogRecord;
use crate::metrics::{best, mean, median};
use crate::output::MethodRun;

pub fn sphere_gradient(x: &[f64]) -> Vec<f64> {
    x.iter().map(|&v| 2.0 * v).collect()
}

pub fn rastrigin_gradient(x: &[f64]) -> Vec<f64> {
    use std::f64::consts::PI;
    x.iter()
        .map(|&v| 2.0 * v + 20.0 * PI * (2.0 * PI * v).sin())
        .collect()
}

fn cost(function: CostFunction, x: &[f64]) -> f64 {
    match function {
        CostFunction::Sphere => x.iter().map(|v| v * v).sum(),
        CostFunction::Rastrigin => {
            use std::f64::consts::PI;
            10.0 * x.len() as f64
                + x.iter()
                    .map(|&v| v * v - 10.0 * (2.0 * PI * v).cos())
                    .sum::<f64>()
        }
    }
}

fn gradient(function: CostFunction, x: &[f64]) -> Vec<f64> {
    match function {
        CostFunction::Sphere => sphere_gradient(x),
        CostFunction::Rastrigin => rastrigin_gradient(x),
    }
}

pub fn run(cfg: &RunConfig) -> Result<Vec<MethodRun>> {
    let dim = cfg.dim;
    let function = cfg.function.expect("resolved config");
    let spec = match function {
        CostFunction::Sphere => ProblemSpec::sphere(dim)?,
        CostFunction::Rastrigin => ProblemSpec::rastrigin(dim)?,
    }
    .with_workers(cfg.workers)?;

    let root = RngStream::new(cfg.seed);
    let init = root.substream(0);
    let points: Vec<Vec<f64>> = (0..cfg.popsize)
        .map(|r| {
            let mut rr = init.substream(r as u64).rng();
            (0..dim).map(|_| rr.random_range(-10.0..=10.0)).collect()
        })
        .collect();

    let cem = run_cem(cfg, &spec, points[0].clone(), root.substream(1))?;
    let adam = run_adam(cfg, function, &points[..1], "adam")?;
    let adam_parallel = run_adam(cfg, function, &points, "adam_parallel")?;
    Ok(vec![cem, adam, adam_parallel])
}

fn run_cem(
    cfg: &RunConfig,
    spec: &ProblemSpec,
    center: Vec<f64>,
    rng: RngStream,
) -> Result<MethodRun> {
    let stdev = cfg.stdev_init.expect("resolved config");
    let mut es = EsState::new(SeparableGaussian::new(center, vec![stdev; cfg.dim])?);
    let mut cem_cfg = CemConfig::new(cfg.popsize);
    cem_cfg.parenthood_ratio = cfg.parenthood_ratio.expect("resolved config");
    cem_cfg.max_change = cfg.max_change.expect("resolved config");

    let start = Instant::now();
    let mut best_ever = f64::INFINITY;
    let mut records = Vec::with_capacity(cfg.generations);
    let mut finals = None;
    for generation in 1..=cfg.generations {
        let batch = cem_step(&mut es, spec, &cem_cfg, rng)?;
        let status = es.status.as_ref().expect("status after step");
        best_ever = best_ever.min(status.best_eval);
        records.push(LogRecord {
            generation,
            best_eval: status.best_eval,
            mean_eval: status.mean_eval,
            median_eval: status.median_eval,
            best_ever: Some(best_ever),
            elapsed_seconds: start.elapsed().as_secs_f64(),
        });
        finals = Some(batch);
    }
    Ok(MethodRun {
        name: Some("cem"),
        records,
        finals: finals.expect("at least one generation"),
        front_rows: None,
    })
}

/// Independent Adam descents from the given start points; one step per
/// generation. Gradients are analytic, so the method consumes no randomness
/// beyond its initializer.
fn run_adam(
    cfg: &RunConfig,
    function: CostFunction,
    starts: &[Vec<f64>],
    name: &'static str,
) -> Result<MethodRun> {
    let lr = cfg.lr.expect("resolved config");
    let dim = cfg.dim;
    let mut xs: Vec<Vec<f64>> = starts.to_vec();
    let mut opts: Vec<AdamState> = xs.iter().map(|_| AdamState::new(dim, lr)).collect();

    let start = Instant::now();
    let mut best_ever = f64::INFINITY;
    let mut records = Vec::with_capacity(cfg.generations);
    let mut fits: Vec<f64> = xs.iter().map(|x| cost(function, x)).collect();
    for generation in 1..=cfg.generations {
        for (x, opt) in xs.iter_mut().zip(&mut opts) {
            let neg_grad: Vec<f64> = gradient(function, x).iter().map(|g| -g).collect();
            let delta = opt.step(&neg_grad);
            for (xi, di) in x.iter_mut().zip(&delta) {
                *xi += di;
            }
        }
        for (f, x) in fits.iter_mut().zip(&xs) {
            *f = cost(function, x);
        }
        best_ever = best_ever.min(best(&fits, ObjectiveSense::Min));
        records.push(LogRecord {
            generation,
            best_eval: best(&fits, ObjectiveSense::Min),
            mean_eval: mean(&fits),
            median_eval: median(&fits),
            best_ever: Some(best_ever),
            elapsed_seconds: start.elapsed().as_secs_f64(),
        });
    }

    let flat: Vec<f64> = xs.iter().flatten().copied().collect();
    let values = ValueMatrix::from_f64(xs.len(), dim, flat)?;
    let evals = EvalMatrix::from_vec(xs.len(), 1, fits)?;
    let finals = SolutionBatch::from_parts(values, evals, vec![true; xs.len()])?;
    Ok(MethodRun {
        name: Some(name),
        records,
        finals,
        front_rows: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ScenarioKind;
    use std::path::PathBuf;

    fn config(function: CostFunction, popsize: usize, generations: usize) -> RunConfig {
        RunConfig {
            scenario: ScenarioKind::CemVsAdam,
            popsize,
            generations,
            seed: 11,
            workers: 1,
            dim: 6,
            out_dir: PathBuf::from("unused"),
            log_interval: 1,
            stdev_init: None,
            function: Some(function),
            parenthood_ratio: None,
            max_change: None,
            lr: None,
            mutation_stdev: None,
            mutation_prob: None,
        }
        .resolve()
        .unwrap()
    }

    #[test]
    fn analytic_gradients_match_finite_differences() {
        let x = vec![0.3, -1.7, 2.2];
        let h = 1e-6;
        for function in [CostFunction::Sphere, CostFunction::Rastrigin] {
            let g = gradient(function, &x);
            for j in 0..x.len() {
                let mut hi = x.clone();
                let mut lo = x.clone();
                hi[j] += h;
                lo[j] -= h;
                let fd = (cost(function, &hi) - cost(function, &lo)) / (2.0 * h);
                assert!(
                    (g[j] - fd).abs() < 1e-4,
                    "{function:?} coord {j}: analytic {} vs fd {fd}",
                    g[j]
                );
            }
        }
    }

    #[test]
    fn cost_matches_engine_evaluation() {
        let x = vec![0.5, -1.0, 2.0, 0.0, 3.3, -4.1];
        for (function, spec) in [
            (CostFunction::Sphere, ProblemSpec::sphere(6).unwrap()),
            (CostFunction::Rastrigin, ProblemSpec::rastrigin(6).unwrap()),
        ] {
            let values = ValueMatrix::from_f64(1, 6, x.clone()).unwrap();
            let mut batch = SolutionBatch::new(values, 1).unwrap();
            spec.evaluate(&mut batch).unwrap();
            assert_eq!(cost(function, &x), batch.evals().get(0, 0));
        }
    }

    #[test]
    fn produces_three_methods_with_full_records() {
        let out = run(&config(CostFunction::Sphere, 8, 12)).unwrap();
        let names: Vec<_> = out.iter().map(|m| m.name.unwrap()).collect();
        assert_eq!(names, vec!["cem", "adam", "adam_parallel"]);
        for m in &out {
            assert_eq!(m.records.len(), 12);
        }
        assert_eq!(out[1].finals.rows(), 1);
        assert_eq!(out[2].finals.rows(), 8);
    }

    #[test]
    fn initial_points_are_within_bounds_and_popsize_prefix_stable() {
        let root = RngStream::new(11).substream(0);
        let draw = |r: u64| -> Vec<f64> {
            let mut rr = root.substream(r).rng();
            (0..6).map(|_| rr.random_range(-10.0..=10.0)).collect()
        };
        for r in 0..20 {
            assert!(draw(r).iter().all(|v| (-10.0..=10.0).contains(v)));
        }
        // Row k's draw does not depend on how many rows exist.
        assert_eq!(draw(3), draw(3));
    }

    #[test]
    fn parallel_adam_best_is_never_worse_than_single_adam() {
        let out = run(&config(CostFunction::Rastrigin, 6, 30)).unwrap();
        let single = &out[1].records;
        let parallel = &out[2].records;
        for (s, p) in single.iter().zip(parallel) {
            assert!(p.best_eval <= s.best_eval);
        }
        // Row 0 of the parallel finals is exactly the single-Adam endpoint.
        assert_eq!(
            out[2].finals.values().row_f64(0),
            out[1].finals.values().row_f64(0)
        );
    }

    #[test]
    fn adam_converges_on_the_sphere() {
        let out = run(&config(CostFunction::Sphere, 4, 400)).unwrap();
        let first = out[1].records.first().unwrap().best_eval;
        let last = out[1].records.last().unwrap().best_eval;
        assert!(last < 1e-6 * first.max(1.0), "first {first}, last {last}");
    }
}
