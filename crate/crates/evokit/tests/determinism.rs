//! End-to-end determinism: repeated runs with the same seed are bit-identical,
//! and evaluation results never depend on the worker count.

use evokit::es::{distributed_step, snes_step, DistributedAlgo, EsState, SeparableGaussian, SnesConfig};
use evokit::ga::{ga_step_multi, GaConfig, GaussianMutation, TwoPointCrossover};
use evokit::problem::ProblemSpec;
use evokit::RngStream;

#[test]
fn repeated_snes_runs_are_bit_identical() {
    let spec = ProblemSpec::rastrigin(8).unwrap();
    let cfg = SnesConfig::new(16, 8);
    let run = || {
        let mut state =
            EsState::new(SeparableGaussian::new(vec![2.0; 8], vec![1.0; 8]).unwrap());
        let mut trajectory = Vec::new();
        for _ in 0..20 {
            snes_step(&mut state, &spec, &cfg, RngStream::new(31)).unwrap();
            trajectory.push(state.dist.clone());
        }
        trajectory
    };
    assert_eq!(run(), run());
}

#[test]
fn repeated_distributed_runs_are_bit_identical() {
    let spec = ProblemSpec::sphere(6).unwrap();
    let run = || {
        let mut state =
            EsState::new(SeparableGaussian::new(vec![1.0; 6], vec![1.0; 6]).unwrap());
        for _ in 0..10 {
            distributed_step(
                &mut state,
                &spec,
                4,
                &DistributedAlgo::Snes(SnesConfig::new(8, 6)),
                None,
                RngStream::new(77),
            )
            .unwrap();
        }
        state.dist.clone()
    };
    assert_eq!(run(), run());
}

#[test]
fn repeated_nsga2_runs_are_bit_identical() {
    let spec = ProblemSpec::kursawe()
        .unwrap()
        .with_bounds(-5.0, 5.0)
        .unwrap();
    let run = || {
        let mut pop = spec.generate_batch(20, RngStream::new(3)).unwrap();
        spec.evaluate(&mut pop).unwrap();
        let mut cfg = GaConfig::new(20);
        cfg.operators.push(Box::new(TwoPointCrossover));
        cfg.operators.push(Box::new(GaussianMutation { stdev: 0.2 }));
        for gen in 0..10 {
            pop = ga_step_multi(&pop, &spec, &cfg, RngStream::new(4).substream(gen)).unwrap();
        }
        pop
    };
    assert_eq!(run(), run());
}

#[test]
fn large_batch_evaluation_is_worker_count_invariant() {
    let base = ProblemSpec::rastrigin(32)
        .unwrap()
        .with_bounds(-5.12, 5.12)
        .unwrap();
    let mut outputs = Vec::new();
    for workers in [1usize, 2, 4, 8] {
        let spec = base.clone().with_workers(workers).unwrap();
        let mut batch = spec.generate_batch(1000, RngStream::new(62)).unwrap();
        spec.evaluate(&mut batch).unwrap();
        outputs.push(batch);
    }
    for other in &outputs[1..] {
        assert_eq!(&outputs[0], other);
    }
}
