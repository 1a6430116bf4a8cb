//! Elitist genetic algorithm with pluggable variation operators.
//!
//! Single-objective steps use tournament selection plus truncation on the
//! merged parent+child pool; multi-objective steps follow NSGA-II, ranking
//! by Pareto front and crowding distance both for parent selection and for
//! survival. Operators are pure mappings from a parent matrix to a child
//! matrix and are piped in the order given by the config.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::batch::{Dtype, SolutionBatch, ValueMatrix};
use crate::error::{Error, Result};
use crate::pareto::non_dominated_sort;
use crate::pareto::pareto_order;
use crate::problem::ProblemSpec;
use crate::rng::RngStream;

/// A variation operator: parents in, children out. Implementations must be
/// pure (same inputs and stream, same output), must preserve dtype and
/// column count, and may change the row count.
pub trait Operator: Send + Sync {
    fn apply(&self, parents: &ValueMatrix, rng: RngStream) -> Result<ValueMatrix>;
}

/// Swap a uniformly drawn segment `[a, b)` between each consecutive pair of
/// parent rows. Cut points satisfy `0 <= a <= b <= cols` (two independent
/// draws from `{0..=cols}`, ordered), so both the empty swap (`a == b`) and
/// the full swap (`0, cols`) occur. Works for every dtype.
pub struct TwoPointCrossover;

/// Add `stdev * N(0, 1)` to every element. Floating dtypes only.
pub struct GaussianMutation {
    pub stdev: f64,
}

/// Flip each boolean element with probability `prob`; `None` means the
/// standard `1 / cols` rate. Boolean dtype only.
pub struct BitflipMutation {
    pub prob: Option<f64>,
}

pub fn two_point_crossover(parents: &ValueMatrix, rng: RngStream) -> Result<ValueMatrix> {
    if parents.rows() % 2 != 0 {
        return Err(Error::Contract(format!(
            "two-point crossover needs an even parent count, got {}",
            parents.rows()
        )));
    }
    let cols = parents.cols();
    if cols == 0 {
        return Err(Error::Shape("crossover needs at least one column".into()));
    }
    let mut children = parents.clone();
    for pair in 0..parents.rows() / 2 {
        let mut r = rng.substream(pair as u64).rng();
        let mut a = r.random_range(0..=cols);
        let mut b = r.random_range(0..=cols);
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        children.swap_row_block(2 * pair, 2 * pair + 1, a, b)?;
    }
    Ok(children)
}

pub fn gaussian_mutation(values: &ValueMatrix, stdev: f64, rng: RngStream) -> Result<ValueMatrix> {
    if !(stdev.is_finite() && stdev >= 0.0) {
        return Err(Error::Range(format!("stdev must be finite and >= 0, got {stdev}")));
    }
    let cols = values.cols();
    let mut out = values.clone();
    match values.dtype() {
        Dtype::Float64 => {
            let data = out.f64_data_mut().expect("checked dtype");
            for row in 0..values.rows() {
                let mut r = rng.substream(row as u64).rng();
                for v in &mut data[row * cols..(row + 1) * cols] {
                    let e: f64 = r.sample(StandardNormal);
                    *v += stdev * e;
                }
            }
        }
        Dtype::Float32 => {
            let data = out.f32_data_mut().expect("checked dtype");
            for row in 0..values.rows() {
                let mut r = rng.substream(row as u64).rng();
                for v in &mut data[row * cols..(row + 1) * cols] {
                    let e: f64 = r.sample(StandardNormal);
                    *v = (*v as f64 + stdev * e) as f32;
                }
            }
        }
        other => {
            return Err(Error::Contract(format!(
                "gaussian mutation needs a floating dtype, got {other:?}"
            )))
        }
    }
    Ok(out)
}

pub fn bitflip_mutation(values: &ValueMatrix, prob: Option<f64>, rng: RngStream) -> Result<ValueMatrix> {
    let cols = values.cols();
    let p = match prob {
        Some(p) if (0.0..=1.0).contains(&p) => p,
        Some(p) => {
            return Err(Error::Range(format!("flip probability must be in [0, 1], got {p}")))
        }
        None => 1.0 / cols.max(1) as f64,
    };
    let mut out = values.clone();
    let data = out
        .bool_data_mut()
        .ok_or_else(|| Error::Contract("bitflip mutation needs a boolean dtype".into()))?;
    for row in 0..values.rows() {
        let mut r = rng.substream(row as u64).rng();
        for v in &mut data[row * cols..(row + 1) * cols] {
            if r.random::<f64>() < p {
                *v = !*v;
            }
        }
    }
    Ok(out)
}

impl Operator for TwoPointCrossover {
    fn apply(&self, parents: &ValueMatrix, rng: RngStream) -> Result<ValueMatrix> {
        two_point_crossover(parents, rng)
    }
}

impl Operator for GaussianMutation {
    fn apply(&self, parents: &ValueMatrix, rng: RngStream) -> Result<ValueMatrix> {
        gaussian_mutation(parents, self.stdev, rng)
    }
}

impl Operator for BitflipMutation {
    fn apply(&self, parents: &ValueMatrix, rng: RngStream) -> Result<ValueMatrix> {
        bitflip_mutation(parents, self.prob, rng)
    }
}

pub struct GaConfig {
    pub popsize: usize,
    pub operators: Vec<Box<dyn Operator>>,
    pub tournament_size: usize,
}

impl GaConfig {
    /// Defaults: binary tournament, no operators yet (push at least one
    /// before stepping).
    pub fn new(popsize: usize) -> Self {
        Self {
            popsize,
            operators: Vec::new(),
            tournament_size: 2,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.popsize < 2 {
            return Err(Error::Config(format!(
                "ga needs popsize >= 2, got {}",
                self.popsize
            )));
        }
        if self.operators.is_empty() {
            return Err(Error::Config("ga needs at least one operator".into()));
        }
        if self.tournament_size < 1 {
            return Err(Error::Config("tournament_size must be >= 1".into()));
        }
        Ok(())
    }
}

/// Tournament winners by an arbitrary strict-preference comparator; one
/// winner per slot, contestants drawn uniformly with replacement, ties going
/// to the lower row index.
fn tournament<F>(pool_rows: usize, slots: usize, size: usize, rng: RngStream, better: F) -> Vec<usize>
where
    F: Fn(usize, usize) -> std::cmp::Ordering,
{
    let mut picks = Vec::with_capacity(slots);
    for slot in 0..slots {
        let mut r = rng.substream(slot as u64).rng();
        let mut best = r.random_range(0..pool_rows);
        for _ in 1..size {
            let challenger = r.random_range(0..pool_rows);
            if better(challenger, best).then(challenger.cmp(&best)).is_lt() {
                best = challenger;
            }
        }
        picks.push(best);
    }
    picks
}

/// Crossover needs pairs, so an odd popsize breeds one extra child that the
/// pipeline drops again after the operators ran.
fn parent_count(popsize: usize) -> usize {
    popsize + popsize % 2
}

fn breed(
    pop: &SolutionBatch,
    parent_idx: &[usize],
    cfg: &GaConfig,
    rng: RngStream,
) -> Result<ValueMatrix> {
    let mut current = pop.values().select_rows(parent_idx)?;
    for (k, op) in cfg.operators.iter().enumerate() {
        let next = op.apply(&current, rng.substream(1 + k as u64))?;
        if next.cols() != current.cols() || next.dtype() != current.dtype() {
            return Err(Error::Contract(format!(
                "operator {k} changed shape or dtype: {}x{:?} -> {}x{:?}",
                current.cols(),
                current.dtype(),
                next.cols(),
                next.dtype()
            )));
        }
        current = next;
    }
    if current.rows() > cfg.popsize {
        current = current.slice_rows(0, cfg.popsize)?;
    }
    if current.rows() != cfg.popsize {
        return Err(Error::Contract(format!(
            "operator pipeline produced {} children for popsize {}",
            current.rows(),
            cfg.popsize
        )));
    }
    Ok(current)
}

fn check_pop(pop: &SolutionBatch, spec: &ProblemSpec) -> Result<()> {
    if !pop.is_fully_evaluated() {
        return Err(Error::State("ga steps need a fully evaluated population".into()));
    }
    if pop.rows() == 0 {
        return Err(Error::Shape("ga steps need a non-empty population".into()));
    }
    if pop.solution_length() != spec.solution_length() || pop.dtype() != spec.dtype() {
        return Err(Error::Shape(format!(
            "population is {}x{:?} but problem expects {}x{:?}",
            pop.solution_length(),
            pop.dtype(),
            spec.solution_length(),
            spec.dtype()
        )));
    }
    Ok(())
}

/// One elitist single-objective generation: tournament parents, operator
/// pipeline, evaluate children, keep the best `popsize` of parents plus
/// children. Ties prefer incumbents (they sit at lower merged indices).
pub fn ga_step_single(
    pop: &SolutionBatch,
    spec: &ProblemSpec,
    cfg: &GaConfig,
    rng: RngStream,
) -> Result<SolutionBatch> {
    cfg.validate()?;
    check_pop(pop, spec)?;
    let sense = spec.sense_single()?;
    if pop.num_objectives() != 1 {
        return Err(Error::Contract(format!(
            "ga_step_single needs 1 objective, population has {}",
            pop.num_objectives()
        )));
    }
    let fit = pop.evals().column(0)?;
    let parent_idx = tournament(
        pop.rows(),
        parent_count(cfg.popsize),
        cfg.tournament_size,
        rng.substream(0),
        |i, j| sense.cmp_better_first(fit[i], fit[j]),
    );
    let children_values = breed(pop, &parent_idx, cfg, rng)?;
    let mut children = SolutionBatch::new(children_values, 1)?;
    spec.evaluate(&mut children)?;
    pop.concat(&children)?.take_best(cfg.popsize, sense)
}

/// One NSGA-II generation: binary-style tournament on (front rank, crowding
/// distance), operator pipeline, evaluate children, truncate the merged pool
/// by Pareto order.
pub fn ga_step_multi(
    pop: &SolutionBatch,
    spec: &ProblemSpec,
    cfg: &GaConfig,
    rng: RngStream,
) -> Result<SolutionBatch> {
    cfg.validate()?;
    check_pop(pop, spec)?;
    let senses = spec.senses().to_vec();
    if senses.len() < 2 || pop.num_objectives() != senses.len() {
        return Err(Error::Contract(format!(
            "ga_step_multi needs >= 2 objectives, problem has {}, population has {}",
            senses.len(),
            pop.num_objectives()
        )));
    }
    let fronts = non_dominated_sort(pop.evals(), &senses)?;
    let rank = fronts.rank_of();
    let crowding = fronts.crowding;
    let parent_idx = tournament(
        pop.rows(),
        parent_count(cfg.popsize),
        cfg.tournament_size,
        rng.substream(0),
        |i, j| {
            rank[i]
                .cmp(&rank[j])
                .then_with(|| crowding[j].total_cmp(&crowding[i]))
        },
    );
    let children_values = breed(pop, &parent_idx, cfg, rng)?;
    let mut children = SolutionBatch::new(children_values, senses.len())?;
    spec.evaluate(&mut children)?;
    let merged = pop.concat(&children)?;
    let order = pareto_order(merged.evals(), &senses)?;
    merged.select(&order[..cfg.popsize])
}
