//! Problem definitions and deterministic batch evaluation.
//!
//! A [`ProblemSpec`] bundles the objective senses, solution layout, initial
//! bounds, worker count and the fitness evaluator. Evaluation splits the
//! batch into `num_workers` contiguous row chunks and runs the evaluator on
//! each chunk (in parallel with the `parallel` feature). Because an evaluator
//! must be pure and row-local, the stored fitnesses are bit-identical for
//! any worker count.

use std::f64::consts::PI;
use std::sync::Arc;

use rand::Rng;

use crate::batch::{Dtype, EvalMatrix, MatrixData, ObjectiveSense, SolutionBatch, ValueMatrix};
use crate::error::{Error, Result};
use crate::rng::RngStream;

/// A batched fitness function.
///
/// `eval` receives any row-chunk of a population and must return one fitness
/// row per input row. Implementations must be pure and row-local: output row
/// `i` may depend only on input row `i`, and repeated calls must return
/// identical values. That contract is what makes chunked parallel evaluation
/// reproducible.
pub trait VectorizedFitness: Send + Sync {
    fn num_objectives(&self) -> usize;
    fn eval(&self, values: &ValueMatrix) -> Result<EvalMatrix>;
}

/// Adapter so plain closures can serve as evaluators.
pub struct FnFitness<F> {
    num_objectives: usize,
    f: F,
}

impl<F> FnFitness<F>
where
    F: Fn(&ValueMatrix) -> Result<EvalMatrix> + Send + Sync,
{
    pub fn new(num_objectives: usize, f: F) -> Self {
        Self { num_objectives, f }
    }
}

impl<F> VectorizedFitness for FnFitness<F>
where
    F: Fn(&ValueMatrix) -> Result<EvalMatrix> + Send + Sync,
{
    fn num_objectives(&self) -> usize {
        self.num_objectives
    }

    fn eval(&self, values: &ValueMatrix) -> Result<EvalMatrix> {
        (self.f)(values)
    }
}

/// Initialization bounds, either shared by all variables or per variable.
#[derive(Clone, Debug, PartialEq)]
pub enum Bounds {
    Shared(f64, f64),
    PerVariable(Vec<(f64, f64)>),
}

impl Bounds {
    fn validate(&self, solution_length: usize) -> Result<()> {
        let check = |lo: f64, hi: f64| -> Result<()> {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::Config(format!(
                    "bounds must satisfy lo < hi with finite values, got ({lo}, {hi})"
                )));
            }
            Ok(())
        };
        match self {
            Bounds::Shared(lo, hi) => check(*lo, *hi),
            Bounds::PerVariable(v) => {
                if v.len() != solution_length {
                    return Err(Error::Config(format!(
                        "{} per-variable bounds for solution length {}",
                        v.len(),
                        solution_length
                    )));
                }
                v.iter().try_for_each(|&(lo, hi)| check(lo, hi))
            }
        }
    }

    fn get(&self, var: usize) -> (f64, f64) {
        match self {
            Bounds::Shared(lo, hi) => (*lo, *hi),
            Bounds::PerVariable(v) => v[var],
        }
    }
}

/// Outcome report of one `evaluate` call.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EvalReport {
    /// Number of non-finite fitness cells stored. Non-finite values are kept
    /// as-is; orderings deal with them deterministically (NaN sorts worst).
    pub non_finite: usize,
}

#[derive(Clone)]
pub struct ProblemSpec {
    senses: Vec<ObjectiveSense>,
    solution_length: usize,
    dtype: Dtype,
    initial_bounds: Option<Bounds>,
    num_workers: usize,
    fitness: Arc<dyn VectorizedFitness>,
}

impl ProblemSpec {
    pub fn new(
        senses: Vec<ObjectiveSense>,
        solution_length: usize,
        dtype: Dtype,
        fitness: Arc<dyn VectorizedFitness>,
    ) -> Result<Self> {
        if senses.is_empty() {
            return Err(Error::Config("at least one objective sense required".into()));
        }
        if solution_length == 0 {
            return Err(Error::Config("solution_length must be >= 1".into()));
        }
        if senses.len() != fitness.num_objectives() {
            return Err(Error::Config(format!(
                "{} senses but fitness declares {} objectives",
                senses.len(),
                fitness.num_objectives()
            )));
        }
        Ok(Self {
            senses,
            solution_length,
            dtype,
            initial_bounds: None,
            num_workers: 1,
            fitness,
        })
    }

    /// Single-objective sphere problem over float64 vectors.
    pub fn sphere(dim: usize) -> Result<Self> {
        Self::new(
            vec![ObjectiveSense::Min],
            dim,
            Dtype::Float64,
            Arc::new(Sphere),
        )
    }

    /// Single-objective rastrigin problem over float64 vectors.
    pub fn rastrigin(dim: usize) -> Result<Self> {
        Self::new(
            vec![ObjectiveSense::Min],
            dim,
            Dtype::Float64,
            Arc::new(Rastrigin),
        )
    }

    /// Two-objective kursawe problem over 3 float64 variables.
    pub fn kursawe() -> Result<Self> {
        Self::new(
            vec![ObjectiveSense::Min, ObjectiveSense::Min],
            3,
            Dtype::Float64,
            Arc::new(Kursawe),
        )
    }

    pub fn with_bounds(mut self, lo: f64, hi: f64) -> Result<Self> {
        let b = Bounds::Shared(lo, hi);
        b.validate(self.solution_length)?;
        self.initial_bounds = Some(b);
        Ok(self)
    }

    pub fn with_bounds_per_variable(mut self, bounds: Vec<(f64, f64)>) -> Result<Self> {
        let b = Bounds::PerVariable(bounds);
        b.validate(self.solution_length)?;
        self.initial_bounds = Some(b);
        Ok(self)
    }

    pub fn with_workers(mut self, num_workers: usize) -> Result<Self> {
        if num_workers == 0 {
            return Err(Error::Config("num_workers must be >= 1".into()));
        }
        self.num_workers = num_workers;
        Ok(self)
    }

    pub fn senses(&self) -> &[ObjectiveSense] {
        &self.senses
    }

    /// The sense of the only objective; contract error when multi-objective.
    pub fn sense_single(&self) -> Result<ObjectiveSense> {
        if self.senses.len() != 1 {
            return Err(Error::Contract(format!(
                "single-objective access on a {}-objective problem",
                self.senses.len()
            )));
        }
        Ok(self.senses[0])
    }

    pub fn num_objectives(&self) -> usize {
        self.senses.len()
    }

    pub fn solution_length(&self) -> usize {
        self.solution_length
    }

    pub fn dtype(&self) -> Dtype {
        self.dtype
    }

    pub fn initial_bounds(&self) -> Option<&Bounds> {
        self.initial_bounds.as_ref()
    }

    pub fn num_workers(&self) -> usize {
        self.num_workers
    }

    pub fn fitness(&self) -> &Arc<dyn VectorizedFitness> {
        &self.fitness
    }

    /// Draw an unevaluated batch of `popsize` rows uniformly inside the
    /// initial bounds (integers inclusive of both ends; booleans are fair
    /// coins and need no bounds). Row `i` draws from substream `i` of `rng`,
    /// so the same `(seed, popsize)` always yields a bit-identical batch and
    /// row contents do not depend on worker count.
    pub fn generate_batch(&self, popsize: usize, rng: RngStream) -> Result<SolutionBatch> {
        let n = self.solution_length;
        let data = match self.dtype {
            Dtype::Float64 => {
                let (los, his) = self.bounds_arrays()?;
                let mut out = vec![0.0f64; popsize * n];
                for (row, chunk) in out.chunks_mut(n).enumerate() {
                    let mut r = rng.substream(row as u64).rng();
                    for (j, cell) in chunk.iter_mut().enumerate() {
                        *cell = r.random_range(los[j]..=his[j]);
                    }
                }
                MatrixData::F64(out)
            }
            Dtype::Float32 => {
                let (los, his) = self.bounds_arrays()?;
                let mut out = vec![0.0f32; popsize * n];
                for (row, chunk) in out.chunks_mut(n).enumerate() {
                    let mut r = rng.substream(row as u64).rng();
                    for (j, cell) in chunk.iter_mut().enumerate() {
                        *cell = r.random_range(los[j] as f32..=his[j] as f32);
                    }
                }
                MatrixData::F32(out)
            }
            Dtype::Int64 => {
                let (los, his) = self.bounds_arrays()?;
                let mut ilo = Vec::with_capacity(n);
                let mut ihi = Vec::with_capacity(n);
                for j in 0..n {
                    let (lo, hi) = (los[j].ceil() as i64, his[j].floor() as i64);
                    if lo > hi {
                        return Err(Error::Config(format!(
                            "integer bounds ({}, {}) contain no integer",
                            los[j], his[j]
                        )));
                    }
                    ilo.push(lo);
                    ihi.push(hi);
                }
                let mut out = vec![0i64; popsize * n];
                for (row, chunk) in out.chunks_mut(n).enumerate() {
                    let mut r = rng.substream(row as u64).rng();
                    for (j, cell) in chunk.iter_mut().enumerate() {
                        *cell = r.random_range(ilo[j]..=ihi[j]);
                    }
                }
                MatrixData::I64(out)
            }
            Dtype::Bool => {
                let mut out = vec![false; popsize * n];
                for (row, chunk) in out.chunks_mut(n).enumerate() {
                    let mut r = rng.substream(row as u64).rng();
                    for cell in chunk.iter_mut() {
                        *cell = r.random();
                    }
                }
                MatrixData::Bool(out)
            }
        };
        SolutionBatch::new(ValueMatrix::new(popsize, n, data)?, self.senses.len())
    }

    fn bounds_arrays(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        let bounds = self.initial_bounds.as_ref().ok_or_else(|| {
            Error::Config(format!(
                "initial bounds required to generate {:?} solutions",
                self.dtype
            ))
        })?;
        let n = self.solution_length;
        let mut los = Vec::with_capacity(n);
        let mut his = Vec::with_capacity(n);
        for j in 0..n {
            let (lo, hi) = bounds.get(j);
            los.push(lo);
            his.push(hi);
        }
        Ok((los, his))
    }

    /// Evaluate every row of `batch`, splitting it into `num_workers`
    /// contiguous chunks of `ceil(rows / num_workers)` rows. Non-finite
    /// fitnesses are stored as-is and counted in the returned report.
    pub fn evaluate(&self, batch: &mut SolutionBatch) -> Result<EvalReport> {
        if batch.solution_length() != self.solution_length {
            return Err(Error::Shape(format!(
                "batch solution length {} does not match spec {}",
                batch.solution_length(),
                self.solution_length
            )));
        }
        if batch.dtype() != self.dtype {
            return Err(Error::Shape(format!(
                "batch dtype {:?} does not match spec {:?}",
                batch.dtype(),
                self.dtype
            )));
        }
        if batch.num_objectives() != self.senses.len() {
            return Err(Error::Shape(format!(
                "batch has {} objectives, spec has {}",
                batch.num_objectives(),
                self.senses.len()
            )));
        }
        let rows = batch.rows();
        if rows == 0 {
            return Ok(EvalReport::default());
        }

        let chunk = rows.div_ceil(self.num_workers);
        let ranges: Vec<(usize, usize)> = (0..rows)
            .step_by(chunk)
            .map(|s| (s, (s + chunk).min(rows)))
            .collect();

        let eval_range = |&(s, e): &(usize, usize)| -> Result<EvalMatrix> {
            let sub = batch.values().slice_rows(s, e)?;
            let out = self.fitness.eval(&sub)?;
            if out.rows() != e - s || out.cols() != self.senses.len() {
                return Err(Error::Shape(format!(
                    "fitness returned {}x{} for a {}x{} chunk",
                    out.rows(),
                    out.cols(),
                    e - s,
                    self.senses.len()
                )));
            }
            Ok(out)
        };

        let results: Vec<EvalMatrix> = run_chunks(self.num_workers, &ranges, eval_range)?;

        let mut report = EvalReport::default();
        for ((s, e), out) in ranges.iter().copied().zip(results) {
            for (local, row) in (s..e).enumerate() {
                let vals = out.row(local);
                report.non_finite += vals.iter().filter(|v| !v.is_finite()).count();
                batch.set_eval_row(row, vals)?;
            }
        }
        Ok(report)
    }
}

#[cfg(feature = "parallel")]
fn run_chunks<T: Send, F>(num_workers: usize, ranges: &[(usize, usize)], f: F) -> Result<Vec<T>>
where
    F: Fn(&(usize, usize)) -> Result<T> + Send + Sync,
{
    use rayon::prelude::*;
    if num_workers > 1 && ranges.len() > 1 {
        ranges.par_iter().map(f).collect()
    } else {
        ranges.iter().map(f).collect()
    }
}

#[cfg(not(feature = "parallel"))]
fn run_chunks<T: Send, F>(_num_workers: usize, ranges: &[(usize, usize)], f: F) -> Result<Vec<T>>
where
    F: Fn(&(usize, usize)) -> Result<T> + Send + Sync,
{
    ranges.iter().map(f).collect()
}

/// Iterate the float rows of a matrix as f64, rejecting non-float dtypes.
fn float_rows<'a>(
    op: &str,
    values: &'a ValueMatrix,
) -> Result<Box<dyn Iterator<Item = Vec<f64>> + 'a>> {
    match values.data() {
        MatrixData::F64(v) => {
            let cols = values.cols();
            Ok(Box::new(v.chunks(cols).map(|c| c.to_vec())))
        }
        MatrixData::F32(v) => {
            let cols = values.cols();
            Ok(Box::new(
                v.chunks(cols)
                    .map(|c| c.iter().map(|&x| x as f64).collect()),
            ))
        }
        _ => Err(Error::Contract(format!(
            "{op} requires a floating dtype, got {:?}",
            values.dtype()
        ))),
    }
}

/// Sum of squares per row.
pub fn eval_sphere(values: &ValueMatrix) -> Result<EvalMatrix> {
    let mut out = Vec::with_capacity(values.rows());
    for row in float_rows("eval_sphere", values)? {
        out.push(row.iter().map(|&x| x * x).sum());
    }
    EvalMatrix::from_vec(values.rows(), 1, out)
}

/// Rastrigin function: `10 n + sum(x^2 - 10 cos(2 pi x))` per row.
pub fn eval_rastrigin(values: &ValueMatrix) -> Result<EvalMatrix> {
    let n = values.cols() as f64;
    let mut out = Vec::with_capacity(values.rows());
    for row in float_rows("eval_rastrigin", values)? {
        let s: f64 = row
            .iter()
            .map(|&x| x * x - 10.0 * (2.0 * PI * x).cos())
            .sum();
        out.push(10.0 * n + s);
    }
    EvalMatrix::from_vec(values.rows(), 1, out)
}

/// Kursawe's two-objective function over exactly three variables:
/// `f1 = sum_{i=1..2} -10 exp(-0.2 sqrt(x_i^2 + x_{i+1}^2))`,
/// `f2 = sum_{i=1..3} |x_i|^0.8 + 5 sin(x_i^3)`.
pub fn eval_kursawe(values: &ValueMatrix) -> Result<EvalMatrix> {
    if values.cols() != 3 {
        return Err(Error::Shape(format!(
            "kursawe requires 3 columns, got {}",
            values.cols()
        )));
    }
    let mut out = Vec::with_capacity(values.rows() * 2);
    for row in float_rows("eval_kursawe", values)? {
        let mut f1 = 0.0;
        for i in 0..2 {
            f1 += -10.0 * (-0.2 * (row[i] * row[i] + row[i + 1] * row[i + 1]).sqrt()).exp();
        }
        let mut f2 = 0.0;
        for &x in &row {
            f2 += x.abs().powf(0.8) + 5.0 * (x * x * x).sin();
        }
        out.push(f1);
        out.push(f2);
    }
    EvalMatrix::from_vec(values.rows(), 2, out)
}

pub struct Sphere;

impl VectorizedFitness for Sphere {
    fn num_objectives(&self) -> usize {
        1
    }

    fn eval(&self, values: &ValueMatrix) -> Result<EvalMatrix> {
        eval_sphere(values)
    }
}

pub struct Rastrigin;

impl VectorizedFitness for Rastrigin {
    fn num_objectives(&self) -> usize {
        1
    }

    fn eval(&self, values: &ValueMatrix) -> Result<EvalMatrix> {
        eval_rastrigin(values)
    }
}

pub struct Kursawe;

impl VectorizedFitness for Kursawe {
    fn num_objectives(&self) -> usize {
        2
    }

    fn eval(&self, values: &ValueMatrix) -> Result<EvalMatrix> {
        eval_kursawe(values)
    }
}
