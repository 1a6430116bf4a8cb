//! Distribution-based evolution: a separable Gaussian search distribution
//! with SNES, CEM and PGPE update steps, plus a distributed mode that
//! averages per-worker gradients into one central update.
//!
//! Every step follows the same internal shape: derive the sampling stream
//! from `(generation, worker)`, draw a population, evaluate it through the
//! problem spec, reduce it to a [`GradientPair`], and apply the pair to the
//! distribution. The non-distributed steps are literally the one-worker
//! instantiation of that pipeline, which is what makes
//! [`distributed_step`] with `num_workers = 1` bit-identical to them.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::batch::{Dtype, ObjectiveSense, SolutionBatch, ValueMatrix};
use crate::error::{Error, Result};
use crate::optim::Optimizer;
use crate::problem::ProblemSpec;
use crate::rng::RngStream;

/// Smallest stddev a step may leave behind; shrinking past this clamps the
/// coordinate and counts a warning event on the state.
pub const SIGMA_FLOOR: f64 = 1e-30;

/// Diagonal (separable) Gaussian: independent per-coordinate mean and stddev.
#[derive(Clone, Debug, PartialEq)]
pub struct SeparableGaussian {
    mu: Vec<f64>,
    sigma: Vec<f64>,
}

impl SeparableGaussian {
    pub fn new(mu: Vec<f64>, sigma: Vec<f64>) -> Result<Self> {
        if mu.len() != sigma.len() {
            return Err(Error::Shape(format!(
                "mu has {} coords, sigma has {}",
                mu.len(),
                sigma.len()
            )));
        }
        if mu.is_empty() {
            return Err(Error::Shape("distribution must have at least one coordinate".into()));
        }
        if let Some(bad) = sigma.iter().find(|s| !(s.is_finite() && **s > 0.0)) {
            return Err(Error::Range(format!("sigma must be finite and > 0, got {bad}")));
        }
        if let Some(bad) = mu.iter().find(|m| !m.is_finite()) {
            return Err(Error::Range(format!("mu must be finite, got {bad}")));
        }
        Ok(Self { mu, sigma })
    }

    pub fn dim(&self) -> usize {
        self.mu.len()
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }
}

/// Per-generation summary captured after a step.
#[derive(Clone, Debug, PartialEq)]
pub struct EsStatus {
    /// Distribution center after the update.
    pub center: Vec<f64>,
    /// Best fitness in the generation's population.
    pub best_eval: f64,
    pub mean_eval: f64,
    pub median_eval: f64,
    /// Decision values of the generation's best solution.
    pub pop_best: Vec<f64>,
}

/// Search state threaded through consecutive steps.
#[derive(Clone, Debug)]
pub struct EsState {
    pub dist: SeparableGaussian,
    pub generation: u64,
    pub status: Option<EsStatus>,
    /// How many sigma coordinates were clamped at [`SIGMA_FLOOR`] so far.
    pub sigma_clamp_events: u64,
}

impl EsState {
    pub fn new(dist: SeparableGaussian) -> Self {
        Self {
            dist,
            generation: 0,
            status: None,
            sigma_clamp_events: 0,
        }
    }
}

/// Gradient (or semi-gradient) of one worker's population, in the shape the
/// matching `apply_*` expects. Workers' pairs are averaged element-wise in
/// distributed mode.
#[derive(Clone, Debug, PartialEq)]
pub struct GradientPair {
    pub d_mu: Vec<f64>,
    pub d_sigma: Vec<f64>,
}

/// Fitness shaping applied before PGPE's gradient estimator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankingMethod {
    /// Sense-adjusted raw fitnesses (negated for Min so that bigger is
    /// always better). The only batch-independent shaping, hence the one
    /// under which distributed averaging matches the pooled estimate.
    Raw,
    /// Linear 0-centered ranks in [-0.5, +0.5] (see [`rank_centered`]).
    Centered,
    /// The SNES utility weights assigned by rank (see [`nes_utilities`]).
    NesUtilities,
}

/// Sampling stream for one step: derived from the generation counter and the
/// worker id, never from thread identity. Worker 0 is the non-distributed
/// path.
fn step_stream(rng: RngStream, generation: u64, worker: u64) -> RngStream {
    rng.substream(generation).substream(worker)
}

/// Draw `popsize` solutions. Non-symmetric draws use one substream per row;
/// symmetric sampling requires an even popsize and emits mirrored pairs
/// `(mu + sigma*eps, mu - sigma*eps)` from one substream per pair, so row
/// `2k` + row `2k+1 = 2 mu` up to one rounding in each coordinate (exact
/// when `mu` is all zeros).
pub fn sample(
    dist: &SeparableGaussian,
    popsize: usize,
    rng: RngStream,
    symmetric: bool,
) -> Result<ValueMatrix> {
    sample_with_eps(dist, popsize, rng, symmetric).map(|(m, _)| m)
}

/// Like [`sample`] but also returns the row-major standard-normal draws
/// (`eps[r]` such that `x_r = mu + sigma * eps_r`).
fn sample_with_eps(
    dist: &SeparableGaussian,
    popsize: usize,
    rng: RngStream,
    symmetric: bool,
) -> Result<(ValueMatrix, Vec<f64>)> {
    if popsize == 0 {
        return Err(Error::Config("popsize must be >= 1".into()));
    }
    if symmetric && popsize % 2 != 0 {
        return Err(Error::Config(format!(
            "symmetric sampling needs an even popsize, got {popsize}"
        )));
    }
    let n = dist.dim();
    let mut values = vec![0.0f64; popsize * n];
    let mut eps = vec![0.0f64; popsize * n];
    if symmetric {
        for k in 0..popsize / 2 {
            let mut r = rng.substream(k as u64).rng();
            let plus = 2 * k * n;
            let minus = plus + n;
            for j in 0..n {
                let e: f64 = r.sample(StandardNormal);
                let t = dist.sigma[j] * e;
                eps[plus + j] = e;
                eps[minus + j] = -e;
                values[plus + j] = dist.mu[j] + t;
                values[minus + j] = dist.mu[j] - t;
            }
        }
    } else {
        for row in 0..popsize {
            let mut r = rng.substream(row as u64).rng();
            let base = row * n;
            for j in 0..n {
                let e: f64 = r.sample(StandardNormal);
                eps[base + j] = e;
                values[base + j] = dist.mu[j] + dist.sigma[j] * e;
            }
        }
    }
    Ok((ValueMatrix::from_f64(popsize, n, values)?, eps))
}

/// 0-centered linear ranks: the worst fitness maps to exactly -0.5, the best
/// to exactly +0.5, evenly spaced in between (position / (n-1) - 0.5). Ties
/// keep ascending-index order from the stable sort, so equal fitnesses get
/// adjacent (not equal) utilities and the output always spans [-0.5, +0.5].
pub fn rank_centered(fitnesses: &[f64], sense: ObjectiveSense) -> Result<Vec<f64>> {
    let n = fitnesses.len();
    if n < 2 {
        return Err(Error::Config(format!(
            "rank_centered needs at least 2 fitnesses, got {n}"
        )));
    }
    let mut idx: Vec<usize> = (0..n).collect();
    // worst first: i precedes j when j's fitness is better
    idx.sort_by(|&i, &j| sense.cmp_better_first(fitnesses[j], fitnesses[i]));
    let mut out = vec![0.0f64; n];
    let denom = (n - 1) as f64;
    for (pos, &i) in idx.iter().enumerate() {
        out[i] = pos as f64 / denom - 0.5;
    }
    Ok(out)
}

/// SNES utility weights for a population of `popsize`, best rank first:
/// `u_k = max(0, ln(popsize/2 + 1) - ln k) / sum_j max(0, ...) - 1/popsize`.
/// They sum to zero, are non-increasing in rank, and give every rank past
/// the halfway point the same negative weight.
pub fn nes_utilities(popsize: usize) -> Vec<f64> {
    if popsize == 0 {
        return vec![];
    }
    let lam = popsize as f64;
    let raw: Vec<f64> = (1..=popsize)
        .map(|k| ((lam / 2.0 + 1.0).ln() - (k as f64).ln()).max(0.0))
        .collect();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|r| r / total - 1.0 / lam).collect()
}

/// Indices of `fitnesses` ordered best-first under `sense`; stable, so equal
/// fitnesses keep ascending index order.
fn argsort_best_first(fitnesses: &[f64], sense: ObjectiveSense) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..fitnesses.len()).collect();
    idx.sort_by(|&i, &j| sense.cmp_better_first(fitnesses[i], fitnesses[j]));
    idx
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn build_status(dist: &SeparableGaussian, batch: &SolutionBatch, sense: ObjectiveSense) -> EsStatus {
    let fit = batch.evals().column(0).expect("single objective");
    let mut best = 0usize;
    for i in 1..fit.len() {
        if sense.is_better(fit[i], fit[best]) {
            best = i;
        }
    }
    EsStatus {
        center: dist.mu.clone(),
        best_eval: fit[best],
        mean_eval: mean(&fit),
        median_eval: median(&fit),
        pop_best: batch.values().row_f64(best),
    }
}

/// Checks shared by all distribution steps.
fn check_es_problem(spec: &ProblemSpec, dist: &SeparableGaussian) -> Result<ObjectiveSense> {
    let sense = spec.sense_single().map_err(|_| {
        Error::Contract("distribution-based steps need a single-objective problem".into())
    })?;
    if !matches!(spec.dtype(), Dtype::Float32 | Dtype::Float64) {
        return Err(Error::Contract(format!(
            "distribution-based steps need a floating dtype, got {:?}",
            spec.dtype()
        )));
    }
    if spec.solution_length() != dist.dim() {
        return Err(Error::Shape(format!(
            "distribution has {} coords but problem has {}",
            dist.dim(),
            spec.solution_length()
        )));
    }
    Ok(sense)
}

/// Evaluate f64 samples through the spec (casting when the problem is f32).
fn evaluate_samples(spec: &ProblemSpec, samples: &ValueMatrix) -> Result<SolutionBatch> {
    let values = samples.cast_float(spec.dtype())?;
    let mut batch = SolutionBatch::new(values, 1)?;
    spec.evaluate(&mut batch)?;
    Ok(batch)
}

fn clamp_sigma(sigma: &mut [f64], events: &mut u64) {
    for s in sigma.iter_mut() {
        if *s < SIGMA_FLOOR {
            *s = SIGMA_FLOOR;
            *events += 1;
        }
    }
}

// ---------------------------------------------------------------------------
// SNES

#[derive(Clone, Debug)]
pub struct SnesConfig {
    pub popsize: usize,
    pub lr_mu: f64,
    pub lr_sigma: f64,
}

impl SnesConfig {
    /// Defaults: lr_mu = 1, lr_sigma = `(3 + ln n) / (5 sqrt(n))`.
    pub fn new(popsize: usize, dim: usize) -> Self {
        Self {
            popsize,
            lr_mu: 1.0,
            lr_sigma: snes_default_lr_sigma(dim),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.popsize < 2 {
            return Err(Error::Config("snes needs popsize >= 2".into()));
        }
        if !(self.lr_mu.is_finite() && self.lr_mu > 0.0) {
            return Err(Error::Config(format!("lr_mu must be > 0, got {}", self.lr_mu)));
        }
        if !(self.lr_sigma.is_finite() && self.lr_sigma >= 0.0) {
            return Err(Error::Config(format!(
                "lr_sigma must be >= 0, got {}",
                self.lr_sigma
            )));
        }
        Ok(())
    }
}

pub fn snes_default_lr_sigma(dim: usize) -> f64 {
    let n = dim as f64;
    (3.0 + n.ln()) / (5.0 * n.sqrt())
}

/// Rank-weighted natural-gradient estimate from standard-normal draws:
/// `d_mu = sigma * sum_k u_k s_(k)` and `d_sigma = sum_k u_k (s_(k)^2 - 1)`
/// with `s_(k)` the draw ranked `k`-th best.
fn snes_gradient(
    dist: &SeparableGaussian,
    eps: &[f64],
    fitnesses: &[f64],
    sense: ObjectiveSense,
) -> GradientPair {
    let n = dist.dim();
    let order = argsort_best_first(fitnesses, sense);
    let utils = nes_utilities(fitnesses.len());
    let mut gm = vec![0.0f64; n];
    let mut gs = vec![0.0f64; n];
    for (rank, &row) in order.iter().enumerate() {
        let u = utils[rank];
        let base = row * n;
        for j in 0..n {
            let s = eps[base + j];
            gm[j] += u * s;
            gs[j] += u * (s * s - 1.0);
        }
    }
    for j in 0..n {
        gm[j] *= dist.sigma[j];
    }
    GradientPair { d_mu: gm, d_sigma: gs }
}

fn apply_snes(state: &mut EsState, g: &GradientPair, lr_mu: f64, lr_sigma: f64) {
    for j in 0..state.dist.mu.len() {
        state.dist.mu[j] += lr_mu * g.d_mu[j];
        state.dist.sigma[j] *= (0.5 * lr_sigma * g.d_sigma[j]).exp();
    }
    clamp_sigma(&mut state.dist.sigma, &mut state.sigma_clamp_events);
}

fn snes_worker(
    dist: &SeparableGaussian,
    spec: &ProblemSpec,
    cfg: &SnesConfig,
    stream: RngStream,
    sense: ObjectiveSense,
) -> Result<(GradientPair, SolutionBatch)> {
    let (samples, eps) = sample_with_eps(dist, cfg.popsize, stream, false)?;
    let batch = evaluate_samples(spec, &samples)?;
    let fit = batch.evals().column(0)?;
    Ok((snes_gradient(dist, &eps, &fit, sense), batch))
}

/// One SNES generation: sample, evaluate, rank, and move the distribution.
/// Returns the evaluated population.
pub fn snes_step(
    state: &mut EsState,
    spec: &ProblemSpec,
    cfg: &SnesConfig,
    rng: RngStream,
) -> Result<SolutionBatch> {
    cfg.validate()?;
    let sense = check_es_problem(spec, &state.dist)?;
    let stream = step_stream(rng, state.generation, 0);
    let (g, batch) = snes_worker(&state.dist, spec, cfg, stream, sense)?;
    apply_snes(state, &g, cfg.lr_mu, cfg.lr_sigma);
    state.status = Some(build_status(&state.dist, &batch, sense));
    state.generation += 1;
    Ok(batch)
}

// ---------------------------------------------------------------------------
// CEM

#[derive(Clone, Debug)]
pub struct CemConfig {
    pub popsize: usize,
    /// Fraction of the population kept as parents (best `floor(popsize *
    /// ratio)` rows, at least 2).
    pub parenthood_ratio: f64,
    /// Per-coordinate cap on relative sigma movement per step.
    pub max_change: f64,
}

impl CemConfig {
    /// Defaults: half the population as parents, 2% max sigma change.
    pub fn new(popsize: usize) -> Self {
        Self {
            popsize,
            parenthood_ratio: 0.5,
            max_change: 0.02,
        }
    }

    fn num_parents(&self) -> Result<usize> {
        if !(self.parenthood_ratio > 0.0 && self.parenthood_ratio <= 1.0) {
            return Err(Error::Config(format!(
                "parenthood_ratio must be in (0, 1], got {}",
                self.parenthood_ratio
            )));
        }
        if !(self.max_change.is_finite() && self.max_change > 0.0) {
            return Err(Error::Config(format!(
                "max_change must be > 0, got {}",
                self.max_change
            )));
        }
        let k = (self.popsize as f64 * self.parenthood_ratio).floor() as usize;
        if k < 2 {
            return Err(Error::Config(format!(
                "popsize {} with ratio {} leaves {k} parents; need at least 2",
                self.popsize, self.parenthood_ratio
            )));
        }
        Ok(k)
    }
}

/// Maximum-likelihood refit deltas: `d_mu = parent_mean - mu` and
/// `d_sigma = parent_stdev_about_new_mean - sigma` (population stdev over
/// the parents, centered at the refit mean).
fn cem_gradient(
    dist: &SeparableGaussian,
    samples: &ValueMatrix,
    fitnesses: &[f64],
    num_parents: usize,
    sense: ObjectiveSense,
) -> GradientPair {
    let n = dist.dim();
    let order = argsort_best_first(fitnesses, sense);
    let parents = &order[..num_parents];
    let data = samples.f64_data().expect("es samples are f64");
    let kf = num_parents as f64;

    let mut new_mu = vec![0.0f64; n];
    for &p in parents {
        for j in 0..n {
            new_mu[j] += data[p * n + j];
        }
    }
    for v in new_mu.iter_mut() {
        *v /= kf;
    }

    let mut var = vec![0.0f64; n];
    for &p in parents {
        for j in 0..n {
            let d = data[p * n + j] - new_mu[j];
            var[j] += d * d;
        }
    }
    let d_mu: Vec<f64> = (0..n).map(|j| new_mu[j] - dist.mu[j]).collect();
    let d_sigma: Vec<f64> = (0..n)
        .map(|j| (var[j] / kf).sqrt() - dist.sigma[j])
        .collect();
    GradientPair { d_mu, d_sigma }
}

fn apply_cem(state: &mut EsState, g: &GradientPair, max_change: f64) {
    for j in 0..state.dist.mu.len() {
        let old = state.dist.sigma[j];
        state.dist.mu[j] += g.d_mu[j];
        let target = old + g.d_sigma[j];
        state.dist.sigma[j] = target.clamp(old * (1.0 - max_change), old * (1.0 + max_change));
    }
    clamp_sigma(&mut state.dist.sigma, &mut state.sigma_clamp_events);
}

fn cem_worker(
    dist: &SeparableGaussian,
    spec: &ProblemSpec,
    cfg: &CemConfig,
    num_parents: usize,
    stream: RngStream,
    sense: ObjectiveSense,
) -> Result<(GradientPair, SolutionBatch)> {
    let (samples, _) = sample_with_eps(dist, cfg.popsize, stream, false)?;
    let batch = evaluate_samples(spec, &samples)?;
    let fit = batch.evals().column(0)?;
    Ok((cem_gradient(dist, &samples, &fit, num_parents, sense), batch))
}

/// One cross-entropy-method generation: refit the distribution to the best
/// `parenthood_ratio` of the population, with sigma movement clamped to
/// `max_change` relative to its previous value.
pub fn cem_step(
    state: &mut EsState,
    spec: &ProblemSpec,
    cfg: &CemConfig,
    rng: RngStream,
) -> Result<SolutionBatch> {
    let num_parents = cfg.num_parents()?;
    let sense = check_es_problem(spec, &state.dist)?;
    let stream = step_stream(rng, state.generation, 0);
    let (g, batch) = cem_worker(&state.dist, spec, cfg, num_parents, stream, sense)?;
    apply_cem(state, &g, cfg.max_change);
    state.status = Some(build_status(&state.dist, &batch, sense));
    state.generation += 1;
    Ok(batch)
}

// ---------------------------------------------------------------------------
// PGPE

#[derive(Clone, Debug)]
pub struct PgpeConfig {
    pub popsize: usize,
    pub lr_sigma: f64,
    pub ranking: RankingMethod,
}

impl PgpeConfig {
    /// Default ranking is `Centered`.
    pub fn new(popsize: usize, lr_sigma: f64) -> Self {
        Self {
            popsize,
            lr_sigma,
            ranking: RankingMethod::Centered,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.popsize < 2 || self.popsize % 2 != 0 {
            return Err(Error::Config(format!(
                "pgpe needs an even popsize >= 2, got {}",
                self.popsize
            )));
        }
        if !(self.lr_sigma.is_finite() && self.lr_sigma >= 0.0) {
            return Err(Error::Config(format!(
                "lr_sigma must be >= 0, got {}",
                self.lr_sigma
            )));
        }
        Ok(())
    }
}

fn shape_fitnesses(
    fitnesses: &[f64],
    ranking: RankingMethod,
    sense: ObjectiveSense,
) -> Result<Vec<f64>> {
    match ranking {
        RankingMethod::Raw => Ok(match sense {
            ObjectiveSense::Max => fitnesses.to_vec(),
            ObjectiveSense::Min => fitnesses.iter().map(|f| -f).collect(),
        }),
        RankingMethod::Centered => rank_centered(fitnesses, sense),
        RankingMethod::NesUtilities => {
            let order = argsort_best_first(fitnesses, sense);
            let utils = nes_utilities(fitnesses.len());
            let mut out = vec![0.0f64; fitnesses.len()];
            for (rank, &row) in order.iter().enumerate() {
                out[row] = utils[rank];
            }
            Ok(out)
        }
    }
}

/// Mirrored-pair gradient estimate. `samples` must hold mirrored pairs (row
/// `2k` = `mu + eps_k`, row `2k+1` = `mu - eps_k` within rounding) with
/// fitness row alignment; the shaped fitnesses always point the gradient in
/// the improvement direction regardless of sense:
/// `d_mu = (1/K) sum_k ((r+ - r-)/2) eps_k`,
/// `d_sigma = (1/K) sum_k ((r+ + r-)/2 - b) (eps_k^2 - sigma^2)/sigma`,
/// with baseline `b` the mean shaped fitness.
pub fn pgpe_gradients(
    dist: &SeparableGaussian,
    samples: &ValueMatrix,
    fitnesses: &[f64],
    ranking: RankingMethod,
    sense: ObjectiveSense,
) -> Result<GradientPair> {
    let n = dist.dim();
    if samples.cols() != n {
        return Err(Error::Shape(format!(
            "samples have {} cols, distribution has {n}",
            samples.cols()
        )));
    }
    let rows = samples.rows();
    if rows < 2 || rows % 2 != 0 {
        return Err(Error::Contract(format!(
            "pgpe needs mirrored pairs: even row count >= 2, got {rows}"
        )));
    }
    if fitnesses.len() != rows {
        return Err(Error::Shape(format!(
            "{} fitnesses for {rows} samples",
            fitnesses.len()
        )));
    }
    let data = samples
        .f64_data()
        .ok_or_else(|| Error::Contract("pgpe samples must be float64".into()))?;
    // mirror contract: x+ + x- must reconstruct 2 mu (exact equality is not
    // achievable in floats for general mu, so allow ~1 ulp per coordinate)
    for k in 0..rows / 2 {
        let plus = 2 * k * n;
        let minus = plus + n;
        for j in 0..n {
            let a = data[plus + j];
            let b = data[minus + j];
            let twice_mu = 2.0 * dist.mu[j];
            let scale = a.abs().max(b.abs()).max(twice_mu.abs()).max(1.0);
            if ((a + b) - twice_mu).abs() > 1e-12 * scale {
                return Err(Error::Contract(format!(
                    "samples are not mirrored around mu at pair {k}, coord {j}"
                )));
            }
        }
    }

    let shaped = shape_fitnesses(fitnesses, ranking, sense)?;
    let baseline = mean(&shaped);
    let half = rows / 2;
    let kf = half as f64;
    let mut d_mu = vec![0.0f64; n];
    let mut d_sigma = vec![0.0f64; n];
    for k in 0..half {
        let plus = 2 * k * n;
        let r_plus = shaped[2 * k];
        let r_minus = shaped[2 * k + 1];
        let dir = 0.5 * (r_plus - r_minus);
        let dev = 0.5 * (r_plus + r_minus) - baseline;
        for j in 0..n {
            let e = data[plus + j] - dist.mu[j];
            let s = dist.sigma[j];
            d_mu[j] += dir * e;
            d_sigma[j] += dev * (e * e - s * s) / s;
        }
    }
    for j in 0..n {
        d_mu[j] /= kf;
        d_sigma[j] /= kf;
    }
    Ok(GradientPair { d_mu, d_sigma })
}

fn apply_pgpe(state: &mut EsState, g: &GradientPair, optimizer: &mut Optimizer, lr_sigma: f64) {
    let delta = optimizer.step(&g.d_mu);
    for j in 0..state.dist.mu.len() {
        state.dist.mu[j] += delta[j];
        state.dist.sigma[j] += lr_sigma * g.d_sigma[j];
    }
    clamp_sigma(&mut state.dist.sigma, &mut state.sigma_clamp_events);
}

fn pgpe_worker(
    dist: &SeparableGaussian,
    spec: &ProblemSpec,
    cfg: &PgpeConfig,
    stream: RngStream,
    sense: ObjectiveSense,
) -> Result<(GradientPair, SolutionBatch)> {
    let (samples, _) = sample_with_eps(dist, cfg.popsize, stream, true)?;
    let batch = evaluate_samples(spec, &samples)?;
    let fit = batch.evals().column(0)?;
    let g = pgpe_gradients(dist, &samples, &fit, cfg.ranking, sense)?;
    Ok((g, batch))
}

/// One PGPE generation with mirrored sampling. The center moves by the
/// optimizer's delta in the improvement direction; sigma follows a plain
/// scaled ascent `sigma += lr_sigma * d_sigma`.
pub fn pgpe_step(
    state: &mut EsState,
    spec: &ProblemSpec,
    cfg: &PgpeConfig,
    optimizer: &mut Optimizer,
    rng: RngStream,
) -> Result<SolutionBatch> {
    cfg.validate()?;
    let sense = check_es_problem(spec, &state.dist)?;
    if optimizer.dim() != state.dist.dim() {
        return Err(Error::Shape(format!(
            "optimizer has {} coords, distribution has {}",
            optimizer.dim(),
            state.dist.dim()
        )));
    }
    let stream = step_stream(rng, state.generation, 0);
    let (g, batch) = pgpe_worker(&state.dist, spec, cfg, stream, sense)?;
    apply_pgpe(state, &g, optimizer, cfg.lr_sigma);
    state.status = Some(build_status(&state.dist, &batch, sense));
    state.generation += 1;
    Ok(batch)
}

// ---------------------------------------------------------------------------
// Distributed mode

/// Which algorithm the distributed step runs; the embedded config's
/// `popsize` is the per-worker population, so one step evaluates
/// `num_workers * popsize` solutions in total.
#[derive(Clone, Debug)]
pub enum DistributedAlgo {
    Snes(SnesConfig),
    Cem(CemConfig),
    Pgpe(PgpeConfig),
}

/// One distributed generation: every worker draws its own sub-population
/// from the stream derived from `(generation, worker)`, evaluates it, and
/// reduces it to a gradient pair; the pairs are averaged arithmetically and
/// applied once, centrally. With `num_workers = 1` this is bit-identical to
/// the matching non-distributed step. Any worker failure fails the whole
/// step; nothing is averaged partially.
pub fn distributed_step(
    state: &mut EsState,
    spec: &ProblemSpec,
    num_workers: usize,
    algo: &DistributedAlgo,
    mut optimizer: Option<&mut Optimizer>,
    rng: RngStream,
) -> Result<SolutionBatch> {
    if num_workers == 0 {
        return Err(Error::Config("num_workers must be >= 1".into()));
    }
    let sense = check_es_problem(spec, &state.dist)?;
    // validate config (and pgpe's optimizer) before spawning anything
    let cem_parents = match algo {
        DistributedAlgo::Snes(c) => {
            c.validate()?;
            0
        }
        DistributedAlgo::Cem(c) => c.num_parents()?,
        DistributedAlgo::Pgpe(c) => {
            c.validate()?;
            match optimizer.as_deref() {
                None => {
                    return Err(Error::Contract(
                        "distributed pgpe requires an optimizer".into(),
                    ))
                }
                Some(o) if o.dim() != state.dist.dim() => {
                    return Err(Error::Shape(format!(
                        "optimizer has {} coords, distribution has {}",
                        o.dim(),
                        state.dist.dim()
                    )))
                }
                Some(_) => {}
            }
            0
        }
    };

    let dist = &state.dist;
    let generation = state.generation;
    let run_worker = |w: usize| -> Result<(GradientPair, SolutionBatch)> {
        let stream = step_stream(rng, generation, w as u64);
        match algo {
            DistributedAlgo::Snes(c) => snes_worker(dist, spec, c, stream, sense),
            DistributedAlgo::Cem(c) => cem_worker(dist, spec, c, cem_parents, stream, sense),
            DistributedAlgo::Pgpe(c) => pgpe_worker(dist, spec, c, stream, sense),
        }
    };

    #[cfg(feature = "parallel")]
    let results: Result<Vec<(GradientPair, SolutionBatch)>> = {
        use rayon::prelude::*;
        if num_workers > 1 {
            (0..num_workers).into_par_iter().map(run_worker).collect()
        } else {
            (0..num_workers).map(run_worker).collect()
        }
    };
    #[cfg(not(feature = "parallel"))]
    let results: Result<Vec<(GradientPair, SolutionBatch)>> =
        (0..num_workers).map(run_worker).collect();
    let results = results?;

    let n = state.dist.dim();
    let wf = num_workers as f64;
    let mut avg = GradientPair {
        d_mu: vec![0.0; n],
        d_sigma: vec![0.0; n],
    };
    for (g, _) in &results {
        for j in 0..n {
            avg.d_mu[j] += g.d_mu[j];
            avg.d_sigma[j] += g.d_sigma[j];
        }
    }
    for j in 0..n {
        avg.d_mu[j] /= wf;
        avg.d_sigma[j] /= wf;
    }

    match algo {
        DistributedAlgo::Snes(c) => apply_snes(state, &avg, c.lr_mu, c.lr_sigma),
        DistributedAlgo::Cem(c) => apply_cem(state, &avg, c.max_change),
        DistributedAlgo::Pgpe(c) => apply_pgpe(
            state,
            &avg,
            optimizer.as_deref_mut().expect("validated above"),
            c.lr_sigma,
        ),
    }

    let mut pooled: Option<SolutionBatch> = None;
    for (_, b) in results {
        pooled = Some(match pooled {
            None => b,
            Some(acc) => acc.concat(&b)?,
        });
    }
    let pooled = pooled.expect("num_workers >= 1");
    state.status = Some(build_status(&state.dist, &pooled, sense));
    state.generation += 1;
    Ok(pooled)
}
