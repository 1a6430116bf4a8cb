//! Run configuration: the single structure that fully determines a benchmark
//! run. It is parsed from the CLI, validated and resolved (scenario defaults
//! filled in), serialized into `meta.json`, and read back by `rerun`.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    RastriginSnes,
    CemVsAdam,
    KursaweNsga2,
    GpBench,
}

impl ScenarioKind {
    pub fn name(&self) -> &'static str {
        match self {
            ScenarioKind::RastriginSnes => "rastrigin-snes",
            ScenarioKind::CemVsAdam => "cem-vs-adam",
            ScenarioKind::KursaweNsga2 => "kursawe-nsga2",
            ScenarioKind::GpBench => "gp-bench",
        }
    }

    /// Problem dimensionality used when `--dim` is not given. For `gp-bench`
    /// the dimension is the program length.
    pub fn default_dim(&self) -> usize {
        match self {
            ScenarioKind::RastriginSnes => 100,
            ScenarioKind::CemVsAdam => 100,
            ScenarioKind::KursaweNsga2 => 3,
            ScenarioKind::GpBench => 20,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum CostFunction {
    Sphere,
    Rastrigin,
}

impl std::str::FromStr for CostFunction {
    type Err = BenchError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sphere" => Ok(CostFunction::Sphere),
            "rastrigin" => Ok(CostFunction::Rastrigin),
            other => Err(BenchError::Config(format!(
                "unknown function {other:?} (expected sphere or rastrigin)"
            ))),
        }
    }
}

/// Fully describes one benchmark run. Scenario-specific parameters are
/// optional; [`RunConfig::resolve`] fills applicable ones with their defaults
/// and rejects inapplicable ones, so a serialized config always shows exactly
/// the parameters the run used.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: ScenarioKind,
    pub popsize: usize,
    pub generations: usize,
    pub seed: u64,
    pub workers: usize,
    pub dim: usize,
    pub out_dir: PathBuf,
    #[serde(default = "default_log_interval")]
    pub log_interval: usize,
    /// Initial search stdev (rastrigin-snes, cem-vs-adam).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stdev_init: Option<f64>,
    /// Cost function (cem-vs-adam).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<CostFunction>,
    /// Fraction of the population refitted as parents (cem-vs-adam).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parenthood_ratio: Option<f64>,
    /// Max relative per-generation sigma change (cem-vs-adam).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_change: Option<f64>,
    /// Adam step size (cem-vs-adam).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lr: Option<f64>,
    /// Gaussian mutation stdev (kursawe-nsga2).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mutation_stdev: Option<f64>,
    /// Per-symbol opcode mutation probability (gp-bench).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mutation_prob: Option<f64>,
}

fn default_log_interval() -> usize {
    1
}

impl RunConfig {
    /// Validates counts and ranges, fills in scenario defaults, and rejects
    /// parameters that do not apply to the chosen scenario.
    pub fn resolve(mut self) -> Result<RunConfig> {
        for (name, v) in [
            ("popsize", self.popsize),
            ("generations", self.generations),
            ("workers", self.workers),
            ("dim", self.dim),
            ("log-interval", self.log_interval),
        ] {
            if v < 1 {
                return Err(BenchError::Config(format!("{name} must be >= 1, got {v}")));
            }
        }

        let scenario = self.scenario;
        let reject = |opt: bool, flag: &str| -> Result<()> {
            if opt {
                Err(BenchError::Config(format!(
                    "--{flag} does not apply to scenario {}",
                    scenario.name()
                )))
            } else {
                Ok(())
            }
        };

        match self.scenario {
            ScenarioKind::RastriginSnes => {
                reject(self.function.is_some(), "function")?;
                reject(self.parenthood_ratio.is_some(), "parenthood-ratio")?;
                reject(self.max_change.is_some(), "max-change")?;
                reject(self.lr.is_some(), "lr")?;
                reject(self.mutation_stdev.is_some(), "mutation-stdev")?;
                reject(self.mutation_prob.is_some(), "mutation-prob")?;
                self.stdev_init = Some(self.stdev_init.unwrap_or(5.0));
            }
            ScenarioKind::CemVsAdam => {
                reject(self.mutation_stdev.is_some(), "mutation-stdev")?;
                reject(self.mutation_prob.is_some(), "mutation-prob")?;
                if self.function.is_none() {
                    return Err(BenchError::Config(
                        "cem-vs-adam requires --function sphere|rastrigin".into(),
                    ));
                }
                self.stdev_init = Some(self.stdev_init.unwrap_or(1.0));
                self.parenthood_ratio = Some(self.parenthood_ratio.unwrap_or(0.5));
                self.max_change = Some(self.max_change.unwrap_or(0.02));
                self.lr = Some(self.lr.unwrap_or(0.6));
            }
            ScenarioKind::KursaweNsga2 => {
                reject(self.stdev_init.is_some(), "stdev-init")?;
                reject(self.function.is_some(), "function")?;
                reject(self.parenthood_ratio.is_some(), "parenthood-ratio")?;
                reject(self.max_change.is_some(), "max-change")?;
                reject(self.lr.is_some(), "lr")?;
                reject(self.mutation_prob.is_some(), "mutation-prob")?;
                if self.dim != 3 {
                    return Err(BenchError::Config(format!(
                        "kursawe-nsga2 is defined for dim 3, got {}",
                        self.dim
                    )));
                }
                self.mutation_stdev = Some(self.mutation_stdev.unwrap_or(0.2));
            }
            ScenarioKind::GpBench => {
                reject(self.stdev_init.is_some(), "stdev-init")?;
                reject(self.function.is_some(), "function")?;
                reject(self.parenthood_ratio.is_some(), "parenthood-ratio")?;
                reject(self.max_change.is_some(), "max-change")?;
                reject(self.lr.is_some(), "lr")?;
                reject(self.mutation_stdev.is_some(), "mutation-stdev")?;
                self.mutation_prob = Some(self.mutation_prob.unwrap_or(0.1));
            }
        }

        let check = |name: &str, v: Option<f64>, ok: fn(f64) -> bool, desc: &str| -> Result<()> {
            match v {
                Some(x) if !ok(x) => Err(BenchError::Config(format!(
                    "--{name} must be {desc}, got {x}"
                ))),
                _ => Ok(()),
            }
        };
        check("stdev-init", self.stdev_init, |x| x > 0.0 && x.is_finite(), "positive and finite")?;
        check("parenthood-ratio", self.parenthood_ratio, |x| x > 0.0 && x <= 1.0, "in (0, 1]")?;
        check("max-change", self.max_change, |x| x > 0.0 && x.is_finite(), "positive and finite")?;
        check("lr", self.lr, |x| x > 0.0 && x.is_finite(), "positive and finite")?;
        check("mutation-stdev", self.mutation_stdev, |x| x >= 0.0 && x.is_finite(), "non-negative and finite")?;
        check("mutation-prob", self.mutation_prob, |x| (0.0..=1.0).contains(&x), "in [0, 1]")?;

        Ok(self)
    }
}
