//! Output-directory layout and `meta.json` handling.
//!
//! A single-method scenario writes `run.csv`, `final.csv`, `plot.svg` (and
//! `front.csv` for multi-objective runs) directly into the output directory.
//! Multi-method scenarios (cem-vs-adam) write one subdirectory per method.
//! `meta.json` always sits at the top level and holds the fully resolved
//! config plus crate versions, so `rerun` can reproduce the run exactly.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use evokit::SolutionBatch;

use crate::config::RunConfig;
use crate::csvio::{fmt_f64, write_csv};
use crate::error::{BenchError, Result};
use crate::logging::{run_header, LogRecord};
use crate::plot::svg_convergence_plot;

/// Everything one method of a scenario produced.
pub struct MethodRun {
    /// Subdirectory name, or `None` to write at the output root.
    pub name: Option<&'static str>,
    /// One record per generation.
    pub records: Vec<LogRecord>,
    /// Final population, fully evaluated.
    pub finals: SolutionBatch,
    /// Row indices of the final non-dominated front, when applicable.
    pub front_rows: Option<Vec<usize>>,
}

impl MethodRun {
    fn with_best_ever(&self) -> bool {
        self.records.first().is_some_and(|r| r.best_ever.is_some())
    }

    pub fn dir(&self, out_dir: &Path) -> PathBuf {
        match self.name {
            Some(n) => out_dir.join(n),
            None => out_dir.to_path_buf(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MetaFile {
    pub versions: BTreeMap<String, String>,
    pub config: RunConfig,
}

pub fn write_outputs(cfg: &RunConfig, methods: &[MethodRun]) -> Result<()> {
    fs::create_dir_all(&cfg.out_dir)?;
    write_meta(cfg)?;
    for m in methods {
        let dir = m.dir(&cfg.out_dir);
        fs::create_dir_all(&dir)?;
        let header = run_header(m.with_best_ever());
        let rows: Vec<Vec<String>> = m.records.iter().map(LogRecord::csv_row).collect();
        write_csv(&dir.join("run.csv"), &header, &rows)?;
        write_population_csv(&dir.join("final.csv"), &m.finals, None)?;
        if let Some(front) = &m.front_rows {
            write_population_csv(&dir.join("front.csv"), &m.finals, Some(front))?;
        }
        svg_convergence_plot(&dir.join("run.csv"), &dir.join("plot.svg"))?;
    }
    Ok(())
}

/// Writes `x0..x{n-1},f0..f{m-1}` rows for the whole batch or a row subset.
fn write_population_csv(path: &Path, batch: &SolutionBatch, rows: Option<&[usize]>) -> Result<()> {
    let n = batch.solution_length();
    let m = batch.num_objectives();
    let names: Vec<String> = (0..n)
        .map(|j| format!("x{j}"))
        .chain((0..m).map(|k| format!("f{k}")))
        .collect();
    let header: Vec<&str> = names.iter().map(String::as_str).collect();
    let all: Vec<usize> = (0..batch.rows()).collect();
    let rows = rows.unwrap_or(&all);
    let data: Vec<Vec<String>> = rows
        .iter()
        .map(|&r| {
            (0..n)
                .map(|j| fmt_f64(batch.values().get_f64(r, j)))
                .chain((0..m).map(|k| fmt_f64(batch.evals().get(r, k))))
                .collect()
        })
        .collect();
    write_csv(path, &header, &data)
}

pub fn write_meta(cfg: &RunConfig) -> Result<()> {
    let mut versions = BTreeMap::new();
    versions.insert("evokit".to_string(), evokit::VERSION.to_string());
    versions.insert(
        "evokit-bench".to_string(),
        env!("CARGO_PKG_VERSION").to_string(),
    );
    let meta = MetaFile {
        versions,
        config: cfg.clone(),
    };
    let json = serde_json::to_string_pretty(&meta)
        .map_err(|e| BenchError::Runtime(format!("cannot serialize meta.json: {e}")))?;
    fs::write(cfg.out_dir.join("meta.json"), json + "\n")?;
    Ok(())
}

pub fn read_meta(path: &Path) -> Result<MetaFile> {
    let text = fs::read_to_string(path)
        .map_err(|e| BenchError::Config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| BenchError::Config(format!("{}: invalid meta.json: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ScenarioKind;
    use evokit::{EvalMatrix, ValueMatrix};

    fn sample_batch() -> SolutionBatch {
        let values = ValueMatrix::from_f64(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let evals = EvalMatrix::from_vec(2, 1, vec![5.0, 25.0]).unwrap();
        SolutionBatch::from_parts(values, evals, vec![true, true]).unwrap()
    }

    fn sample_config(dir: &Path) -> RunConfig {
        RunConfig {
            scenario: ScenarioKind::RastriginSnes,
            popsize: 2,
            generations: 1,
            seed: 1,
            workers: 1,
            dim: 2,
            out_dir: dir.to_path_buf(),
            log_interval: 1,
            stdev_init: None,
            function: None,
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
    fn writes_all_files_and_meta_round_trips() {
        let tmp = std::env::temp_dir().join("evokit_output_test");
        let _ = fs::remove_dir_all(&tmp);
        let cfg = sample_config(&tmp);
        let method = MethodRun {
            name: None,
            records: vec![LogRecord {
                generation: 1,
                best_eval: 5.0,
                mean_eval: 15.0,
                median_eval: 15.0,
                best_ever: Some(5.0),
                elapsed_seconds: 0.01,
            }],
            finals: sample_batch(),
            front_rows: None,
        };
        write_outputs(&cfg, &[method]).unwrap();
        for f in ["run.csv", "final.csv", "plot.svg", "meta.json"] {
            assert!(tmp.join(f).exists(), "{f} missing");
        }
        let meta = read_meta(&tmp.join("meta.json")).unwrap();
        assert_eq!(meta.config, cfg);
        assert!(meta.versions.contains_key("evokit"));

        let final_csv = fs::read_to_string(tmp.join("final.csv")).unwrap();
        assert_eq!(final_csv, "x0,x1,f0\n1,2,5\n3,4,25\n");
    }

    #[test]
    fn front_rows_select_a_subset() {
        let tmp = std::env::temp_dir().join("evokit_output_front_test");
        let _ = fs::remove_dir_all(&tmp);
        let cfg = sample_config(&tmp);
        let method = MethodRun {
            name: Some("sub"),
            records: vec![LogRecord {
                generation: 1,
                best_eval: 5.0,
                mean_eval: 15.0,
                median_eval: 15.0,
                best_ever: None,
                elapsed_seconds: 0.0,
            }],
            finals: sample_batch(),
            front_rows: Some(vec![1]),
        };
        write_outputs(&cfg, &[method]).unwrap();
        let front = fs::read_to_string(tmp.join("sub/front.csv")).unwrap();
        assert_eq!(front, "x0,x1,f0\n3,4,25\n");
    }

    #[test]
    fn unreadable_meta_is_a_config_error() {
        let err = read_meta(Path::new("/nonexistent/meta.json")).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
