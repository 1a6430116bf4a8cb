//! Per-generation log records and the stdout progress logger.

use crate::csvio::fmt_f64;

/// One generation's summary; one row of `run.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogRecord {
    /// 1-based generation index, strictly increasing within a run.
    pub generation: usize,
    pub best_eval: f64,
    pub mean_eval: f64,
    pub median_eval: f64,
    /// Best evaluation seen in any generation so far; only tracked for
    /// single-objective scenarios.
    pub best_ever: Option<f64>,
    /// Cumulative wall-clock seconds since the run started (monotonic clock).
    pub elapsed_seconds: f64,
}

impl LogRecord {
    /// CSV row in header order ([`run_header`]).
    pub fn csv_row(&self) -> Vec<String> {
        let mut row = vec![
            self.generation.to_string(),
            fmt_f64(self.best_eval),
            fmt_f64(self.mean_eval),
            fmt_f64(self.median_eval),
        ];
        if let Some(b) = self.best_ever {
            row.push(fmt_f64(b));
        }
        row.push(fmt_f64(self.elapsed_seconds));
        row
    }

    /// The stdout progress line. Values are formatted exactly as in the CSV
    /// row so the two never disagree.
    pub fn stdout_line(&self) -> String {
        format!(
            "gen={} best={} mean={} median={}",
            self.generation,
            fmt_f64(self.best_eval),
            fmt_f64(self.mean_eval),
            fmt_f64(self.median_eval)
        )
    }
}

/// Header matching [`LogRecord::csv_row`] for runs with/without a best-ever
/// column.
pub fn run_header(with_best_ever: bool) -> Vec<&'static str> {
    if with_best_ever {
        vec!["generation", "best_eval", "mean_eval", "median_eval", "best_ever", "elapsed_seconds"]
    } else {
        vec!["generation", "best_eval", "mean_eval", "median_eval", "elapsed_seconds"]
    }
}

/// Prints one line every `interval` generations; the final generation is
/// always printed so scripts can read the terminal value.
pub struct StdoutLogger {
    interval: usize,
}

impl StdoutLogger {
    pub fn new(interval: usize) -> Self {
        Self {
            interval: interval.max(1),
        }
    }

    pub fn should_log(&self, generation: usize, total_generations: usize) -> bool {
        generation % self.interval == 0 || generation == total_generations
    }

    pub fn log(&self, record: &LogRecord, total_generations: usize) {
        if self.should_log(record.generation, total_generations) {
            println!("{}", record.stdout_line());
        }
    }
}
