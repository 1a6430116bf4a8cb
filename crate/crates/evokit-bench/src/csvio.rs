//! Minimal CSV reading/writing with deterministic float formatting.
//!
//! Floats are written with `{}` — Rust's shortest representation that parses
//! back to the same bits — so identical runs produce byte-identical files and
//! diffs are meaningful. No quoting is needed: the harness never emits commas
//! or newlines inside fields.

use std::fs;
use std::path::Path;

use crate::error::{BenchError, Result};

/// Shortest round-trip decimal form (`.` decimal point, full precision).
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut out = String::with_capacity(rows.len() * 32 + 64);
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        out.push_str(&row.join(","));
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

/// Reads a CSV written by [`write_csv`]. Returns (header, data rows).
/// Structural problems (no header, ragged rows) are config errors so that
/// consumers such as `plot` exit with code 2 on malformed input.
pub fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let text = fs::read_to_string(path)
        .map_err(|e| BenchError::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut lines = text.lines();
    let header: Vec<String> = match lines.next() {
        Some(h) if !h.trim().is_empty() => h.split(',').map(str::to_owned).collect(),
        _ => {
            return Err(BenchError::Config(format!(
                "{}: missing CSV header",
                path.display()
            )))
        }
    };
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let row: Vec<String> = line.split(',').map(str::to_owned).collect();
        if row.len() != header.len() {
            return Err(BenchError::Config(format!(
                "{}: row {} has {} fields, header has {}",
                path.display(),
                i + 1,
                row.len(),
                header.len()
            )));
        }
        rows.push(row);
    }
    Ok((header, rows))
}

/// Index of `name` in the header, or a config error naming the file.
pub fn column_index(path: &Path, header: &[String], name: &str) -> Result<usize> {
    header.iter().position(|h| h == name).ok_or_else(|| {
        BenchError::Config(format!("{}: missing column {name:?}", path.display()))
    })
}
