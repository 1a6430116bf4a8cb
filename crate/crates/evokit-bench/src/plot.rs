//! Self-contained SVG convergence plots: generation on the horizontal axis,
//! best_eval on the vertical axis, log10 scale when every value is positive.

use std::fs;
use std::path::Path;

use crate::csvio::{column_index, read_csv};
use crate::error::{BenchError, Result};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 20.0;
const MARGIN_BOTTOM: f64 = 45.0;

/// Reads `run_csv` and writes an SVG plotting best_eval over generations.
/// Malformed or empty CSV input is a config error (exit code 2).
pub fn svg_convergence_plot(run_csv: &Path, out_svg: &Path) -> Result<()> {
    let (header, rows) = read_csv(run_csv)?;
    if rows.is_empty() {
        return Err(BenchError::Config(format!(
            "{}: no data rows to plot",
            run_csv.display()
        )));
    }
    let gen_col = column_index(run_csv, &header, "generation")?;
    let best_col = column_index(run_csv, &header, "best_eval")?;
    let mut points = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let parse = |field: &str, name: &str| -> Result<f64> {
            field.parse::<f64>().map_err(|_| {
                BenchError::Config(format!(
                    "{}: row {}: {name} value {field:?} is not a number",
                    run_csv.display(),
                    i + 1
                ))
            })
        };
        points.push((
            parse(&row[gen_col], "generation")?,
            parse(&row[best_col], "best_eval")?,
        ));
    }
    fs::write(out_svg, render(&points))?;
    Ok(())
}

/// Renders the SVG document for the given (generation, best_eval) points.
pub fn render(points: &[(f64, f64)]) -> String {
    let log_scale = points.iter().all(|p| p.1 > 0.0);
    let ys: Vec<f64> = points
        .iter()
        .map(|p| if log_scale { p.1.log10() } else { p.1 })
        .collect();
    let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    let (x_lo, x_hi) = padded_range(&xs);
    let (y_lo, y_hi) = padded_range(&ys);

    let to_px = |x: f64, y: f64| -> (f64, f64) {
        let px = MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT);
        // SVG y grows downward.
        let py =
            HEIGHT - MARGIN_BOTTOM - (y - y_lo) / (y_hi - y_lo) * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM);
        (px, py)
    };

    let mut poly = String::new();
    for (&x, &y) in xs.iter().zip(&ys) {
        let (px, py) = to_px(x, y);
        poly.push_str(&format!("{px:.2},{py:.2} "));
    }
    let poly = poly.trim_end();

    let (ax0, ay0) = (MARGIN_LEFT, HEIGHT - MARGIN_BOTTOM);
    let y_label = if log_scale { "best_eval (log10)" } else { "best_eval" };
    let tick = |v: f64| format!("{v:.4}");

    format!(
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">
<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>
<line x1="{ax0}" y1="{MARGIN_TOP}" x2="{ax0}" y2="{ay0}" stroke="black"/>
<line x1="{ax0}" y1="{ay0}" x2="{axe}" y2="{ay0}" stroke="black"/>
<text x="{xmid}" y="{xlab_y}" text-anchor="middle" font-family="monospace" font-size="13">generation</text>
<text x="16" y="{ymid}" text-anchor="middle" font-family="monospace" font-size="13" transform="rotate(-90 16 {ymid})">{y_label}</text>
<text x="{ax0}" y="{xtick_y}" text-anchor="middle" font-family="monospace" font-size="11">{x_min}</text>
<text x="{axe}" y="{xtick_y}" text-anchor="middle" font-family="monospace" font-size="11">{x_max}</text>
<text x="{ytick_x}" y="{ay0}" text-anchor="end" font-family="monospace" font-size="11">{y_min}</text>
<text x="{ytick_x}" y="{yt_top}" text-anchor="end" font-family="monospace" font-size="11">{y_max}</text>
<polyline fill="none" stroke="#1f77b4" stroke-width="1.5" points="{poly}"/>
</svg>
"##,
        axe = WIDTH - MARGIN_RIGHT,
        xmid = (MARGIN_LEFT + WIDTH - MARGIN_RIGHT) / 2.0,
        xlab_y = HEIGHT - 8.0,
        ymid = (MARGIN_TOP + HEIGHT - MARGIN_BOTTOM) / 2.0,
        xtick_y = HEIGHT - MARGIN_BOTTOM + 16.0,
        x_min = tick(x_lo),
        x_max = tick(x_hi),
        ytick_x = MARGIN_LEFT - 6.0,
        y_min = tick(y_lo),
        y_max = tick(y_hi),
        yt_top = MARGIN_TOP + 4.0,
    )
}

fn padded_range(vals: &[f64]) -> (f64, f64) {
    let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}
