//! Multi-objective ranking: dominance, fast non-dominated sorting, crowding
//! distance, and the combined ordering used to truncate merged populations.
//!
//! The sort is the classic two-phase algorithm: one pass computes, for every
//! solution, the set it dominates and how many times it is dominated; front
//! peeling then repeatedly releases solutions whose domination count reaches
//! zero. The dominance pass is O(n^2 m) and embarrassingly parallel over
//! rows, which is where the `parallel` feature plugs in.

use crate::batch::{EvalMatrix, ObjectiveSense};
use crate::error::{Error, Result};

/// Minimum row count before the dominance pass moves to rayon; below this the
/// fork overhead costs more than the work.
#[cfg(feature = "parallel")]
const PAR_THRESHOLD: usize = 256;

/// True when `a` Pareto-dominates `b`: no worse in every objective under the
/// matching sense and strictly better in at least one. Rows with NaN never
/// dominate and are never "no worse", so they end up mutually incomparable.
pub fn dominates(a: &[f64], b: &[f64], senses: &[ObjectiveSense]) -> Result<bool> {
    if a.len() != senses.len() || b.len() != senses.len() {
        return Err(Error::Shape(format!(
            "dominates: row lengths {} / {} vs {} senses",
            a.len(),
            b.len(),
            senses.len()
        )));
    }
    Ok(dominates_unchecked(a, b, senses))
}

fn dominates_unchecked(a: &[f64], b: &[f64], senses: &[ObjectiveSense]) -> bool {
    let mut strictly_better = false;
    for ((&av, &bv), &sense) in a.iter().zip(b).zip(senses) {
        if sense.is_better(bv, av) || av.is_nan() || bv.is_nan() {
            return false; // a worse somewhere (or incomparable)
        }
        if sense.is_better(av, bv) {
            strictly_better = true;
        }
    }
    strictly_better
}

/// Result of a non-dominated sort: fronts of row indices (front 0 first,
/// ascending index inside a front) plus one crowding-distance value per row,
/// computed within that row's front.
#[derive(Clone, Debug, PartialEq)]
pub struct ParetoFronts {
    pub fronts: Vec<Vec<usize>>,
    pub crowding: Vec<f64>,
}

impl ParetoFronts {
    /// Front index of every row (row -> 0-based front).
    pub fn rank_of(&self) -> Vec<usize> {
        let n: usize = self.fronts.iter().map(Vec::len).sum();
        let mut rank = vec![0usize; n];
        for (f, front) in self.fronts.iter().enumerate() {
            for &i in front {
                rank[i] = f;
            }
        }
        rank
    }
}

fn dominated_lists(evals: &EvalMatrix, senses: &[ObjectiveSense]) -> Vec<Vec<usize>> {
    let n = evals.rows();
    let row_dominated = |p: usize| -> Vec<usize> {
        let a = evals.row(p);
        (0..n)
            .filter(|&q| q != p && dominates_unchecked(a, evals.row(q), senses))
            .collect()
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        if n >= PAR_THRESHOLD {
            return (0..n).into_par_iter().map(row_dominated).collect();
        }
    }
    (0..n).map(row_dominated).collect()
}

/// Fast non-dominated sort with per-front crowding distances.
pub fn non_dominated_sort(evals: &EvalMatrix, senses: &[ObjectiveSense]) -> Result<ParetoFronts> {
    if evals.cols() != senses.len() {
        return Err(Error::Shape(format!(
            "{} objectives but {} senses",
            evals.cols(),
            senses.len()
        )));
    }
    let n = evals.rows();
    if n == 0 {
        return Ok(ParetoFronts {
            fronts: vec![],
            crowding: vec![],
        });
    }

    let dominated = dominated_lists(evals, senses);
    let mut count = vec![0usize; n];
    for list in &dominated {
        for &q in list {
            count[q] += 1;
        }
    }

    let mut fronts: Vec<Vec<usize>> = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&p| count[p] == 0).collect();
    let mut assigned = 0usize;
    while !current.is_empty() {
        assigned += current.len();
        let mut next = Vec::new();
        for &p in &current {
            for &q in &dominated[p] {
                count[q] -= 1;
                if count[q] == 0 {
                    next.push(q);
                }
            }
        }
        next.sort_unstable();
        fronts.push(std::mem::replace(&mut current, next));
    }
    debug_assert_eq!(assigned, n, "every row must land in exactly one front");

    let mut crowding = vec![0.0f64; n];
    for front in &fronts {
        let sub = evals.select_rows(front)?;
        let local = crowding_distance(&sub, senses)?;
        for (&row, d) in front.iter().zip(local) {
            crowding[row] = d;
        }
    }
    Ok(ParetoFronts { fronts, crowding })
}

/// Crowding distance of each row of `front_evals` (the rows of one front).
///
/// Per objective the front is sorted by value; the two boundary rows get
/// +inf and each interior row accumulates `(next - prev) / range`. An
/// objective whose range is zero contributes nothing to interior rows.
/// Fronts of one or two rows are all-boundary, hence all +inf.
pub fn crowding_distance(front_evals: &EvalMatrix, senses: &[ObjectiveSense]) -> Result<Vec<f64>> {
    if front_evals.cols() != senses.len() {
        return Err(Error::Shape(format!(
            "{} objectives but {} senses",
            front_evals.cols(),
            senses.len()
        )));
    }
    let n = front_evals.rows();
    if n == 0 {
        return Ok(vec![]);
    }
    if n <= 2 {
        return Ok(vec![f64::INFINITY; n]);
    }
    let mut dist = vec![0.0f64; n];
    for c in 0..front_evals.cols() {
        let mut idx: Vec<usize> = (0..n).collect();
        // ascending by raw value; boundaries are the extremes under either
        // sense, and the stable sort pins ties to ascending row order
        idx.sort_by(|&i, &j| front_evals.get(i, c).total_cmp(&front_evals.get(j, c)));
        dist[idx[0]] = f64::INFINITY;
        dist[idx[n - 1]] = f64::INFINITY;
        let range = front_evals.get(idx[n - 1], c) - front_evals.get(idx[0], c);
        if range == 0.0 || !range.is_finite() {
            continue;
        }
        for w in 1..n - 1 {
            let gap = front_evals.get(idx[w + 1], c) - front_evals.get(idx[w - 1], c);
            dist[idx[w]] += gap / range;
        }
    }
    Ok(dist)
}

/// Total selection order of all rows: ascending front index, then descending
/// crowding distance within a front, then ascending row index. Truncating a
/// merged population to its first `k` entries under this order is the
/// standard crowded-elitist survivor selection.
pub fn pareto_order(evals: &EvalMatrix, senses: &[ObjectiveSense]) -> Result<Vec<usize>> {
    let fronts = non_dominated_sort(evals, senses)?;
    let mut order = Vec::with_capacity(evals.rows());
    for front in &fronts.fronts {
        let mut members = front.clone();
        members.sort_by(|&i, &j| {
            fronts.crowding[j]
                .total_cmp(&fronts.crowding[i])
                .then(i.cmp(&j))
        });
        order.extend(members);
    }
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ObjectiveSense::{Max, Min};

    fn evals(rows: usize, cols: usize, data: Vec<f64>) -> EvalMatrix {
        EvalMatrix::from_vec(rows, cols, data).unwrap()
    }

    #[test]
    fn dominates_basic() {
        let mm = [Min, Min];
        assert!(dominates(&[1.0, 1.0], &[2.0, 2.0], &mm).unwrap());
        assert!(dominates(&[1.0, 2.0], &[2.0, 2.0], &mm).unwrap());
        assert!(!dominates(&[2.0, 2.0], &[2.0, 2.0], &mm).unwrap(), "equal rows do not dominate");
        assert!(!dominates(&[1.0, 3.0], &[2.0, 2.0], &mm).unwrap(), "trade-off is incomparable");
        // mixed senses: (min, max)
        let mx = [Min, Max];
        assert!(dominates(&[1.0, 5.0], &[2.0, 4.0], &mx).unwrap());
        assert!(!dominates(&[1.0, 3.0], &[2.0, 4.0], &mx).unwrap());
    }

    #[test]
    fn dominates_length_mismatch_is_shape_error() {
        assert!(matches!(
            dominates(&[1.0], &[1.0, 2.0], &[Min, Min]),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn nan_rows_are_incomparable() {
        let mm = [Min, Min];
        assert!(!dominates(&[f64::NAN, 0.0], &[1.0, 1.0], &mm).unwrap());
        assert!(!dominates(&[0.0, 0.0], &[f64::NAN, 1.0], &mm).unwrap());
    }

    #[test]
    fn sort_worked_example() {
        // min/min rows: a=(1,1) dominates c=(2,2); b=(0,3) and a trade off;
        // d=(3,0) and a trade off; c dominated by a only.
        let e = evals(4, 2, vec![1.0, 1.0, 0.0, 3.0, 2.0, 2.0, 3.0, 0.0]);
        let f = non_dominated_sort(&e, &[Min, Min]).unwrap();
        assert_eq!(f.fronts, vec![vec![0, 1, 3], vec![2]]);
    }

    #[test]
    fn sort_empty_input() {
        let e = EvalMatrix::zeros(0, 2).unwrap();
        let f = non_dominated_sort(&e, &[Min, Min]).unwrap();
        assert!(f.fronts.is_empty());
        assert!(f.crowding.is_empty());
    }

    #[test]
    fn sort_identical_rows_share_front_zero() {
        let e = evals(3, 2, vec![1.0, 1.0, 1.0, 1.0, 1.0, 1.0]);
        let f = non_dominated_sort(&e, &[Min, Min]).unwrap();
        assert_eq!(f.fronts, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn sort_single_chain() {
        // strictly ordered rows -> one singleton front each
        let e = evals(3, 2, vec![3.0, 3.0, 1.0, 1.0, 2.0, 2.0]);
        let f = non_dominated_sort(&e, &[Min, Min]).unwrap();
        assert_eq!(f.fronts, vec![vec![1], vec![2], vec![0]]);
    }

    #[test]
    fn crowding_worked_example() {
        // front evals [[1,5],[2,4],[3,3]]: boundaries inf, middle gets
        // (3-1)/2 + (5-3)/2 = 2.0
        let e = evals(3, 2, vec![1.0, 5.0, 2.0, 4.0, 3.0, 3.0]);
        let d = crowding_distance(&e, &[Min, Min]).unwrap();
        assert!(d[0].is_infinite());
        assert!(d[2].is_infinite());
        assert!((d[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn crowding_small_fronts_are_all_infinite() {
        let e = evals(2, 2, vec![1.0, 5.0, 3.0, 3.0]);
        let d = crowding_distance(&e, &[Min, Min]).unwrap();
        assert!(d.iter().all(|v| v.is_infinite()));
        let e = evals(1, 2, vec![1.0, 5.0]);
        assert!(crowding_distance(&e, &[Min, Min]).unwrap()[0].is_infinite());
        assert!(crowding_distance(&EvalMatrix::zeros(0, 2).unwrap(), &[Min, Min])
            .unwrap()
            .is_empty());
    }

    #[test]
    fn crowding_zero_range_objective_contributes_nothing() {
        // all rows equal on objective 1 -> only objective 0 spreads them
        let e = evals(4, 2, vec![0.0, 7.0, 1.0, 7.0, 2.0, 7.0, 4.0, 7.0]);
        let d = crowding_distance(&e, &[Min, Min]).unwrap();
        assert!(d[0].is_infinite());
        assert!(d[3].is_infinite());
        assert!((d[1] - (2.0 - 0.0) / 4.0).abs() < 1e-12);
        assert!((d[2] - (4.0 - 1.0) / 4.0).abs() < 1e-12);
    }

    #[test]
    fn crowding_sense_does_not_change_result() {
        let e = evals(4, 2, vec![1.0, 8.0, 2.0, 6.0, 3.0, 5.0, 5.0, 1.0]);
        let a = crowding_distance(&e, &[Min, Min]).unwrap();
        let b = crowding_distance(&e, &[Max, Max]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn pareto_order_single_front_by_crowding_then_index() {
        // one front of four trade-off points; boundaries get inf and the two
        // interior rows get distinct finite crowding
        let e = evals(4, 2, vec![0.0, 4.0, 1.0, 3.0, 2.5, 1.5, 3.0, 1.0]);
        let f = non_dominated_sort(&e, &[Min, Min]).unwrap();
        assert_eq!(f.fronts.len(), 1);
        let order = pareto_order(&e, &[Min, Min]).unwrap();
        // boundaries (rows 0 and 3, both inf) tie -> ascending index first
        assert_eq!(&order[..2], &[0, 3]);
        // interior rows follow, larger crowding first
        let c = f.crowding.clone();
        assert!(c[order[2]] >= c[order[3]]);
    }

    #[test]
    fn pareto_order_respects_front_boundaries() {
        let e = evals(4, 2, vec![1.0, 1.0, 0.0, 3.0, 2.0, 2.0, 3.0, 0.0]);
        let order = pareto_order(&e, &[Min, Min]).unwrap();
        assert_eq!(order.len(), 4);
        // row 2 is the only second-front member -> must come last
        assert_eq!(order[3], 2);
    }
}
