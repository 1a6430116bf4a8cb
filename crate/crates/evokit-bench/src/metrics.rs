//! Summary statistics shared by scenarios and acceptance checks.

use evokit::ObjectiveSense;

/// Mean of a non-empty slice.
pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Median (midpoint-averaged for even lengths), matching the engine's
/// per-generation status convention.
pub fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Best value of a non-empty slice under `sense`.
pub fn best(xs: &[f64], sense: ObjectiveSense) -> f64 {
    let mut b = xs[0];
    for &x in &xs[1..] {
        if sense.is_better(x, b) {
            b = x;
        }
    }
    b
}

/// Hypervolume of a 2-objective minimization front relative to a reference
/// point: the area dominated by the front and dominating the reference.
/// Points not strictly better than the reference in both objectives
/// contribute nothing; dominated points are harmless.
pub fn hypervolume_2d(front: &[(f64, f64)], reference: (f64, f64)) -> f64 {
    let mut pts: Vec<(f64, f64)> = front
        .iter()
        .copied()
        .filter(|p| p.0 < reference.0 && p.1 < reference.1)
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut hv = 0.0;
    let mut ceiling = reference.1;
    for (x, y) in pts {
        if y < ceiling {
            hv += (reference.0 - x) * (ceiling - y);
            ceiling = y;
        }
    }
    hv
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_handles_both_parities() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn best_respects_sense() {
        let xs = [1.0, -2.0, 5.0];
        assert_eq!(best(&xs, ObjectiveSense::Min), -2.0);
        assert_eq!(best(&xs, ObjectiveSense::Max), 5.0);
    }

    #[test]
    fn hypervolume_of_a_two_point_staircase() {
        let hv = hypervolume_2d(&[(0.0, 1.0), (1.0, 0.0)], (2.0, 2.0));
        assert_eq!(hv, 3.0);
    }

    #[test]
    fn hypervolume_ignores_points_beyond_the_reference() {
        let hv = hypervolume_2d(&[(0.0, 1.0), (3.0, -1.0)], (2.0, 2.0));
        assert_eq!(hv, 2.0);
    }

    #[test]
    fn hypervolume_is_unchanged_by_dominated_points() {
        let base = hypervolume_2d(&[(0.0, 1.0), (1.0, 0.0)], (2.0, 2.0));
        let with_dup = hypervolume_2d(&[(0.0, 1.0), (0.5, 1.5), (1.0, 0.0)], (2.0, 2.0));
        assert_eq!(base, with_dup);
    }

    #[test]
    fn single_point_hypervolume_is_its_rectangle() {
        assert_eq!(hypervolume_2d(&[(-1.0, 5.0)], (-0.5, 10.0)), 0.5 * 5.0);
    }
}
