//! Randomized equivalence of the fast non-dominated sort against a direct
//! O(n^2 m) brute-force front construction, on instances drawn from a small
//! integer grid so ties and duplicate rows are common.

use evokit::{
    pareto::{dominates, non_dominated_sort, pareto_order},
    EvalMatrix, ObjectiveSense, RngStream,
};
use rand::Rng;

struct Instance {
    evals: EvalMatrix,
    senses: Vec<ObjectiveSense>,
    rows: usize,
}

fn random_instance(stream: RngStream) -> Instance {
    let mut rng = stream.rng();
    let rows = rng.random_range(1..=64usize);
    let m = rng.random_range(1..=4usize);
    let senses: Vec<ObjectiveSense> = (0..m)
        .map(|_| {
            if rng.random::<bool>() {
                ObjectiveSense::Min
            } else {
                ObjectiveSense::Max
            }
        })
        .collect();
    let data: Vec<f64> = (0..rows * m).map(|_| rng.random_range(0..=5) as f64).collect();
    Instance {
        evals: EvalMatrix::from_vec(rows, m, data).unwrap(),
        senses,
        rows,
    }
}

/// Peel fronts by repeatedly collecting the rows not dominated by any other
/// remaining row. Quadratic and obviously correct.
fn brute_force_fronts(inst: &Instance) -> Vec<Vec<usize>> {
    let mut remaining: Vec<usize> = (0..inst.rows).collect();
    let mut fronts = Vec::new();
    while !remaining.is_empty() {
        let mut front = Vec::new();
        for &i in &remaining {
            let a = inst.evals.row(i).to_vec();
            let dominated = remaining.iter().any(|&j| {
                j != i && dominates(&inst.evals.row(j).to_vec(), &a, &inst.senses).unwrap()
            });
            if !dominated {
                front.push(i);
            }
        }
        remaining.retain(|i| !front.contains(i));
        fronts.push(front);
    }
    fronts
}

#[test]
fn sort_matches_brute_force_on_200_instances() {
    let base = RngStream::new(0xbeef);
    for case in 0..200u64 {
        let inst = random_instance(base.substream(case));
        let fast = non_dominated_sort(&inst.evals, &inst.senses).unwrap();
        let oracle = brute_force_fronts(&inst);
        assert_eq!(
            fast.fronts, oracle,
            "instance {case}: rows {} objectives {}",
            inst.rows,
            inst.senses.len()
        );
    }
}

#[test]
fn dominance_is_antisymmetric_on_random_pairs() {
    let base = RngStream::new(0xabba);
    for case in 0..50u64 {
        let inst = random_instance(base.substream(case));
        for i in 0..inst.rows {
            for j in 0..inst.rows {
                let a = inst.evals.row(i).to_vec();
                let b = inst.evals.row(j).to_vec();
                let ab = dominates(&a, &b, &inst.senses).unwrap();
                let ba = dominates(&b, &a, &inst.senses).unwrap();
                assert!(!(ab && ba), "instance {case}: rows {i} and {j} dominate each other");
            }
        }
    }
}

#[test]
fn sense_duality_leaves_fronts_unchanged() {
    let base = RngStream::new(0xd0d0);
    for case in 0..50u64 {
        let inst = random_instance(base.substream(case));
        let fast = non_dominated_sort(&inst.evals, &inst.senses).unwrap();

        let flipped_senses: Vec<ObjectiveSense> = inst
            .senses
            .iter()
            .map(|s| match s {
                ObjectiveSense::Min => ObjectiveSense::Max,
                ObjectiveSense::Max => ObjectiveSense::Min,
            })
            .collect();
        let m = inst.senses.len();
        let negated: Vec<f64> = (0..inst.rows)
            .flat_map(|r| inst.evals.row(r).iter().map(|v| -v).collect::<Vec<_>>())
            .collect();
        let negated = EvalMatrix::from_vec(inst.rows, m, negated).unwrap();
        let dual = non_dominated_sort(&negated, &flipped_senses).unwrap();
        assert_eq!(fast.fronts, dual.fronts, "instance {case}");
    }
}

#[test]
fn pareto_order_never_places_dominated_before_dominating() {
    let base = RngStream::new(0xcafe);
    for case in 0..50u64 {
        let inst = random_instance(base.substream(case));
        let order = pareto_order(&inst.evals, &inst.senses).unwrap();
        let mut position = vec![0usize; inst.rows];
        for (pos, &row) in order.iter().enumerate() {
            position[row] = pos;
        }
        for i in 0..inst.rows {
            for j in 0..inst.rows {
                if i == j {
                    continue;
                }
                let a = inst.evals.row(i).to_vec();
                let b = inst.evals.row(j).to_vec();
                if dominates(&a, &b, &inst.senses).unwrap() {
                    assert!(
                        position[i] < position[j],
                        "instance {case}: dominating row {i} placed after dominated row {j}"
                    );
                }
            }
        }
    }
}
