//! Vectorized stack-based genetic programming.
//!
//! Programs are rows of Int64 opcodes, executed in lockstep: step `t`
//! applies symbol `t` of every program (for every input case) to one big
//! [`BatchedStack`], so the interpreter always performs exactly `L` batch
//! steps for programs of length `L`, independent of the population size.
//!
//! The instruction set is a minimal arithmetic one. Binary operators pop the
//! right operand first (so `SUB` computes `second_pop - first_pop` and the
//! first pop of `DIV` is the denominator). Operand underflow turns the
//! symbol into a no-op for that program, and division by an absolute value
//! under [`DIV_EPSILON`] pushes 1.0.

use crate::batch::{Dtype, EvalMatrix, ValueMatrix};
use crate::error::{Error, Result};
use crate::problem::VectorizedFitness;
use crate::structures::BatchedStack;

/// Protected-division threshold: `|denominator| < DIV_EPSILON` yields 1.0.
pub const DIV_EPSILON: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(i64)]
pub enum Opcode {
    Pad = 0,
    PushX = 1,
    PushOne = 2,
    Add = 3,
    Sub = 4,
    Mul = 5,
    Div = 6,
}

impl Opcode {
    pub fn from_i64(v: i64) -> Option<Self> {
        match v {
            0 => Some(Self::Pad),
            1 => Some(Self::PushX),
            2 => Some(Self::PushOne),
            3 => Some(Self::Add),
            4 => Some(Self::Sub),
            5 => Some(Self::Mul),
            6 => Some(Self::Div),
            _ => None,
        }
    }

    pub fn is_binary(self) -> bool {
        matches!(self, Self::Add | Self::Sub | Self::Mul | Self::Div)
    }
}

/// Checks that `programs` is an Int64 matrix whose every cell is a valid
/// opcode. Runs before any execution so a bad genome can never half-run.
pub fn validate_programs(programs: &ValueMatrix) -> Result<&[i64]> {
    if programs.dtype() != Dtype::Int64 {
        return Err(Error::Validation(format!(
            "programs must be Int64, got {:?}",
            programs.dtype()
        )));
    }
    let data = programs.i64_data().expect("checked dtype");
    for (pos, &v) in data.iter().enumerate() {
        if Opcode::from_i64(v).is_none() {
            return Err(Error::Validation(format!(
                "invalid opcode {v} at program {}, symbol {}",
                pos / programs.cols(),
                pos % programs.cols()
            )));
        }
    }
    Ok(data)
}

/// Run every program on every input case. Output cell `(p, c)` is the final
/// top of program `p`'s stack for case `c`, or 0.0 when that stack ends
/// empty. See the module docs for operator semantics.
pub fn gp_interpret(programs: &ValueMatrix, cases: &[f64]) -> Result<ValueMatrix> {
    gp_interpret_counted(programs, cases).map(|(out, _)| out)
}

/// [`gp_interpret`] plus the number of batch steps the interpreter took,
/// which is exactly the program length whenever there is work to do.
pub fn gp_interpret_counted(programs: &ValueMatrix, cases: &[f64]) -> Result<(ValueMatrix, usize)> {
    let code = validate_programs(programs)?;
    let pop = programs.rows();
    let len = programs.cols();
    let n_cases = cases.len();
    if pop == 0 || n_cases == 0 {
        return Ok((ValueMatrix::from_f64(pop, n_cases, vec![])?, 0));
    }

    // one stack slot per (program, case); slot = p * n_cases + c
    let slots = pop * n_cases;
    let mut stack = BatchedStack::new(slots, len)?;
    let mut push_vals = vec![0.0f64; slots];
    let mut push_mask = vec![false; slots];
    let mut bin_mask = vec![false; slots];
    let mut steps = 0usize;

    for t in 0..len {
        push_mask.fill(false);
        bin_mask.fill(false);
        let depths = stack.lengths().to_vec();
        for p in 0..pop {
            let op = Opcode::from_i64(code[p * len + t]).expect("validated");
            let base = p * n_cases;
            match op {
                Opcode::Pad => {}
                Opcode::PushX => {
                    for c in 0..n_cases {
                        push_vals[base + c] = cases[c];
                        push_mask[base + c] = true;
                    }
                }
                Opcode::PushOne => {
                    for c in 0..n_cases {
                        push_vals[base + c] = 1.0;
                        push_mask[base + c] = true;
                    }
                }
                _ => {
                    // binary op: only slots holding two operands take part,
                    // the rest treat the symbol as a no-op (underflow rule)
                    for c in 0..n_cases {
                        bin_mask[base + c] = depths[base + c] >= 2;
                    }
                }
            }
        }

        stack.push_masked(&push_vals, &push_mask)?;

        let (rhs, _) = stack.pop_masked(&bin_mask)?;
        let (lhs, _) = stack.pop_masked(&bin_mask)?;
        let mut results = vec![0.0f64; slots];
        for p in 0..pop {
            let op = Opcode::from_i64(code[p * len + t]).expect("validated");
            if !op.is_binary() {
                continue;
            }
            let base = p * n_cases;
            for c in 0..n_cases {
                let s = base + c;
                if !bin_mask[s] {
                    continue;
                }
                let (a, b) = (rhs[s], lhs[s]);
                results[s] = match op {
                    Opcode::Add => b + a,
                    Opcode::Sub => b - a,
                    Opcode::Mul => b * a,
                    Opcode::Div => {
                        if a.abs() < DIV_EPSILON {
                            1.0
                        } else {
                            b / a
                        }
                    }
                    _ => unreachable!(),
                };
            }
        }
        stack.push_masked(&results, &bin_mask)?;
        steps += 1;
    }

    let all = vec![true; slots];
    let (tops, _) = stack.top_masked(&all)?;
    Ok((ValueMatrix::from_f64(pop, n_cases, tops)?, steps))
}

/// Mean squared error of each program against `target` over `cases`;
/// minimization fitnesses, one column.
pub fn gp_fitness<F>(programs: &ValueMatrix, target: F, cases: &[f64]) -> Result<EvalMatrix>
where
    F: Fn(f64) -> f64,
{
    if cases.is_empty() {
        return Err(Error::Config("gp_fitness needs at least one case".into()));
    }
    let targets: Vec<f64> = cases.iter().map(|&x| target(x)).collect();
    mse_against(programs, cases, &targets)
}

fn mse_against(programs: &ValueMatrix, cases: &[f64], targets: &[f64]) -> Result<EvalMatrix> {
    let outputs = gp_interpret(programs, cases)?;
    let data = outputs.f64_data().expect("interpreter emits f64");
    let n = cases.len() as f64;
    let fitnesses: Vec<f64> = (0..programs.rows())
        .map(|p| {
            let row = &data[p * cases.len()..(p + 1) * cases.len()];
            row.iter()
                .zip(targets)
                .map(|(o, t)| (o - t) * (o - t))
                .sum::<f64>()
                / n
        })
        .collect();
    EvalMatrix::from_vec(programs.rows(), 1, fitnesses)
}

/// Symbolic-regression fitness: MSE against fixed `(case, target)` pairs,
/// pluggable into a [`crate::problem::ProblemSpec`] over Int64 genomes.
pub struct SymbolicRegression {
    cases: Vec<f64>,
    targets: Vec<f64>,
}

impl SymbolicRegression {
    pub fn new(cases: Vec<f64>, targets: Vec<f64>) -> Result<Self> {
        if cases.is_empty() || cases.len() != targets.len() {
            return Err(Error::Config(format!(
                "need equal, non-zero case/target counts, got {} and {}",
                cases.len(),
                targets.len()
            )));
        }
        Ok(Self { cases, targets })
    }

    pub fn from_fn<F: Fn(f64) -> f64>(target: F, cases: Vec<f64>) -> Result<Self> {
        let targets = cases.iter().map(|&x| target(x)).collect();
        Self::new(cases, targets)
    }

    /// The default benchmark task: `x^2 + x + 1` on 16 cases evenly spaced
    /// in `[-2, 2]`.
    pub fn benchmark_default() -> Self {
        let cases: Vec<f64> = (0..16).map(|i| -2.0 + 4.0 * i as f64 / 15.0).collect();
        Self::from_fn(|x| x * x + x + 1.0, cases).expect("static task is well formed")
    }

    pub fn cases(&self) -> &[f64] {
        &self.cases
    }
}

impl VectorizedFitness for SymbolicRegression {
    fn num_objectives(&self) -> usize {
        1
    }

    fn eval(&self, values: &ValueMatrix) -> Result<EvalMatrix> {
        mse_against(values, &self.cases, &self.targets)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::batch::{ObjectiveSense, SolutionBatch};
    use crate::problem::ProblemSpec;
    use crate::rng::RngStream;
    use std::sync::Arc;

    const L: usize = 8;

    fn program(ops: &[Opcode]) -> ValueMatrix {
        assert!(ops.len() <= L);
        let mut row: Vec<i64> = ops.iter().map(|&o| o as i64).collect();
        row.resize(L, 0);
        ValueMatrix::from_i64(1, L, row).unwrap()
    }

    fn run_one(ops: &[Opcode], x: f64) -> f64 {
        let out = gp_interpret(&program(ops), &[x]).unwrap();
        out.get_f64(0, 0)
    }

    use Opcode::*;

    #[test]
    fn worked_example_push_push_add() {
        assert_eq!(run_one(&[PushX, PushX, Add], 3.0), 6.0);
    }

    #[test]
    fn all_pad_yields_empty_stack_default() {
        assert_eq!(run_one(&[], 123.0), 0.0);
    }

    #[test]
    fn protected_division_pops_denominator_first() {
        // stack grows 1 then x; DIV pops x as denominator
        assert_eq!(run_one(&[PushOne, PushX, Div], 0.0), 1.0);
        assert_eq!(run_one(&[PushOne, PushX, Div], 2.0), 0.5);
        // just under the threshold still protects; just over divides for real
        assert_eq!(run_one(&[PushOne, PushX, Div], 0.9e-9), 1.0);
        assert_eq!(run_one(&[PushOne, PushX, Div], 2e-9), 1.0 / 2e-9);
    }

    #[test]
    fn sub_uses_second_pop_as_left_operand() {
        assert_eq!(run_one(&[PushOne, PushX, Sub], 5.0), -4.0);
        assert_eq!(run_one(&[PushX, PushOne, Sub], 5.0), 4.0);
    }

    #[test]
    fn underflow_is_a_per_program_noop() {
        // ADD on an empty stack does nothing; the later push still works
        assert_eq!(run_one(&[Add, PushX], 7.0), 7.0);
        // ADD with only one operand leaves the stack depth unchanged
        assert_eq!(run_one(&[PushOne, Add], 0.0), 1.0);
    }

    #[test]
    fn invalid_opcode_fails_validation_before_execution() {
        let bad = ValueMatrix::from_i64(2, 3, vec![1, 2, 3, 0, 7, 0]).unwrap();
        match gp_interpret(&bad, &[1.0]) {
            Err(Error::Validation(msg)) => {
                assert!(msg.contains("7"), "{msg}");
                assert!(msg.contains("program 1"), "{msg}");
            }
            other => panic!("expected validation error, got {other:?}"),
        }
        let negative = ValueMatrix::from_i64(1, 2, vec![-1, 0]).unwrap();
        assert!(matches!(
            gp_interpret(&negative, &[1.0]),
            Err(Error::Validation(_))
        ));
        let wrong_dtype = ValueMatrix::from_f64(1, 2, vec![1.0, 2.0]).unwrap();
        assert!(matches!(
            gp_interpret(&wrong_dtype, &[1.0]),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn interpreter_takes_exactly_l_steps_regardless_of_popsize() {
        for pop in [1usize, 7, 100] {
            let programs = ValueMatrix::from_i64(pop, L, vec![1; pop * L]).unwrap();
            let (_, steps) = gp_interpret_counted(&programs, &[0.5, 1.5]).unwrap();
            assert_eq!(steps, L, "popsize {pop}");
        }
    }

    #[test]
    fn output_shape_is_population_by_cases() {
        let programs = ValueMatrix::from_i64(3, 4, vec![1; 12]).unwrap();
        let out = gp_interpret(&programs, &[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        assert_eq!((out.rows(), out.cols()), (3, 5));
        // PUSH_X programs echo the case value
        for c in 0..5 {
            assert_eq!(out.get_f64(1, c), (c + 1) as f64);
        }
    }

    #[test]
    fn fitness_perfect_program_scores_zero() {
        // x * x computed as [PUSH_X, PUSH_X, MUL]
        let fit = gp_fitness(&program(&[PushX, PushX, Mul]), |x| x * x, &[1.0, 2.0]).unwrap();
        assert_eq!(fit.get(0, 0), 0.0);
    }

    #[test]
    fn fitness_all_pad_against_square_is_8_5() {
        let fit = gp_fitness(&program(&[]), |x| x * x, &[1.0, 2.0]).unwrap();
        assert_eq!(fit.get(0, 0), 8.5);
    }

    #[test]
    fn fitness_is_never_negative() {
        let mut ops = Vec::new();
        let mut seed = 0x9e3779b97f4a7c15u64;
        for _ in 0..200 * L {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ops.push((seed >> 33) as i64 % 7);
        }
        let programs = ValueMatrix::from_i64(200, L, ops).unwrap();
        let fit = gp_fitness(&programs, |x| x * x + x + 1.0, &[-1.0, 0.0, 1.0]).unwrap();
        for p in 0..200 {
            assert!(fit.get(p, 0) >= 0.0);
        }
    }

    #[test]
    fn fitness_without_cases_is_config_error() {
        assert!(matches!(
            gp_fitness(&program(&[PushOne]), |x| x, &[]),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn symbolic_regression_is_worker_count_invariant() {
        let task = SymbolicRegression::benchmark_default();
        let base = ProblemSpec::new(
            vec![ObjectiveSense::Min],
            L,
            Dtype::Int64,
            Arc::new(task),
        )
        .unwrap()
        .with_bounds(0.0, 6.0)
        .unwrap();

        let mut results = Vec::new();
        for workers in [1usize, 2, 4, 8] {
            let spec = base.clone().with_workers(workers).unwrap();
            let mut batch = spec.generate_batch(64, RngStream::new(42)).unwrap();
            spec.evaluate(&mut batch).unwrap();
            results.push(batch);
        }
        for other in &results[1..] {
            assert_eq!(&results[0], other);
        }
    }

    #[test]
    fn symbolic_regression_rejects_bad_shapes() {
        assert!(SymbolicRegression::new(vec![], vec![]).is_err());
        assert!(SymbolicRegression::new(vec![1.0], vec![1.0, 2.0]).is_err());
        let task = SymbolicRegression::benchmark_default();
        assert_eq!(task.cases().len(), 16);
        assert_eq!(task.cases()[0], -2.0);
        assert_eq!(*task.cases().last().unwrap(), 2.0);
    }

    #[test]
    fn interpreter_agrees_with_scalar_reference_on_handful() {
        // a small in-module cross-check; the 1000-program oracle lives in
        // the integration suite
        fn scalar(ops: &[i64], x: f64) -> f64 {
            let mut st: Vec<f64> = Vec::new();
            for &op in ops {
                match op {
                    0 => {}
                    1 => st.push(x),
                    2 => st.push(1.0),
                    3..=6 => {
                        if st.len() >= 2 {
                            let a = st.pop().unwrap();
                            let b = st.pop().unwrap();
                            st.push(match op {
                                3 => b + a,
                                4 => b - a,
                                5 => b * a,
                                _ => {
                                    if a.abs() < DIV_EPSILON {
                                        1.0
                                    } else {
                                        b / a
                                    }
                                }
                            });
                        }
                    }
                    _ => unreachable!(),
                }
            }
            st.last().copied().unwrap_or(0.0)
        }

        let progs: Vec<Vec<i64>> = vec![
            vec![1, 2, 3, 1, 5, 0, 0, 0],
            vec![2, 2, 3, 1, 6, 4, 1, 3],
            vec![6, 5, 4, 3, 2, 1, 0, 0],
            vec![1, 1, 1, 5, 5, 2, 4, 6],
        ];
        let flat: Vec<i64> = progs.iter().flatten().copied().collect();
        let matrix = ValueMatrix::from_i64(4, 8, flat).unwrap();
        let cases = [-2.0, -0.5, 0.0, 1.0, 3.0];
        let out = gp_interpret(&matrix, &cases).unwrap();
        for (p, ops) in progs.iter().enumerate() {
            for (c, &x) in cases.iter().enumerate() {
                let expect = scalar(ops, x);
                let got = out.get_f64(p, c);
                assert!(
                    got == expect || (got.is_nan() && expect.is_nan()),
                    "program {p}, x = {x}: {got} vs {expect}"
                );
            }
        }
    }

    #[test]
    fn evaluated_batch_flags_are_set() {
        let programs = ValueMatrix::from_i64(4, L, vec![1; 4 * L]).unwrap();
        let spec = ProblemSpec::new(
            vec![ObjectiveSense::Min],
            L,
            Dtype::Int64,
            Arc::new(SymbolicRegression::benchmark_default()),
        )
        .unwrap();
        let mut batch = SolutionBatch::new(programs, 1).unwrap();
        spec.evaluate(&mut batch).unwrap();
        assert!(batch.is_fully_evaluated());
    }
}
