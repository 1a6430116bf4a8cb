//! Batched solution storage.
//!
//! A population lives in two row-major contiguous blocks: decision values in a
//! [`ValueMatrix`] (one of four dtypes) and fitnesses in a float64
//! [`EvalMatrix`]. Row `i` of both belongs to solution `i`, together with a
//! per-row `evaluated` flag. Everything that extracts rows (slicing,
//! selection, concatenation) copies; batches never alias each other, so
//! mutating a slice can not corrupt its source.

use std::cmp::Ordering;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dtype {
    Float32,
    Float64,
    Int64,
    Bool,
}

/// Direction of improvement for one objective.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ObjectiveSense {
    Min,
    Max,
}

impl ObjectiveSense {
    /// True when `a` is strictly better than `b` under this sense.
    /// NaN is never better than anything.
    pub fn is_better(self, a: f64, b: f64) -> bool {
        match self {
            ObjectiveSense::Min => a < b,
            ObjectiveSense::Max => a > b,
        }
    }

    /// Total order with better values first. NaN always sorts last (worst),
    /// regardless of its sign bit, so orderings stay deterministic even when
    /// an evaluator produced non-finite fitnesses.
    pub fn cmp_better_first(self, a: f64, b: f64) -> Ordering {
        match (a.is_nan(), b.is_nan()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (false, false) => match self {
                ObjectiveSense::Min => a.total_cmp(&b),
                ObjectiveSense::Max => b.total_cmp(&a),
            },
        }
    }
}

/// Typed storage behind a [`ValueMatrix`].
#[derive(Clone, Debug, PartialEq)]
pub enum MatrixData {
    F32(Vec<f32>),
    F64(Vec<f64>),
    I64(Vec<i64>),
    Bool(Vec<bool>),
}

impl MatrixData {
    fn len(&self) -> usize {
        match self {
            MatrixData::F32(v) => v.len(),
            MatrixData::F64(v) => v.len(),
            MatrixData::I64(v) => v.len(),
            MatrixData::Bool(v) => v.len(),
        }
    }

    fn dtype(&self) -> Dtype {
        match self {
            MatrixData::F32(_) => Dtype::Float32,
            MatrixData::F64(_) => Dtype::Float64,
            MatrixData::I64(_) => Dtype::Int64,
            MatrixData::Bool(_) => Dtype::Bool,
        }
    }
}

/// Row-major matrix of decision values; one row per solution.
#[derive(Clone, Debug, PartialEq)]
pub struct ValueMatrix {
    rows: usize,
    cols: usize,
    data: MatrixData,
}

fn check_dims(rows: usize, cols: usize, len: usize) -> Result<()> {
    if cols == 0 {
        return Err(Error::Shape("matrix must have at least one column".into()));
    }
    let expect = rows
        .checked_mul(cols)
        .ok_or_else(|| Error::Shape(format!("{rows} x {cols} overflows")))?;
    if expect != len {
        return Err(Error::Shape(format!(
            "buffer length {len} does not match {rows} x {cols}"
        )));
    }
    Ok(())
}

impl ValueMatrix {
    pub fn new(rows: usize, cols: usize, data: MatrixData) -> Result<Self> {
        check_dims(rows, cols, data.len())?;
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize, dtype: Dtype) -> Result<Self> {
        let n = rows * cols;
        let data = match dtype {
            Dtype::Float32 => MatrixData::F32(vec![0.0; n]),
            Dtype::Float64 => MatrixData::F64(vec![0.0; n]),
            Dtype::Int64 => MatrixData::I64(vec![0; n]),
            Dtype::Bool => MatrixData::Bool(vec![false; n]),
        };
        Self::new(rows, cols, data)
    }

    pub fn from_f64(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        Self::new(rows, cols, MatrixData::F64(data))
    }

    pub fn from_f32(rows: usize, cols: usize, data: Vec<f32>) -> Result<Self> {
        Self::new(rows, cols, MatrixData::F32(data))
    }

    pub fn from_i64(rows: usize, cols: usize, data: Vec<i64>) -> Result<Self> {
        Self::new(rows, cols, MatrixData::I64(data))
    }

    pub fn from_bool(rows: usize, cols: usize, data: Vec<bool>) -> Result<Self> {
        Self::new(rows, cols, MatrixData::Bool(data))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dtype(&self) -> Dtype {
        self.data.dtype()
    }

    pub fn data(&self) -> &MatrixData {
        &self.data
    }

    pub fn f64_data(&self) -> Option<&[f64]> {
        match &self.data {
            MatrixData::F64(v) => Some(v),
            _ => None,
        }
    }

    pub fn f64_data_mut(&mut self) -> Option<&mut [f64]> {
        match &mut self.data {
            MatrixData::F64(v) => Some(v),
            _ => None,
        }
    }

    pub fn f32_data(&self) -> Option<&[f32]> {
        match &self.data {
            MatrixData::F32(v) => Some(v),
            _ => None,
        }
    }

    pub fn f32_data_mut(&mut self) -> Option<&mut [f32]> {
        match &mut self.data {
            MatrixData::F32(v) => Some(v),
            _ => None,
        }
    }

    pub fn i64_data(&self) -> Option<&[i64]> {
        match &self.data {
            MatrixData::I64(v) => Some(v),
            _ => None,
        }
    }

    pub fn i64_data_mut(&mut self) -> Option<&mut [i64]> {
        match &mut self.data {
            MatrixData::I64(v) => Some(v),
            _ => None,
        }
    }

    pub fn bool_data(&self) -> Option<&[bool]> {
        match &self.data {
            MatrixData::Bool(v) => Some(v),
            _ => None,
        }
    }

    pub fn bool_data_mut(&mut self) -> Option<&mut [bool]> {
        match &mut self.data {
            MatrixData::Bool(v) => Some(v),
            _ => None,
        }
    }

    fn check_row(&self, r: usize) -> Result<()> {
        if r >= self.rows {
            return Err(Error::Range(format!(
                "row {r} out of range for {} rows",
                self.rows
            )));
        }
        Ok(())
    }

    /// Numeric view of one cell: floats as-is, integers converted, bool as 0/1.
    pub fn get_f64(&self, r: usize, c: usize) -> f64 {
        debug_assert!(r < self.rows && c < self.cols);
        let i = r * self.cols + c;
        match &self.data {
            MatrixData::F32(v) => v[i] as f64,
            MatrixData::F64(v) => v[i],
            MatrixData::I64(v) => v[i] as f64,
            MatrixData::Bool(v) => v[i] as u8 as f64,
        }
    }

    /// Copy row `r` into a fresh f64 vector (same conversions as `get_f64`).
    pub fn row_f64(&self, r: usize) -> Vec<f64> {
        let (a, b) = (r * self.cols, (r + 1) * self.cols);
        match &self.data {
            MatrixData::F32(v) => v[a..b].iter().map(|&x| x as f64).collect(),
            MatrixData::F64(v) => v[a..b].to_vec(),
            MatrixData::I64(v) => v[a..b].iter().map(|&x| x as f64).collect(),
            MatrixData::Bool(v) => v[a..b].iter().map(|&x| x as u8 as f64).collect(),
        }
    }

    /// Copy of the row range `[start, end)`. The copy shares no storage with
    /// `self`.
    pub fn slice_rows(&self, start: usize, end: usize) -> Result<Self> {
        if start > end || end > self.rows {
            return Err(Error::Range(format!(
                "row range {start}..{end} invalid for {} rows",
                self.rows
            )));
        }
        let (a, b) = (start * self.cols, end * self.cols);
        let data = match &self.data {
            MatrixData::F32(v) => MatrixData::F32(v[a..b].to_vec()),
            MatrixData::F64(v) => MatrixData::F64(v[a..b].to_vec()),
            MatrixData::I64(v) => MatrixData::I64(v[a..b].to_vec()),
            MatrixData::Bool(v) => MatrixData::Bool(v[a..b].to_vec()),
        };
        Self::new(end - start, self.cols, data)
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn concat_rows(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::Shape(format!(
                "cannot concat {} cols with {} cols",
                self.cols, other.cols
            )));
        }
        let data = match (&self.data, &other.data) {
            (MatrixData::F32(a), MatrixData::F32(b)) => {
                MatrixData::F32(a.iter().chain(b).copied().collect())
            }
            (MatrixData::F64(a), MatrixData::F64(b)) => {
                MatrixData::F64(a.iter().chain(b).copied().collect())
            }
            (MatrixData::I64(a), MatrixData::I64(b)) => {
                MatrixData::I64(a.iter().chain(b).copied().collect())
            }
            (MatrixData::Bool(a), MatrixData::Bool(b)) => {
                MatrixData::Bool(a.iter().chain(b).copied().collect())
            }
            _ => {
                return Err(Error::Shape(format!(
                    "cannot concat {:?} with {:?}",
                    self.dtype(),
                    other.dtype()
                )))
            }
        };
        Self::new(self.rows + other.rows, self.cols, data)
    }

    /// New matrix whose row `k` is `self`'s row `idx[k]` (copies; indices may
    /// repeat).
    pub fn select_rows(&self, idx: &[usize]) -> Result<Self> {
        for &r in idx {
            self.check_row(r)?;
        }
        let cols = self.cols;
        macro_rules! gather {
            ($v:expr, $variant:ident) => {{
                let mut out = Vec::with_capacity(idx.len() * cols);
                for &r in idx {
                    out.extend_from_slice(&$v[r * cols..(r + 1) * cols]);
                }
                MatrixData::$variant(out)
            }};
        }
        let data = match &self.data {
            MatrixData::F32(v) => gather!(v, F32),
            MatrixData::F64(v) => gather!(v, F64),
            MatrixData::I64(v) => gather!(v, I64),
            MatrixData::Bool(v) => gather!(v, Bool),
        };
        Self::new(idx.len(), cols, data)
    }

    /// Swap the column block `[c0, c1)` between rows `ra` and `rb` in place
    /// (dtype-agnostic; used by crossover).
    pub fn swap_row_block(&mut self, ra: usize, rb: usize, c0: usize, c1: usize) -> Result<()> {
        self.check_row(ra)?;
        self.check_row(rb)?;
        if c0 > c1 || c1 > self.cols {
            return Err(Error::Range(format!(
                "column range {c0}..{c1} invalid for {} cols",
                self.cols
            )));
        }
        let cols = self.cols;
        macro_rules! swap_in {
            ($v:expr) => {
                for c in c0..c1 {
                    $v.swap(ra * cols + c, rb * cols + c)
                }
            };
        }
        match &mut self.data {
            MatrixData::F32(v) => swap_in!(v),
            MatrixData::F64(v) => swap_in!(v),
            MatrixData::I64(v) => swap_in!(v),
            MatrixData::Bool(v) => swap_in!(v),
        }
        Ok(())
    }

    /// Lossy conversion of the whole matrix to the requested float dtype.
    /// Identity when the dtype already matches.
    pub fn cast_float(&self, dtype: Dtype) -> Result<Self> {
        match (dtype, &self.data) {
            (Dtype::Float64, MatrixData::F64(_)) | (Dtype::Float32, MatrixData::F32(_)) => {
                Ok(self.clone())
            }
            (Dtype::Float32, MatrixData::F64(v)) => Self::new(
                self.rows,
                self.cols,
                MatrixData::F32(v.iter().map(|&x| x as f32).collect()),
            ),
            (Dtype::Float64, MatrixData::F32(v)) => Self::new(
                self.rows,
                self.cols,
                MatrixData::F64(v.iter().map(|&x| x as f64).collect()),
            ),
            _ => Err(Error::Contract(format!(
                "cast_float: cannot cast {:?} to {:?}",
                self.dtype(),
                dtype
            ))),
        }
    }
}

/// Row-major float64 fitness matrix; one row per solution, one column per
/// objective.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl EvalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        check_dims(rows, cols, rows * cols)?;
        Ok(Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        })
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        check_dims(rows, cols, data.len())?;
        Ok(Self { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Values of one column (one objective) across all rows.
    pub fn column(&self, c: usize) -> Result<Vec<f64>> {
        if c >= self.cols {
            return Err(Error::Range(format!(
                "column {c} out of range for {} cols",
                self.cols
            )));
        }
        Ok((0..self.rows).map(|r| self.get(r, c)).collect())
    }

    pub fn slice_rows(&self, start: usize, end: usize) -> Result<Self> {
        if start > end || end > self.rows {
            return Err(Error::Range(format!(
                "row range {start}..{end} invalid for {} rows",
                self.rows
            )));
        }
        Self::from_vec(
            end - start,
            self.cols,
            self.data[start * self.cols..end * self.cols].to_vec(),
        )
    }

    pub fn concat_rows(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::Shape(format!(
                "cannot concat {} cols with {} cols",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Self::from_vec(self.rows + other.rows, self.cols, data)
    }

    pub fn select_rows(&self, idx: &[usize]) -> Result<Self> {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &r in idx {
            if r >= self.rows {
                return Err(Error::Range(format!(
                    "row {r} out of range for {} rows",
                    self.rows
                )));
            }
            data.extend_from_slice(self.row(r));
        }
        Self::from_vec(idx.len(), self.cols, data)
    }
}

/// A population: values, fitnesses and per-row evaluated flags.
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionBatch {
    values: ValueMatrix,
    evals: EvalMatrix,
    evaluated: Vec<bool>,
}

impl SolutionBatch {
    /// Fresh batch with zeroed, unevaluated fitnesses.
    pub fn new(values: ValueMatrix, num_objectives: usize) -> Result<Self> {
        let rows = values.rows();
        Ok(Self {
            values,
            evals: EvalMatrix::zeros(rows, num_objectives)?,
            evaluated: vec![false; rows],
        })
    }

    pub fn from_parts(values: ValueMatrix, evals: EvalMatrix, evaluated: Vec<bool>) -> Result<Self> {
        if values.rows() != evals.rows() || values.rows() != evaluated.len() {
            return Err(Error::Shape(format!(
                "row counts disagree: values {}, evals {}, flags {}",
                values.rows(),
                evals.rows(),
                evaluated.len()
            )));
        }
        Ok(Self {
            values,
            evals,
            evaluated,
        })
    }

    pub fn rows(&self) -> usize {
        self.values.rows()
    }

    pub fn solution_length(&self) -> usize {
        self.values.cols()
    }

    pub fn num_objectives(&self) -> usize {
        self.evals.cols()
    }

    pub fn dtype(&self) -> Dtype {
        self.values.dtype()
    }

    pub fn values(&self) -> &ValueMatrix {
        &self.values
    }

    pub fn evals(&self) -> &EvalMatrix {
        &self.evals
    }

    pub fn evaluated(&self) -> &[bool] {
        &self.evaluated
    }

    pub fn is_fully_evaluated(&self) -> bool {
        self.evaluated.iter().all(|&f| f)
    }

    /// Store fitnesses for row `r` and mark it evaluated.
    pub fn set_eval_row(&mut self, r: usize, fitnesses: &[f64]) -> Result<()> {
        if r >= self.rows() {
            return Err(Error::Range(format!(
                "row {r} out of range for {} rows",
                self.rows()
            )));
        }
        if fitnesses.len() != self.num_objectives() {
            return Err(Error::Shape(format!(
                "expected {} objectives, got {}",
                self.num_objectives(),
                fitnesses.len()
            )));
        }
        self.evals.row_mut(r).copy_from_slice(fitnesses);
        self.evaluated[r] = true;
        Ok(())
    }

    /// Copy of rows `[start, end)`; fully detached from `self`.
    pub fn slice(&self, start: usize, end: usize) -> Result<Self> {
        Ok(Self {
            values: self.values.slice_rows(start, end)?,
            evals: self.evals.slice_rows(start, end)?,
            evaluated: self.evaluated[start..end].to_vec(),
        })
    }

    /// Rows of `self` followed by rows of `other`; dtypes, solution lengths
    /// and objective counts must agree.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        if self.num_objectives() != other.num_objectives() {
            return Err(Error::Shape(format!(
                "cannot concat {} objectives with {}",
                self.num_objectives(),
                other.num_objectives()
            )));
        }
        let mut evaluated = self.evaluated.clone();
        evaluated.extend_from_slice(&other.evaluated);
        Ok(Self {
            values: self.values.concat_rows(&other.values)?,
            evals: self.evals.concat_rows(&other.evals)?,
            evaluated,
        })
    }

    /// Copy of the rows listed in `idx`, in that order.
    pub fn select(&self, idx: &[usize]) -> Result<Self> {
        let evaluated = idx
            .iter()
            .map(|&r| {
                self.evaluated
                    .get(r)
                    .copied()
                    .ok_or_else(|| Error::Range(format!("row {r} out of range")))
            })
            .collect::<Result<Vec<bool>>>()?;
        Ok(Self {
            values: self.values.select_rows(idx)?,
            evals: self.evals.select_rows(idx)?,
            evaluated,
        })
    }

    /// Permutation of row indices ordering objective `obj` best-first under
    /// `sense`. The sort is stable, so equal fitnesses keep ascending row
    /// order. Requires a fully evaluated batch.
    pub fn argsort_by_objective(&self, obj: usize, sense: ObjectiveSense) -> Result<Vec<usize>> {
        if obj >= self.num_objectives() {
            return Err(Error::Range(format!(
                "objective {obj} out of range for {} objectives",
                self.num_objectives()
            )));
        }
        if !self.is_fully_evaluated() {
            return Err(Error::State(
                "argsort_by_objective requires a fully evaluated batch".into(),
            ));
        }
        let mut idx: Vec<usize> = (0..self.rows()).collect();
        idx.sort_by(|&i, &j| sense.cmp_better_first(self.evals.get(i, obj), self.evals.get(j, obj)));
        Ok(idx)
    }

    /// Best `k` rows of a single-objective batch, best-first, ties broken by
    /// lower row index.
    pub fn take_best(&self, k: usize, sense: ObjectiveSense) -> Result<Self> {
        if self.num_objectives() != 1 {
            return Err(Error::Contract(format!(
                "take_best requires a single-objective batch, got {} objectives",
                self.num_objectives()
            )));
        }
        if k > self.rows() {
            return Err(Error::Range(format!(
                "cannot take {k} rows from a batch of {}",
                self.rows()
            )));
        }
        let order = self.argsort_by_objective(0, sense)?;
        self.select(&order[..k])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn batch_1obj(values: Vec<f64>, evals: Vec<f64>) -> SolutionBatch {
        let rows = evals.len();
        let cols = values.len() / rows;
        let vm = ValueMatrix::from_f64(rows, cols, values).unwrap();
        let em = EvalMatrix::from_vec(rows, 1, evals).unwrap();
        SolutionBatch::from_parts(vm, em, vec![true; rows]).unwrap()
    }

    #[test]
    fn zero_columns_rejected() {
        assert!(matches!(
            ValueMatrix::zeros(3, 0, Dtype::Float64),
            Err(Error::Shape(_))
        ));
        assert!(matches!(EvalMatrix::zeros(3, 0), Err(Error::Shape(_))));
    }

    #[test]
    fn zero_rows_allowed() {
        let m = ValueMatrix::zeros(0, 4, Dtype::Int64).unwrap();
        assert_eq!(m.rows(), 0);
        assert_eq!(m.cols(), 4);
    }

    #[test]
    fn buffer_length_must_match() {
        assert!(matches!(
            ValueMatrix::from_f64(2, 3, vec![0.0; 5]),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn slice_is_a_copy() {
        let b = batch_1obj(vec![0.0, 1.0, 2.0, 3.0], vec![10.0, 11.0, 12.0, 13.0]);
        let mut s = b.slice(1, 3).unwrap();
        assert_eq!(s.rows(), 2);
        assert_eq!(s.values().row_f64(0), vec![1.0]);
        assert_eq!(s.evals().row(1), &[12.0]);
        // mutating the slice must not touch the original
        s.set_eval_row(0, &[99.0]).unwrap();
        if let Some(v) = s.values.f64_data_mut() {
            v[0] = -1.0;
        }
        assert_eq!(b.values().row_f64(1), vec![1.0]);
        assert_eq!(b.evals().get(1, 0), 11.0);
    }

    #[test]
    fn concat_dtype_mismatch_is_shape_error() {
        let a = ValueMatrix::zeros(2, 3, Dtype::Float32).unwrap();
        let b = ValueMatrix::zeros(2, 3, Dtype::Float64).unwrap();
        assert!(matches!(a.concat_rows(&b), Err(Error::Shape(_))));
    }

    #[test]
    fn concat_keeps_row_order() {
        let a = batch_1obj(vec![0.0, 1.0], vec![0.0, 1.0]);
        let b = batch_1obj(vec![2.0], vec![2.0]);
        let c = a.concat(&b).unwrap();
        assert_eq!(c.rows(), 3);
        assert_eq!(c.evals().column(0).unwrap(), vec![0.0, 1.0, 2.0]);
    }

    #[test]
    fn argsort_example() {
        // values [[3],[1],[2]], evals [0.5, 0.1, 0.9], Min -> [1, 0, 2]
        let b = batch_1obj(vec![3.0, 1.0, 2.0], vec![0.5, 0.1, 0.9]);
        assert_eq!(
            b.argsort_by_objective(0, ObjectiveSense::Min).unwrap(),
            vec![1, 0, 2]
        );
        assert_eq!(
            b.argsort_by_objective(0, ObjectiveSense::Max).unwrap(),
            vec![2, 0, 1]
        );
    }

    #[test]
    fn argsort_ties_keep_ascending_index() {
        let b = batch_1obj(vec![0.0; 4], vec![5.0, 3.0, 5.0, 3.0]);
        assert_eq!(
            b.argsort_by_objective(0, ObjectiveSense::Min).unwrap(),
            vec![1, 3, 0, 2]
        );
    }

    #[test]
    fn argsort_unevaluated_is_state_error() {
        let vm = ValueMatrix::zeros(3, 1, Dtype::Float64).unwrap();
        let b = SolutionBatch::new(vm, 1).unwrap();
        assert!(matches!(
            b.argsort_by_objective(0, ObjectiveSense::Min),
            Err(Error::State(_))
        ));
    }

    #[test]
    fn argsort_puts_nan_last() {
        let b = batch_1obj(vec![0.0; 4], vec![2.0, f64::NAN, 1.0, -f64::NAN]);
        assert_eq!(
            b.argsort_by_objective(0, ObjectiveSense::Min).unwrap(),
            vec![2, 0, 1, 3]
        );
        assert_eq!(
            b.argsort_by_objective(0, ObjectiveSense::Max).unwrap(),
            vec![0, 2, 1, 3]
        );
    }

    #[test]
    fn take_best_example() {
        // evals [7, 3, 9, 3], Min, k = 2 -> rows 1 and 3 (tie broken by index)
        let b = batch_1obj(vec![0.0, 1.0, 2.0, 3.0], vec![7.0, 3.0, 9.0, 3.0]);
        let best = b.take_best(2, ObjectiveSense::Min).unwrap();
        assert_eq!(best.values().row_f64(0), vec![1.0]);
        assert_eq!(best.values().row_f64(1), vec![3.0]);
        assert_eq!(best.evals().column(0).unwrap(), vec![3.0, 3.0]);
    }

    #[test]
    fn take_best_multiobjective_is_contract_error() {
        let vm = ValueMatrix::zeros(2, 1, Dtype::Float64).unwrap();
        let em = EvalMatrix::zeros(2, 2).unwrap();
        let b = SolutionBatch::from_parts(vm, em, vec![true, true]).unwrap();
        assert!(matches!(
            b.take_best(1, ObjectiveSense::Min),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn take_best_k_too_large_is_range_error() {
        let b = batch_1obj(vec![0.0], vec![1.0]);
        assert!(matches!(
            b.take_best(2, ObjectiveSense::Min),
            Err(Error::Range(_))
        ));
    }

    #[test]
    fn swap_row_block_swaps_middle() {
        let mut m = ValueMatrix::from_i64(2, 5, vec![0, 1, 2, 3, 4, 10, 11, 12, 13, 14]).unwrap();
        m.swap_row_block(0, 1, 1, 4).unwrap();
        assert_eq!(
            m.i64_data().unwrap(),
            &[0, 11, 12, 13, 4, 10, 1, 2, 3, 14]
        );
    }

    #[test]
    fn select_rows_copies_in_order() {
        let m = ValueMatrix::from_f64(3, 2, vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        let s = m.select_rows(&[2, 0, 2]).unwrap();
        assert_eq!(s.f64_data().unwrap(), &[4.0, 5.0, 0.0, 1.0, 4.0, 5.0]);
        assert!(matches!(m.select_rows(&[3]), Err(Error::Range(_))));
    }

    #[test]
    fn cast_float_round_trip_f32() {
        let m = ValueMatrix::from_f32(1, 3, vec![1.5, -2.25, 0.125]).unwrap();
        let up = m.cast_float(Dtype::Float64).unwrap();
        assert_eq!(up.f64_data().unwrap(), &[1.5, -2.25, 0.125]);
        let down = up.cast_float(Dtype::Float32).unwrap();
        assert_eq!(down, m);
        assert!(matches!(
            ValueMatrix::zeros(1, 1, Dtype::Int64)
                .unwrap()
                .cast_float(Dtype::Float64),
            Err(Error::Contract(_))
        ));
    }
}
