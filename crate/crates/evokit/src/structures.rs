//! Batched variable-length containers over one contiguous Float64 buffer.
//!
//! A `BatchedList` behaves like `batch_size` independent bounded lists, but
//! every operation is a single masked pass over flat storage, which is what
//! lets the GP interpreter run one stack per program slot in lockstep.
//! Appending to a full slot is a saturating no-op that sets a sticky
//! per-slot overflow flag; popping an empty slot reports `valid = false`
//! instead of failing, so batch operations are total.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct BatchedList {
    batch_size: usize,
    max_length: usize,
    storage: Vec<f64>,
    lengths: Vec<usize>,
    overflowed: Vec<bool>,
}

impl BatchedList {
    pub fn new(batch_size: usize, max_length: usize) -> Result<Self> {
        if batch_size == 0 || max_length == 0 {
            return Err(Error::Config(format!(
                "batch_size and max_length must be >= 1, got {batch_size} and {max_length}"
            )));
        }
        Ok(Self {
            batch_size,
            max_length,
            storage: vec![0.0; batch_size * max_length],
            lengths: vec![0; batch_size],
            overflowed: vec![false; batch_size],
        })
    }

    pub fn batch_size(&self) -> usize {
        self.batch_size
    }

    pub fn max_length(&self) -> usize {
        self.max_length
    }

    /// Per-slot element counts.
    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    /// Sticky per-slot flags: true once a masked append hit a full slot.
    pub fn overflowed(&self) -> &[bool] {
        &self.overflowed
    }

    /// Element `idx` of slot `slot`, or `None` when `idx` is past that
    /// slot's current length (cells beyond the length are never exposed).
    pub fn get(&self, slot: usize, idx: usize) -> Option<f64> {
        if slot >= self.batch_size || idx >= self.lengths[slot] {
            return None;
        }
        Some(self.storage[slot * self.max_length + idx])
    }

    fn check_width(&self, what: &str, len: usize) -> Result<()> {
        if len != self.batch_size {
            return Err(Error::Shape(format!(
                "{what} has {len} entries but batch_size is {}",
                self.batch_size
            )));
        }
        Ok(())
    }

    /// Append `values[i]` to every slot `i` with `mask[i]` set. Full slots
    /// drop the value and set their overflow flag; unmasked slots are left
    /// bit-identical.
    pub fn append_masked(&mut self, values: &[f64], mask: &[bool]) -> Result<()> {
        self.check_width("values", values.len())?;
        self.check_width("mask", mask.len())?;
        for i in 0..self.batch_size {
            if !mask[i] {
                continue;
            }
            let len = self.lengths[i];
            if len == self.max_length {
                self.overflowed[i] = true;
            } else {
                self.storage[i * self.max_length + len] = values[i];
                self.lengths[i] = len + 1;
            }
        }
        Ok(())
    }

    /// Remove and return the last element of every masked slot. Slots that
    /// are unmasked or empty report `valid = false` and value 0.
    pub fn pop_masked(&mut self, mask: &[bool]) -> Result<(Vec<f64>, Vec<bool>)> {
        self.check_width("mask", mask.len())?;
        let mut values = vec![0.0; self.batch_size];
        let mut valid = vec![false; self.batch_size];
        for i in 0..self.batch_size {
            if mask[i] && self.lengths[i] > 0 {
                self.lengths[i] -= 1;
                values[i] = self.storage[i * self.max_length + self.lengths[i]];
                valid[i] = true;
            }
        }
        Ok((values, valid))
    }

    /// [`Self::pop_masked`] without the mutation.
    pub fn top_masked(&self, mask: &[bool]) -> Result<(Vec<f64>, Vec<bool>)> {
        self.check_width("mask", mask.len())?;
        let mut values = vec![0.0; self.batch_size];
        let mut valid = vec![false; self.batch_size];
        for i in 0..self.batch_size {
            if mask[i] && self.lengths[i] > 0 {
                values[i] = self.storage[i * self.max_length + self.lengths[i] - 1];
                valid[i] = true;
            }
        }
        Ok((values, valid))
    }
}

/// `batch_size` independent bounded LIFO stacks over the same contiguous
/// storage kernel as [`BatchedList`].
#[derive(Clone, Debug, PartialEq)]
pub struct BatchedStack {
    inner: BatchedList,
}

impl BatchedStack {
    pub fn new(batch_size: usize, max_length: usize) -> Result<Self> {
        Ok(Self {
            inner: BatchedList::new(batch_size, max_length)?,
        })
    }

    pub fn batch_size(&self) -> usize {
        self.inner.batch_size()
    }

    pub fn max_length(&self) -> usize {
        self.inner.max_length()
    }

    pub fn lengths(&self) -> &[usize] {
        self.inner.lengths()
    }

    pub fn overflowed(&self) -> &[bool] {
        self.inner.overflowed()
    }

    /// Push onto every masked slot; full slots saturate with the sticky
    /// overflow flag, exactly like a masked append.
    pub fn push_masked(&mut self, values: &[f64], mask: &[bool]) -> Result<()> {
        self.inner.append_masked(values, mask)
    }

    pub fn pop_masked(&mut self, mask: &[bool]) -> Result<(Vec<f64>, Vec<bool>)> {
        self.inner.pop_masked(mask)
    }

    pub fn top_masked(&self, mask: &[bool]) -> Result<(Vec<f64>, Vec<bool>)> {
        self.inner.top_masked(mask)
    }

    /// Element `idx` (bottom-up) of slot `slot`, when within its length.
    pub fn get(&self, slot: usize, idx: usize) -> Option<f64> {
        self.inner.get(slot, idx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_dimensions() {
        assert!(matches!(BatchedList::new(0, 4), Err(Error::Config(_))));
        assert!(matches!(BatchedList::new(4, 0), Err(Error::Config(_))));
    }

    #[test]
    fn append_all_false_mask_is_a_noop() {
        let mut list = BatchedList::new(3, 2).unwrap();
        let before = list.clone();
        list.append_masked(&[1.0, 2.0, 3.0], &[false; 3]).unwrap();
        assert_eq!(list, before);
    }

    #[test]
    fn append_all_true_fills_element_zero() {
        let mut list = BatchedList::new(3, 2).unwrap();
        list.append_masked(&[1.0, 2.0, 3.0], &[true; 3]).unwrap();
        assert_eq!(list.lengths(), &[1, 1, 1]);
        assert_eq!(list.get(0, 0), Some(1.0));
        assert_eq!(list.get(1, 0), Some(2.0));
        assert_eq!(list.get(2, 0), Some(3.0));
        assert_eq!(list.get(0, 1), None);
    }

    #[test]
    fn overflow_is_saturating_and_sticky() {
        let mut list = BatchedList::new(2, 1).unwrap();
        list.append_masked(&[1.0, 2.0], &[true, true]).unwrap();
        assert_eq!(list.overflowed(), &[false, false]);
        // slot 0 is full; appending again must not write and must flag it
        list.append_masked(&[9.0, 9.0], &[true, false]).unwrap();
        assert_eq!(list.lengths(), &[1, 1]);
        assert_eq!(list.get(0, 0), Some(1.0));
        assert_eq!(list.overflowed(), &[true, false]);
        // flag stays set even after room opens up again
        let mut stack = BatchedStack::new(1, 1).unwrap();
        stack.push_masked(&[1.0], &[true]).unwrap();
        stack.push_masked(&[2.0], &[true]).unwrap();
        stack.pop_masked(&[true]).unwrap();
        stack.push_masked(&[3.0], &[true]).unwrap();
        assert_eq!(stack.overflowed(), &[true]);
    }

    #[test]
    fn shape_mismatches_are_shape_errors() {
        let mut list = BatchedList::new(3, 2).unwrap();
        assert!(matches!(
            list.append_masked(&[1.0], &[true; 3]),
            Err(Error::Shape(_))
        ));
        assert!(matches!(
            list.append_masked(&[1.0; 3], &[true; 2]),
            Err(Error::Shape(_))
        ));
        let mut stack = BatchedStack::new(3, 2).unwrap();
        assert!(matches!(stack.pop_masked(&[true]), Err(Error::Shape(_))));
        assert!(matches!(stack.top_masked(&[true]), Err(Error::Shape(_))));
    }

    #[test]
    fn pop_from_empty_reports_invalid() {
        let mut stack = BatchedStack::new(3, 2).unwrap();
        let (values, valid) = stack.pop_masked(&[true, true, false]).unwrap();
        assert_eq!(values, vec![0.0; 3]);
        assert_eq!(valid, vec![false; 3]);
        assert_eq!(stack.lengths(), &[0, 0, 0]);
    }

    #[test]
    fn push_then_pop_round_trips() {
        let mut stack = BatchedStack::new(2, 4).unwrap();
        stack.push_masked(&[1.5, -2.5], &[true, true]).unwrap();
        let (values, valid) = stack.pop_masked(&[true, true]).unwrap();
        assert_eq!(values, vec![1.5, -2.5]);
        assert_eq!(valid, vec![true, true]);
        assert_eq!(stack.lengths(), &[0, 0]);
    }

    #[test]
    fn lifo_order_per_slot() {
        let mut stack = BatchedStack::new(1, 4).unwrap();
        for v in [1.0, 2.0, 3.0] {
            stack.push_masked(&[v], &[true]).unwrap();
        }
        let mut seen = Vec::new();
        for _ in 0..3 {
            let (values, valid) = stack.pop_masked(&[true]).unwrap();
            assert_eq!(valid, vec![true]);
            seen.push(values[0]);
        }
        assert_eq!(seen, vec![3.0, 2.0, 1.0]);
    }

    #[test]
    fn top_is_pure() {
        let mut stack = BatchedStack::new(2, 3).unwrap();
        stack.push_masked(&[7.0, 8.0], &[true, false]).unwrap();
        let snapshot = stack.clone();
        let first = stack.top_masked(&[true, true]).unwrap();
        let second = stack.top_masked(&[true, true]).unwrap();
        assert_eq!(first, second);
        assert_eq!(first.0, vec![7.0, 0.0]);
        assert_eq!(first.1, vec![true, false]);
        assert_eq!(stack, snapshot);
    }

    #[test]
    fn unmasked_slots_are_untouched_by_mixed_traffic() {
        let mut stack = BatchedStack::new(4, 3).unwrap();
        stack
            .push_masked(&[1.0, 2.0, 3.0, 4.0], &[true; 4])
            .unwrap();
        let before = stack.clone();
        // traffic only on slots 0 and 2
        let mask = [true, false, true, false];
        stack.push_masked(&[10.0, 0.0, 30.0, 0.0], &mask).unwrap();
        stack.pop_masked(&mask).unwrap();
        stack.pop_masked(&mask).unwrap();
        stack.push_masked(&[11.0, 0.0, 33.0, 0.0], &mask).unwrap();
        for slot in [1usize, 3] {
            assert_eq!(stack.lengths()[slot], before.lengths()[slot]);
            assert_eq!(stack.get(slot, 0), before.get(slot, 0));
        }
    }
}
