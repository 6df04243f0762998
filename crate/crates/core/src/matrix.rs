//! Sparse integer matrices with arbitrary-precision entries.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;

/// A rows x cols integer matrix storing only nonzero entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(u32, u32), BigInt>,
}

impl SparseIntMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        assert!(rows <= u32::MAX as usize && cols <= u32::MAX as usize);
        SparseIntMatrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn from_rows<I: Into<BigInt> + Clone>(data: &[Vec<I>]) -> Self {
        let rows = data.len();
        let cols = data.first().map_or(0, |r| r.len());
        let mut m = SparseIntMatrix::new(rows, cols);
        for (r, row) in data.iter().enumerate() {
            assert_eq!(row.len(), cols);
            for (c, v) in row.iter().enumerate() {
                m.set(r, c, v.clone().into());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        self.entries
            .get(&(r as u32, c as u32))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        assert!(r < self.rows && c < self.cols);
        if v.is_zero() {
            self.entries.remove(&(r as u32, c as u32));
        } else {
            self.entries.insert((r as u32, c as u32), v);
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: BigInt) {
        if v.is_zero() {
            return;
        }
        let cur = self.get(r, c);
        self.set(r, c, cur + v);
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.entries
            .iter()
            .map(|(&(r, c), v)| (r as usize, c as usize, v))
    }

    /// Largest absolute value among the entries (zero for an empty matrix).
    pub fn max_abs(&self) -> BigInt {
        self.entries
            .values()
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// Matrix product self * other.
    pub fn multiply(&self, other: &SparseIntMatrix) -> SparseIntMatrix {
        assert_eq!(self.cols, other.rows);
        // index other by row for the sparse product
        let mut by_row: Vec<Vec<(u32, &BigInt)>> = vec![Vec::new(); other.rows];
        for (r, c, v) in other.entries() {
            by_row[r].push((c as u32, v));
        }
        let mut out = SparseIntMatrix::new(self.rows, other.cols);
        for (r, k, v) in self.entries() {
            for &(c, w) in &by_row[k] {
                out.add_to(r, c as usize, v * w);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_stored_zeros() {
        let mut m = SparseIntMatrix::new(2, 2);
        m.set(0, 0, 3.into());
        m.add_to(0, 0, (-3).into());
        assert_eq!(m.nnz(), 0);
        assert!(m.is_zero());
    }

    #[test]
    fn product() {
        let a = SparseIntMatrix::from_rows(&[vec![1, 2], vec![0, 1]]);
        let b = SparseIntMatrix::from_rows(&[vec![3, 0], vec![1, 1]]);
        let p = a.multiply(&b);
        assert_eq!(p.get(0, 0), 5.into());
        assert_eq!(p.get(0, 1), 2.into());
        assert_eq!(p.get(1, 0), 1.into());
        assert_eq!(p.get(1, 1), 1.into());
    }
}
