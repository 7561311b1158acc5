//! Dense symmetric matrices indexed by variable pairs.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::Result;

/// Iterates the strict upper triangle of an `n x n` matrix as `(p, q)` pairs
/// with `p < q`, row-major.
pub fn pair_indices(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |p| (p + 1..n).map(move |q| (p, q)))
}

/// Number of unordered variable pairs, `n(n-1)/2`.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Symmetric `n x n` matrix of `f64`, stored dense.
///
/// Writes go through [`SymMatrix::set_pair`], which mirrors the entry, so the
/// matrix equals its transpose bit-exactly by construction. Diagonal entries
/// are kept at zero and ignored by consumers.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    /// All-zero matrix of dimension `n`.
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    /// Matrix dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry at `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Sets both `(i, j)` and `(j, i)` to `v`.
    pub fn set_pair(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    /// Checks an index pair against the dimension.
    pub fn check_pair(&self, p: usize, q: usize) -> Result<()> {
        for &index in &[p, q] {
            if index >= self.n {
                return Err(Error::IndexOutOfRange { index, n: self.n });
            }
        }
        Ok(())
    }

    /// Strict upper-triangle entries as `(p, q, value)`.
    pub fn upper_triangle(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        pair_indices(self.n).map(move |(p, q)| (p, q, self.get(p, q)))
    }
}
