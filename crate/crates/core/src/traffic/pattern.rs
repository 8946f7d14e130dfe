use crate::error::{Error, Result};
use crate::matrix::{CooMatrix, DenseMatrix, GcooMatrix};
use crate::scalar::Scalar;

/// Coordinates of the stored entries of a sparse operand, without values.
/// Kept in row-major order with no repeats.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pattern {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize)>,
}

impl Pattern {
    pub fn new(rows: usize, cols: usize, mut entries: Vec<(usize, usize)>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::ZeroDimension { rows, cols });
        }
        if let Some(&(row, col)) = entries.iter().find(|&&(r, c)| r >= rows || c >= cols) {
            return Err(Error::IndexOutOfRange {
                row,
                col,
                rows,
                cols,
            });
        }
        entries.sort_unstable();
        if let Some(w) = entries.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Duplicate {
                row: w[0].0,
                col: w[0].1,
            });
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_coo<T: Scalar>(a: &CooMatrix<T>) -> Self {
        Self {
            rows: a.rows(),
            cols: a.cols(),
            entries: a
                .row_idx()
                .iter()
                .copied()
                .zip(a.col_idx().iter().copied())
                .collect(),
        }
    }

    pub fn from_gcoo<T: Scalar>(a: &GcooMatrix<T>) -> Self {
        let mut entries: Vec<_> = a
            .row_idx()
            .iter()
            .copied()
            .zip(a.col_idx().iter().copied())
            .collect();
        entries.sort_unstable();
        Self {
            rows: a.rows(),
            cols: a.cols(),
            entries,
        }
    }

    pub fn from_dense<T: Scalar>(a: &DenseMatrix<T>) -> Self {
        Self::from_coo(&CooMatrix::from_dense(a))
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

    pub fn entries(&self) -> &[(usize, usize)] {
        &self.entries
    }

    pub fn sparsity(&self) -> f64 {
        1.0 - self.nnz() as f64 / (self.rows * self.cols) as f64
    }
}
