use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::DenseMatrix;

/// Coordinate format: three parallel arrays, entries in row-major scan
/// order with no repeated coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct CooMatrix<T> {
    rows: usize,
    cols: usize,
    values: Vec<T>,
    row_idx: Vec<usize>,
    col_idx: Vec<usize>,
}

impl<T: Scalar> CooMatrix<T> {
    /// Builds a COO matrix from already ordered arrays, validating every
    /// invariant.
    pub fn new(
        rows: usize,
        cols: usize,
        values: Vec<T>,
        row_idx: Vec<usize>,
        col_idx: Vec<usize>,
    ) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::ZeroDimension { rows, cols });
        }
        if values.len() != row_idx.len() || values.len() != col_idx.len() {
            return Err(Error::ArrayLengths(format!(
                "values={}, row_idx={}, col_idx={}",
                values.len(),
                row_idx.len(),
                col_idx.len()
            )));
        }
        for (k, (&r, &c)) in row_idx.iter().zip(&col_idx).enumerate() {
            if r >= rows || c >= cols {
                return Err(Error::IndexOutOfRange {
                    row: r,
                    col: c,
                    rows,
                    cols,
                });
            }
            if k > 0 {
                let prev = (row_idx[k - 1], col_idx[k - 1]);
                if prev == (r, c) {
                    return Err(Error::Duplicate { row: r, col: c });
                }
                if prev > (r, c) {
                    return Err(Error::Unsorted { position: k });
                }
            }
        }
        Ok(Self {
            rows,
            cols,
            values,
            row_idx,
            col_idx,
        })
    }

    /// Builds a COO matrix from unordered `(row, col, value)` triplets.
    /// Repeated coordinates are rejected rather than summed.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        mut triplets: Vec<(usize, usize, T)>,
    ) -> Result<Self> {
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut values = Vec::with_capacity(triplets.len());
        let mut row_idx = Vec::with_capacity(triplets.len());
        let mut col_idx = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            row_idx.push(r);
            col_idx.push(c);
            values.push(v);
        }
        Self::new(rows, cols, values, row_idx, col_idx)
    }

    /// Exact nonzeros of `a` in row-major scan order.
    pub fn from_dense(a: &DenseMatrix<T>) -> Self {
        let mut values = Vec::new();
        let mut row_idx = Vec::new();
        let mut col_idx = Vec::new();
        for i in 0..a.rows() {
            for (j, &v) in a.row(i).iter().enumerate() {
                if v != T::zero() {
                    values.push(v);
                    row_idx.push(i);
                    col_idx.push(j);
                }
            }
        }
        Self {
            rows: a.rows(),
            cols: a.cols(),
            values,
            row_idx,
            col_idx,
        }
    }

    pub fn to_dense(&self) -> DenseMatrix<T> {
        let mut out = DenseMatrix::zeros(self.rows, self.cols).expect("validated shape");
        let cols = self.cols;
        let data = out.data_mut();
        for (v, (r, c)) in self
            .values
            .iter()
            .zip(self.row_idx.iter().zip(&self.col_idx))
        {
            data[r * cols + c] = *v;
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn row_idx(&self) -> &[usize] {
        &self.row_idx
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn sparsity(&self) -> f64 {
        1.0 - self.nnz() as f64 / (self.rows * self.cols) as f64
    }

    /// `(row, col, value)` in storage order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        self.row_idx
            .iter()
            .zip(&self.col_idx)
            .zip(&self.values)
            .map(|((&r, &c), &v)| (r, c, v))
    }
}

pub fn dense_to_coo<T: Scalar>(a: &DenseMatrix<T>) -> CooMatrix<T> {
    CooMatrix::from_dense(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::tests::example_matrix;

    #[test]
    fn worked_example() {
        let coo = dense_to_coo(&example_matrix::<f32>());
        assert_eq!(coo.values(), &[7.0, 8.0, 10.0, 9.0, 6.0, 3.0]);
        assert_eq!(coo.row_idx(), &[0, 0, 1, 2, 3, 3]);
        assert_eq!(coo.col_idx(), &[0, 3, 1, 0, 2, 3]);
    }

    #[test]
    fn zero_and_identity() {
        let z = dense_to_coo(&DenseMatrix::<f32>::zeros(3, 3).unwrap());
        assert_eq!(z.nnz(), 0);
        assert!(z.values().is_empty() && z.row_idx().is_empty() && z.col_idx().is_empty());

        let i = dense_to_coo(&DenseMatrix::<f32>::identity(2).unwrap());
        assert_eq!(i.values(), &[1.0, 1.0]);
        assert_eq!(i.row_idx(), &[0, 1]);
        assert_eq!(i.col_idx(), &[0, 1]);
    }

    #[test]
    fn validation() {
        assert!(matches!(
            CooMatrix::<f32>::new(2, 2, vec![1.0, 2.0], vec![1, 0], vec![0, 0]),
            Err(Error::Unsorted { position: 1 })
        ));
        assert!(matches!(
            CooMatrix::<f32>::from_triplets(2, 2, vec![(0, 1, 1.0), (0, 1, 2.0)]),
            Err(Error::Duplicate { row: 0, col: 1 })
        ));
        assert!(matches!(
            CooMatrix::<f32>::new(2, 2, vec![1.0], vec![2], vec![0]),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(CooMatrix::<f32>::new(2, 2, vec![1.0], vec![0, 1], vec![0]).is_err());
    }
}
