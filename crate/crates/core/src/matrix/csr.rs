use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::{CooMatrix, DenseMatrix};

/// Compressed sparse row format.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix<T> {
    rows: usize,
    cols: usize,
    values: Vec<T>,
    col_idx: Vec<usize>,
    row_ptr: Vec<usize>,
}

impl<T: Scalar> CsrMatrix<T> {
    pub fn new(
        rows: usize,
        cols: usize,
        values: Vec<T>,
        col_idx: Vec<usize>,
        row_ptr: Vec<usize>,
    ) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::ZeroDimension { rows, cols });
        }
        if values.len() != col_idx.len() {
            return Err(Error::ArrayLengths(format!(
                "values={}, col_idx={}",
                values.len(),
                col_idx.len()
            )));
        }
        if row_ptr.len() != rows + 1 {
            return Err(Error::InvalidOffsets(format!(
                "row_ptr has {} entries, expected {}",
                row_ptr.len(),
                rows + 1
            )));
        }
        if row_ptr[0] != 0 || row_ptr[rows] != values.len() {
            return Err(Error::InvalidOffsets(format!(
                "row_ptr must start at 0 and end at nnz={}",
                values.len()
            )));
        }
        for i in 0..rows {
            let (start, end) = (row_ptr[i], row_ptr[i + 1]);
            if start > end {
                return Err(Error::InvalidOffsets(format!(
                    "row_ptr decreases at row {i}"
                )));
            }
            for k in start..end {
                let c = col_idx[k];
                if c >= cols {
                    return Err(Error::IndexOutOfRange {
                        row: i,
                        col: c,
                        rows,
                        cols,
                    });
                }
                if k > start && col_idx[k - 1] >= c {
                    return if col_idx[k - 1] == c {
                        Err(Error::Duplicate { row: i, col: c })
                    } else {
                        Err(Error::Unsorted { position: k })
                    };
                }
            }
        }
        Ok(Self {
            rows,
            cols,
            values,
            col_idx,
            row_ptr,
        })
    }

    pub fn from_dense(a: &DenseMatrix<T>) -> Self {
        let mut values = Vec::new();
        let mut col_idx = Vec::new();
        let mut row_ptr = Vec::with_capacity(a.rows() + 1);
        row_ptr.push(0);
        for i in 0..a.rows() {
            for (j, &v) in a.row(i).iter().enumerate() {
                if v != T::zero() {
                    values.push(v);
                    col_idx.push(j);
                }
            }
            row_ptr.push(values.len());
        }
        Self {
            rows: a.rows(),
            cols: a.cols(),
            values,
            col_idx,
            row_ptr,
        }
    }

    pub fn from_coo(coo: &CooMatrix<T>) -> Self {
        let mut row_ptr = vec![0; coo.rows() + 1];
        for &r in coo.row_idx() {
            row_ptr[r + 1] += 1;
        }
        for i in 0..coo.rows() {
            row_ptr[i + 1] += row_ptr[i];
        }
        // COO is already row-major sorted, so the arrays carry over as-is.
        Self {
            rows: coo.rows(),
            cols: coo.cols(),
            values: coo.values().to_vec(),
            col_idx: coo.col_idx().to_vec(),
            row_ptr,
        }
    }

    pub fn to_dense(&self) -> DenseMatrix<T> {
        let mut out = DenseMatrix::zeros(self.rows, self.cols).expect("validated shape");
        let cols = self.cols;
        let data = out.data_mut();
        for i in 0..self.rows {
            let (c, v) = self.row(i);
            for (&j, &x) in c.iter().zip(v) {
                data[i * cols + j] = x;
            }
        }
        out
    }

    /// Column indices and values of row `i`.
    #[inline]
    pub fn row(&self, i: usize) -> (&[usize], &[T]) {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.col_idx[range.clone()], &self.values[range])
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

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        (0..self.rows).flat_map(move |i| {
            let (c, v) = self.row(i);
            c.iter().zip(v).map(move |(&j, &x)| (i, j, x))
        })
    }
}

pub fn dense_to_csr<T: Scalar>(a: &DenseMatrix<T>) -> CsrMatrix<T> {
    CsrMatrix::from_dense(a)
}

pub fn csr_to_dense<T: Scalar>(c: &CsrMatrix<T>) -> DenseMatrix<T> {
    c.to_dense()
}
