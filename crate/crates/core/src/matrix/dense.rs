use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Row-major dense matrix with an explicit shape.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> DenseMatrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::ZeroDimension { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(Error::DataLength {
                expected: rows * cols,
                actual: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Self::new(rows, cols, vec![T::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        Ok(m)
    }

    /// Builds a matrix from a slice of equally long rows.
    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::ArrayLengths(format!(
                    "row of length {} in a matrix with {} columns",
                    r.len(),
                    cols
                )));
            }
            data.extend_from_slice(r);
        }
        Self::new(rows.len(), cols, data)
    }

    /// Builds a matrix whose element `(i, j)` is `f(i, j)`.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::new(rows, cols, data)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub(crate) fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> T {
        self.data[row * self.cols + col]
    }

    #[inline]
    pub fn row(&self, row: usize) -> &[T] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    /// Number of elements that are not equal to zero.
    pub fn nnz(&self) -> usize {
        self.data.iter().filter(|v| **v != T::zero()).count()
    }

    /// Fraction of zero-valued elements.
    pub fn sparsity(&self) -> f64 {
        1.0 - self.nnz() as f64 / (self.rows * self.cols) as f64
    }

    /// Element-wise equality of bit patterns (distinguishes `-0.0` from `0.0`).
    pub fn bitwise_eq(&self, other: &Self) -> bool {
        self.shape() == other.shape()
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(a, b)| a.bits() == b.bits())
    }

    /// `max |self - reference| / (|reference| + 1e-30)` over all elements.
    ///
    /// Returns infinity when the shapes differ.
    pub fn max_relative_error(&self, reference: &Self) -> f64 {
        if self.shape() != reference.shape() {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&reference.data)
            .map(|(x, r)| {
                let (x, r) = (x.as_f64(), r.as_f64());
                (x - r).abs() / (r.abs() + 1e-30)
            })
            .fold(0.0, f64::max)
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j));
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }
}

/// Fraction of zero-valued elements of `a`.
pub fn sparsity<T: Scalar>(a: &DenseMatrix<T>) -> f64 {
    a.sparsity()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_shapes() {
        assert!(matches!(
            DenseMatrix::<f32>::new(0, 3, vec![]),
            Err(Error::ZeroDimension { .. })
        ));
        assert!(matches!(
            DenseMatrix::<f32>::new(2, 2, vec![1.0; 3]),
            Err(Error::DataLength {
                expected: 4,
                actual: 3
            })
        ));
        assert!(DenseMatrix::<f32>::from_rows(&[vec![1.0, 2.0], vec![3.0]]).is_err());
    }

    #[test]
    fn sparsity_edge_cases() {
        let a = DenseMatrix::<f64>::from_rows(&[
            [7.0, 0.0, 0.0, 8.0],
            [0.0, 10.0, 0.0, 0.0],
            [9.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 6.0, 3.0],
        ])
        .unwrap();
        assert_eq!(sparsity(&a), 0.625);
        assert_eq!(DenseMatrix::<f32>::zeros(3, 3).unwrap().sparsity(), 1.0);
        let full = DenseMatrix::<f32>::new(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(full.sparsity(), 0.0);
    }

    #[test]
    fn bitwise_eq_sees_signed_zero() {
        let a = DenseMatrix::<f32>::new(1, 1, vec![0.0]).unwrap();
        let b = DenseMatrix::<f32>::new(1, 1, vec![-0.0]).unwrap();
        assert_eq!(a, b);
        assert!(!a.bitwise_eq(&b));
    }
}
