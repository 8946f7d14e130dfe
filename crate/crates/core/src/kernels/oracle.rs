use crate::error::Result;
use crate::matrix::DenseMatrix;
use crate::scalar::Scalar;

use super::check_inner_dims;

/// `C(i, j) = sum_l A(i, l) * B(l, j)`, accumulated in `f64` in increasing
/// `l`, rounded to `T` once at the end.
#[allow(clippy::needless_range_loop)]
pub fn gemm_oracle<T: Scalar>(a: &DenseMatrix<T>, b: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    check_inner_dims(a.shape(), b.shape())?;
    let (m, k, n) = (a.rows(), a.cols(), b.cols());
    let mut out = Vec::with_capacity(m * n);
    let mut acc = vec![0.0f64; n];
    for i in 0..m {
        acc.fill(0.0);
        let arow = a.row(i);
        for l in 0..k {
            let x = arow[l].as_f64();
            for (c, y) in acc.iter_mut().zip(b.row(l)) {
                *c += x * y.as_f64();
            }
        }
        out.extend(acc.iter().map(|&v| T::from_f64(v)));
    }
    DenseMatrix::new(m, n, out)
}
