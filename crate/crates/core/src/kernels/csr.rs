use crate::error::Result;
use crate::exec::{map_items, ExecConfig};
use crate::matrix::{CsrMatrix, DenseMatrix};
use crate::scalar::Scalar;

use super::check_inner_dims;

/// Row-split CSR x dense. Output rows are independent; bands of `cfg.p`
/// rows are handed to the workers.
pub fn spdm_csr<T: Scalar>(
    a: &CsrMatrix<T>,
    b: &DenseMatrix<T>,
    cfg: &ExecConfig,
) -> Result<DenseMatrix<T>> {
    cfg.validate()?;
    check_inner_dims(a.shape(), b.shape())?;
    let n = b.cols();
    let mut c = DenseMatrix::zeros(a.rows(), n)?;
    let bands: Vec<&mut [T]> = c.data_mut().chunks_mut(cfg.p * n).collect();
    map_items(bands, cfg.workers, |bi, band| {
        for (r, out) in band.chunks_mut(n).enumerate() {
            let (cols, vals) = a.row(bi * cfg.p + r);
            for (&col, &v) in cols.iter().zip(vals) {
                for (c, &y) in out.iter_mut().zip(b.row(col)) {
                    *c += v * y;
                }
            }
        }
    });
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::tests::example_matrix;

    #[test]
    fn identity_and_empty() {
        let a = example_matrix::<f32>();
        let csr = CsrMatrix::from_dense(&a);
        let cfg = ExecConfig::default();
        assert_eq!(
            spdm_csr(&csr, &DenseMatrix::identity(4).unwrap(), &cfg).unwrap(),
            a
        );

        let z = CsrMatrix::from_dense(&DenseMatrix::<f32>::zeros(5, 4).unwrap());
        let b = DenseMatrix::from_fn(4, 3, |i, j| (i + j) as f32).unwrap();
        assert_eq!(
            spdm_csr(&z, &b, &cfg).unwrap(),
            DenseMatrix::zeros(5, 3).unwrap()
        );
    }

    #[test]
    fn dimension_mismatch() {
        let csr = CsrMatrix::from_dense(&example_matrix::<f32>());
        let b = DenseMatrix::<f32>::zeros(3, 3).unwrap();
        assert!(spdm_csr(&csr, &b, &ExecConfig::default()).is_err());
    }
}
