use crate::error::Result;
use crate::exec::{map_items, ExecConfig};
use crate::matrix::{CooMatrix, DenseMatrix};
use crate::scalar::Scalar;

use super::{check_inner_dims, KernelStats};

/// COO x dense with the GCOO tile structure but a single group spanning all
/// rows and no dense-operand reuse: every entry fetches its own slice of `b`.
pub fn spdm_coo<T: Scalar>(
    a: &CooMatrix<T>,
    b: &DenseMatrix<T>,
    cfg: &ExecConfig,
) -> Result<DenseMatrix<T>> {
    spdm_coo_with_stats(a, b, cfg).map(|(c, _)| c)
}

pub fn spdm_coo_with_stats<T: Scalar>(
    a: &CooMatrix<T>,
    b: &DenseMatrix<T>,
    cfg: &ExecConfig,
) -> Result<(DenseMatrix<T>, KernelStats)> {
    cfg.validate()?;
    check_inner_dims(a.shape(), b.shape())?;
    let (m, n) = (a.rows(), b.cols());
    let lanes = cfg.b;
    let strips: Vec<usize> = (0..n.div_ceil(lanes)).collect();
    let tiles = map_items(strips, cfg.workers, |_, strip| {
        let col0 = strip * lanes;
        let width = lanes.min(n - col0);
        let mut acc = vec![T::zero(); m * width];
        let mut s_vals = vec![T::zero(); lanes];
        let mut s_rows = vec![0usize; lanes];
        let mut s_cols = vec![0usize; lanes];
        let mut stats = KernelStats::default();
        let nnz = a.nnz();
        for start in (0..nnz).step_by(lanes) {
            let cnnz = lanes.min(nnz - start);
            s_vals[..cnnz].copy_from_slice(&a.values()[start..start + cnnz]);
            s_rows[..cnnz].copy_from_slice(&a.row_idx()[start..start + cnnz]);
            s_cols[..cnnz].copy_from_slice(&a.col_idx()[start..start + cnnz]);
            stats.staging_fills += cnnz as u64;
            for j in 0..cnnz {
                let bv = &b.row(s_cols[j])[col0..col0 + width];
                let av = s_vals[j];
                let out = &mut acc[s_rows[j] * width..][..width];
                for (c, &y) in out.iter_mut().zip(bv) {
                    *c += av * y;
                }
            }
        }
        stats.b_loads_total = (nnz * width) as u64;
        stats.flops = 2 * (nnz * width) as u64;
        (col0, width, acc, stats)
    });

    let mut c = DenseMatrix::zeros(m, n)?;
    let data = c.data_mut();
    let mut stats = KernelStats::default();
    for (col0, width, acc, st) in tiles {
        for (i, row) in acc.chunks(width).enumerate() {
            data[i * n + col0..][..width].copy_from_slice(row);
        }
        stats += st;
    }
    Ok((c, stats))
}
