use crate::error::Result;
use crate::exec::{map_items, ExecConfig};
use crate::matrix::DenseMatrix;
use crate::scalar::Scalar;

use super::check_inner_dims;

// Band of output rows handed to one worker.
const BAND_ROWS: usize = 32;
// Output columns kept hot per pass; a 4 x 256 accumulator block.
const STRIP: usize = 256;
// Depth of the dense-operand panel reused across a band.
const DEPTH: usize = 128;

/// Tiled dense GEMM used as the dense baseline.
///
/// Every product is computed, zero or not, so the running time does not
/// depend on the sparsity of `a`. Each output element is accumulated in
/// increasing `l` order.
pub fn gemm_dense_blocked<T: Scalar>(
    a: &DenseMatrix<T>,
    b: &DenseMatrix<T>,
    cfg: &ExecConfig,
) -> Result<DenseMatrix<T>> {
    check_inner_dims(a.shape(), b.shape())?;
    let (k, n) = (a.cols(), b.cols());
    let mut c = DenseMatrix::zeros(a.rows(), n)?;
    let bands: Vec<&mut [T]> = c.data_mut().chunks_mut(BAND_ROWS * n).collect();
    map_items(bands, cfg.workers, |bi, band| {
        let row0 = bi * BAND_ROWS;
        let height = band.len() / n;
        for j0 in (0..n).step_by(STRIP) {
            let w = STRIP.min(n - j0);
            for l0 in (0..k).step_by(DEPTH) {
                let depth = DEPTH.min(k - l0);
                let mut i = 0;
                while i + 4 <= height {
                    quad(a, b, band, row0, i, j0, w, l0, depth);
                    i += 4;
                }
                for r in i..height {
                    single(a, b, band, row0, r, j0, w, l0, depth);
                }
            }
        }
    });
    Ok(c)
}

#[allow(clippy::too_many_arguments)]
#[inline]
#[allow(clippy::needless_range_loop)]
fn quad<T: Scalar>(
    a: &DenseMatrix<T>,
    b: &DenseMatrix<T>,
    band: &mut [T],
    row0: usize,
    i: usize,
    j0: usize,
    w: usize,
    l0: usize,
    depth: usize,
) {
    let n = b.cols();
    let mut acc = [[T::zero(); STRIP]; 4];
    for (r, tile_row) in acc.iter_mut().enumerate() {
        tile_row[..w].copy_from_slice(&band[(i + r) * n + j0..][..w]);
    }
    let a_rows = [
        a.row(row0 + i),
        a.row(row0 + i + 1),
        a.row(row0 + i + 2),
        a.row(row0 + i + 3),
    ];
    let [c0, c1, c2, c3] = &mut acc;
    let (c0, c1, c2, c3) = (&mut c0[..w], &mut c1[..w], &mut c2[..w], &mut c3[..w]);
    for l in l0..l0 + depth {
        let brow = &b.row(l)[j0..j0 + w];
        let (x0, x1, x2, x3) = (a_rows[0][l], a_rows[1][l], a_rows[2][l], a_rows[3][l]);
        for j in 0..w {
            let y = brow[j];
            c0[j] += x0 * y;
            c1[j] += x1 * y;
            c2[j] += x2 * y;
            c3[j] += x3 * y;
        }
    }
    for (r, tile_row) in acc.iter().enumerate() {
        band[(i + r) * n + j0..][..w].copy_from_slice(&tile_row[..w]);
    }
}

#[allow(clippy::too_many_arguments)]
#[inline]
#[allow(clippy::needless_range_loop)]
fn single<T: Scalar>(
    a: &DenseMatrix<T>,
    b: &DenseMatrix<T>,
    band: &mut [T],
    row0: usize,
    r: usize,
    j0: usize,
    w: usize,
    l0: usize,
    depth: usize,
) {
    let n = b.cols();
    let arow = a.row(row0 + r);
    let out = &mut band[r * n + j0..][..w];
    for l in l0..l0 + depth {
        let x = arow[l];
        for (c, &y) in out.iter_mut().zip(&b.row(l)[j0..j0 + w]) {
            *c += x * y;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::gemm_oracle;
    use crate::matrix::tests::example_matrix;

    fn ramp(rows: usize, cols: usize, seed: f64) -> DenseMatrix<f32> {
        DenseMatrix::from_fn(rows, cols, |i, j| {
            (((i * 31 + j * 17) as f64 * seed).sin()) as f32
        })
        .unwrap()
    }

    #[test]
    fn identity_is_exact() {
        let a = example_matrix::<f32>();
        let c = gemm_dense_blocked(
            &a,
            &DenseMatrix::identity(4).unwrap(),
            &ExecConfig::default(),
        )
        .unwrap();
        assert_eq!(c, a);
        let r = ramp(37, 300, 0.37);
        let c = gemm_dense_blocked(
            &r,
            &DenseMatrix::identity(300).unwrap(),
            &ExecConfig::default(),
        )
        .unwrap();
        assert_eq!(c, r);
    }

    #[test]
    fn matches_oracle_on_ragged_shapes() {
        for (m, k, n) in [(64, 64, 64), (1, 1, 1), (33, 130, 257), (5, 300, 3)] {
            let a = ramp(m, k, 0.11);
            let b = ramp(k, n, 0.23);
            let c = gemm_dense_blocked(&a, &b, &ExecConfig::default()).unwrap();
            let o = gemm_oracle(&a, &b).unwrap();
            // Entries near zero from cancellation make a pure relative bound
            // meaningless here; compare against the magnitude of the row.
            let scale = o.data().iter().map(|v| v.abs()).fold(0.0f32, f32::max) as f64;
            let worst = c
                .data()
                .iter()
                .zip(o.data())
                .map(|(x, y)| (*x as f64 - *y as f64).abs())
                .fold(0.0, f64::max);
            assert!(
                worst <= 1e-5 * scale.max(1.0) * (k as f64).sqrt(),
                "{m}x{k}x{n}: {worst}"
            );
        }
    }

    #[test]
    fn dimension_mismatch() {
        let a = ramp(3, 4, 1.0);
        assert!(gemm_dense_blocked(&a, &a, &ExecConfig::default()).is_err());
    }
}
