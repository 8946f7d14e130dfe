use std::time::Instant;

use crate::error::{Error, Result};
use crate::exec::{map_items, ExecConfig};
use crate::matrix::{DenseMatrix, GcooMatrix, Group};
use crate::scalar::Scalar;

use super::{check_inner_dims, KernelStats};

/// One `height x width` block of the output.
#[derive(Clone, Debug, PartialEq)]
pub struct Tile<T> {
    pub row_start: usize,
    pub col_start: usize,
    pub height: usize,
    pub width: usize,
    /// Row-major, `height * width`.
    pub data: Vec<T>,
}

impl<T: Scalar> Tile<T> {
    /// Copies the tile into its place in `c`.
    pub fn scatter(&self, c: &mut DenseMatrix<T>) {
        let n = c.cols();
        let data = c.data_mut();
        for (r, row) in self.data.chunks(self.width).enumerate() {
            data[(self.row_start + r) * n + self.col_start..][..self.width].copy_from_slice(row);
        }
    }
}

/// Extra overhead (allocation plus conversion) versus kernel time.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TimingBreakdown {
    pub eo_seconds: f64,
    pub kc_seconds: f64,
}

impl TimingBreakdown {
    /// Share of the total spent on conversion.
    pub fn eo_fraction(&self) -> f64 {
        let total = self.eo_seconds + self.kc_seconds;
        if total > 0.0 {
            self.eo_seconds / total
        } else {
            0.0
        }
    }
}

/// Per-worker scratch: the `p x b` accumulator block, the staging buffer and
/// the fetched dense-operand lanes.
struct Scratch<T> {
    acc: Vec<T>,
    s_vals: Vec<T>,
    s_rows: Vec<usize>,
    s_cols: Vec<usize>,
    bv: Vec<T>,
}

impl<T: Scalar> Scratch<T> {
    fn new(p: usize, b: usize) -> Self {
        Self {
            acc: vec![T::zero(); p * b],
            s_vals: vec![T::zero(); b],
            s_rows: vec![0; b],
            s_cols: vec![0; b],
            bv: vec![T::zero(); b],
        }
    }
}

/// Computes the tile of group `group` and column strip `[col0, col0+width)`
/// into `s.acc` (row-major, `p` rows of `width`).
///
/// The group's entries pass through the staging buffer `lanes` at a time.
/// A dense-operand row slice is fetched when the column changes and reused
/// for every following entry in the same column, including across staging
/// chunks.
fn compute_tile<T: Scalar>(
    group: &Group<'_, T>,
    b: &DenseMatrix<T>,
    col0: usize,
    width: usize,
    p: usize,
    lanes: usize,
    s: &mut Scratch<T>,
) -> KernelStats {
    let mut stats = KernelStats::default();
    let acc = &mut s.acc[..p * width];
    acc.fill(T::zero());
    let bv = &mut s.bv[..width];
    let nnz = group.nnz();
    let mut current_col = usize::MAX;

    for start in (0..nnz).step_by(lanes) {
        let cnnz = lanes.min(nnz - start);
        s.s_vals[..cnnz].copy_from_slice(&group.values[start..start + cnnz]);
        s.s_rows[..cnnz].copy_from_slice(&group.row_idx[start..start + cnnz]);
        s.s_cols[..cnnz].copy_from_slice(&group.col_idx[start..start + cnnz]);
        stats.staging_fills += cnnz as u64;

        let mut j = 0;
        while j < cnnz {
            let col = s.s_cols[j];
            if col != current_col {
                bv.copy_from_slice(&b.row(col)[col0..col0 + width]);
                current_col = col;
                stats.b_loads_total += width as u64;
            } else {
                stats.b_loads_reused += width as u64;
            }
            axpy(acc, s.s_rows[j] & (p - 1), width, s.s_vals[j], bv);

            // Remaining entries of the same column reuse `bv`.
            let mut k = 1;
            while j + k < cnnz && s.s_cols[j + k] == col {
                axpy(acc, s.s_rows[j + k] & (p - 1), width, s.s_vals[j + k], bv);
                stats.b_loads_reused += width as u64;
                k += 1;
            }
            j += k;
        }
    }
    stats.flops = 2 * (nnz * width) as u64;
    stats
}

#[inline(always)]
fn axpy<T: Scalar>(acc: &mut [T], out_row: usize, width: usize, av: T, bv: &[T]) {
    for (c, &y) in acc[out_row * width..][..width].iter_mut().zip(bv) {
        *c += av * y;
    }
}

fn check_operands<T: Scalar>(
    a: &GcooMatrix<T>,
    b: &DenseMatrix<T>,
    cfg: &ExecConfig,
) -> Result<()> {
    cfg.validate()?;
    check_inner_dims(a.shape(), b.shape())?;
    if a.p() != cfg.p {
        return Err(Error::GroupSizeMismatch {
            matrix: a.p(),
            config: cfg.p,
        });
    }
    Ok(())
}

/// GCOO x dense.
///
/// One tile per (group, column strip of `cfg.b` lanes). Workers take whole
/// groups, i.e. contiguous `p`-row bands of the output, and walk the strips
/// of their band in order. Each output element is written once, when its
/// tile finishes; bands of empty groups are left at zero.
pub fn spdm_gcoo<T: Scalar>(
    a: &GcooMatrix<T>,
    b: &DenseMatrix<T>,
    cfg: &ExecConfig,
) -> Result<(DenseMatrix<T>, KernelStats)> {
    check_operands(a, b, cfg)?;
    let (p, lanes, n) = (cfg.p, cfg.b, b.cols());
    let mut c = DenseMatrix::zeros(a.rows(), n)?;
    let bands: Vec<&mut [T]> = c.data_mut().chunks_mut(p * n).collect();
    let stats = map_items(bands, cfg.workers, |gi, band| {
        let group = a.group(gi);
        if group.nnz() == 0 {
            return KernelStats::default();
        }
        let mut scratch = Scratch::new(p, lanes);
        let mut stats = KernelStats::default();
        for col0 in (0..n).step_by(lanes) {
            let width = lanes.min(n - col0);
            stats += compute_tile(&group, b, col0, width, p, lanes, &mut scratch);
            for r in 0..group.height {
                band[r * n + col0..][..width].copy_from_slice(&scratch.acc[r * width..][..width]);
            }
        }
        stats
    });
    Ok((c, stats.into_iter().sum()))
}

/// Computes a single tile: group `group`, column strip `strip`.
pub fn spdm_gcoo_tile<T: Scalar>(
    a: &GcooMatrix<T>,
    b: &DenseMatrix<T>,
    group: usize,
    strip: usize,
    cfg: &ExecConfig,
) -> Result<(Tile<T>, KernelStats)> {
    check_operands(a, b, cfg)?;
    let (groups, strips) = cfg.tile_grid(a.rows(), b.cols());
    if group >= groups || strip >= strips {
        return Err(Error::InvalidArgument(format!(
            "tile ({group}, {strip}) outside a {groups}x{strips} grid"
        )));
    }
    let g = a.group(group);
    let col0 = strip * cfg.b;
    let width = cfg.b.min(b.cols() - col0);
    let mut scratch = Scratch::new(cfg.p, cfg.b);
    let stats = compute_tile(&g, b, col0, width, cfg.p, cfg.b, &mut scratch);
    Ok((
        Tile {
            row_start: g.row_start,
            col_start: col0,
            height: g.height,
            width,
            data: scratch.acc[..g.height * width].to_vec(),
        },
        stats,
    ))
}

/// Converts `a_dense` to GCOO and multiplies, timing the two phases
/// separately.
pub fn spdm_gcoo_auto<T: Scalar>(
    a_dense: &DenseMatrix<T>,
    b: &DenseMatrix<T>,
    cfg: &ExecConfig,
) -> Result<(DenseMatrix<T>, TimingBreakdown)> {
    cfg.validate()?;
    check_inner_dims(a_dense.shape(), b.shape())?;
    let t0 = Instant::now();
    let a = GcooMatrix::from_dense_with_workers(a_dense, cfg.p, cfg.workers)?;
    let eo = t0.elapsed().as_secs_f64();
    let t1 = Instant::now();
    let (c, _) = spdm_gcoo(&a, b, cfg)?;
    let kc = t1.elapsed().as_secs_f64();
    Ok((
        c,
        TimingBreakdown {
            eo_seconds: eo,
            kc_seconds: kc,
        },
    ))
}
