use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::ExecConfig;

use super::Pattern;

/// Elements moved by one coalesced transaction.
pub const TRANSACTION_ELEMENTS: usize = 32;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TrafficReport {
    /// DRAM-level transactions.
    pub n_dm: u64,
    /// Second-level cache transactions.
    pub n_l2: u64,
    /// Staging-buffer (shared-memory) transactions.
    pub n_shm: u64,
    /// First-level / texture cache transactions.
    pub tex_l1_trans: u64,
    pub flops: u64,
}

impl TrafficReport {
    pub fn total_transactions(&self) -> u64 {
        self.n_dm + self.n_l2 + self.n_shm + self.tex_l1_trans
    }
}

/// Element-granularity dense-operand loads, comparable with
/// [`KernelStats`](crate::kernels::KernelStats).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ReuseCounts {
    pub b_loads_total: u64,
    pub b_loads_reused: u64,
}

/// How repeated touches of the same address are charged.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CacheMode {
    /// Nothing is ever cached: every touch goes to DRAM.
    Cold,
    /// First touch goes to DRAM, every later touch hits L2.
    #[default]
    InfiniteL2,
}

impl fmt::Display for CacheMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CacheMode::Cold => "cold",
            CacheMode::InfiniteL2 => "infinite_l2",
        })
    }
}

impl FromStr for CacheMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cold" => Ok(CacheMode::Cold),
            "infinite_l2" | "infinite-l2" => Ok(CacheMode::InfiniteL2),
            other => Err(Error::InvalidArgument(format!(
                "unknown cache mode `{other}`"
            ))),
        }
    }
}

/// Which kernel's access script to model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelModel {
    Gcoo,
    Csr,
}

impl fmt::Display for KernelModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KernelModel::Gcoo => "gcoo",
            KernelModel::Csr => "csr",
        })
    }
}

impl FromStr for KernelModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gcoo" => Ok(KernelModel::Gcoo),
            "csr" => Ok(KernelModel::Csr),
            other => Err(Error::InvalidArgument(format!(
                "unknown kernel model `{other}`"
            ))),
        }
    }
}

#[inline]
fn transactions(elements: usize) -> u64 {
    elements.div_ceil(TRANSACTION_ELEMENTS) as u64
}

/// Per-group entry count and number of distinct columns.
///
/// Entries of a group are ordered by column, so the distinct columns are
/// exactly the maximal same-column runs.
fn group_summaries(pattern: &Pattern, p: usize) -> Vec<(usize, usize)> {
    let groups = pattern.rows().div_ceil(p);
    let mut cols: Vec<Vec<usize>> = vec![Vec::new(); groups];
    for &(r, c) in pattern.entries() {
        cols[r / p].push(c);
    }
    cols.into_iter()
        .map(|mut c| {
            let nnz = c.len();
            c.sort_unstable();
            c.dedup();
            (nnz, c.len())
        })
        .collect()
}

fn distinct_columns(pattern: &Pattern) -> usize {
    let mut seen = vec![false; pattern.cols()];
    pattern
        .entries()
        .iter()
        .filter(|&&(_, c)| !std::mem::replace(&mut seen[c], true))
        .count()
}

fn strip_widths(n: usize, b: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n.div_ceil(b)).map(move |s| (s, b.min(n - s * b)))
}

fn check_dense_cols(dense_cols: usize) -> Result<()> {
    if dense_cols == 0 {
        return Err(Error::ZeroDimension {
            rows: 0,
            cols: dense_cols,
        });
    }
    Ok(())
}

/// Transaction counts for the GCOO kernel multiplying `pattern` by a dense
/// operand with `dense_cols` columns.
///
/// Per tile (group × strip of width `w`):
/// - staging: one write and one broadcast read per entry, `2·nnz_g` to the
///   staging level;
/// - sparse operand: `ceil(3·nnz_g / 32)` transactions, DRAM on the first
///   strip of a group and L2 afterwards (all DRAM when cold);
/// - dense operand: `ceil(w / 32)` per same-column run, DRAM on the first
///   touch of a `(column, strip)` pair and L2 on repeats (all DRAM when
///   cold); the other entries of a run are served from the reuse window and
///   logged as `(run − 1)·ceil(w / 32)` L1 transactions;
/// - output: `ceil(height·w / 32)` DRAM stores.
///
/// Tiles of empty groups cost nothing: the output starts zeroed.
pub fn model_gcoo_traffic(
    pattern: &Pattern,
    dense_cols: usize,
    cfg: &ExecConfig,
    cache_mode: CacheMode,
) -> Result<TrafficReport> {
    cfg.validate()?;
    check_dense_cols(dense_cols)?;
    let p = cfg.p;
    let groups = group_summaries(pattern, p);
    let first_touches = distinct_columns(pattern) as u64;
    let total_runs: u64 = groups.iter().map(|&(_, d)| d as u64).sum();
    let mut t = TrafficReport::default();

    for (s, w) in strip_widths(dense_cols, cfg.b) {
        let lane_trans = transactions(w);
        for (gi, &(nnz, runs)) in groups.iter().enumerate() {
            if nnz == 0 {
                continue;
            }
            let height = p.min(pattern.rows() - gi * p);
            t.n_shm += 2 * nnz as u64;
            let sparse = transactions(3 * nnz);
            match (cache_mode, s) {
                (CacheMode::InfiniteL2, 0) | (CacheMode::Cold, _) => t.n_dm += sparse,
                (CacheMode::InfiniteL2, _) => t.n_l2 += sparse,
            }
            t.tex_l1_trans += (nnz - runs) as u64 * lane_trans;
            t.n_dm += transactions(height * w);
            t.flops += 2 * (nnz * w) as u64;
        }
        match cache_mode {
            CacheMode::Cold => t.n_dm += total_runs * lane_trans,
            CacheMode::InfiniteL2 => {
                t.n_dm += first_touches * lane_trans;
                t.n_l2 += (total_runs - first_touches) * lane_trans;
            }
        }
    }
    Ok(t)
}

/// Element-level dense-operand fetches and reuses of the GCOO kernel: one
/// fetch of `w` lanes per same-column run per strip, every other entry of
/// the run reused.
pub fn model_gcoo_reuse(
    pattern: &Pattern,
    dense_cols: usize,
    cfg: &ExecConfig,
) -> Result<ReuseCounts> {
    cfg.validate()?;
    check_dense_cols(dense_cols)?;
    let groups = group_summaries(pattern, cfg.p);
    let runs: u64 = groups.iter().map(|&(_, d)| d as u64).sum();
    let nnz = pattern.nnz() as u64;
    let n = dense_cols as u64;
    Ok(ReuseCounts {
        b_loads_total: runs * n,
        b_loads_reused: (nnz - runs) * n,
    })
}

/// Transaction counts for a row-split CSR kernel with no staging buffer.
///
/// Per tile (row × strip of width `w`): `ceil(2·nnz_row / 32)` sparse loads
/// (DRAM on the first strip, L2 afterwards; all DRAM when cold), one
/// `ceil(w / 32)` dense-operand load per entry (DRAM on first touch of a
/// `(column, strip)` pair, L2 on repeats; all DRAM when cold) and
/// `ceil(w / 32)` DRAM stores. Empty rows cost nothing.
pub fn model_csr_traffic(
    pattern: &Pattern,
    dense_cols: usize,
    cfg: &ExecConfig,
    cache_mode: CacheMode,
) -> Result<TrafficReport> {
    cfg.validate()?;
    check_dense_cols(dense_cols)?;
    let mut per_row = vec![0usize; pattern.rows()];
    for &(r, _) in pattern.entries() {
        per_row[r] += 1;
    }
    let first_touches = distinct_columns(pattern) as u64;
    let nnz = pattern.nnz() as u64;
    let mut t = TrafficReport::default();

    for (s, w) in strip_widths(dense_cols, cfg.b) {
        let lane_trans = transactions(w);
        for &row_nnz in per_row.iter().filter(|&&r| r > 0) {
            let sparse = transactions(2 * row_nnz);
            match (cache_mode, s) {
                (CacheMode::InfiniteL2, 0) | (CacheMode::Cold, _) => t.n_dm += sparse,
                (CacheMode::InfiniteL2, _) => t.n_l2 += sparse,
            }
            t.n_dm += lane_trans;
            t.flops += 2 * (row_nnz * w) as u64;
        }
        match cache_mode {
            CacheMode::Cold => t.n_dm += nnz * lane_trans,
            CacheMode::InfiniteL2 => {
                t.n_dm += first_touches * lane_trans;
                t.n_l2 += (nnz - first_touches) * lane_trans;
            }
        }
    }
    Ok(t)
}

pub fn model_traffic(
    kernel: KernelModel,
    pattern: &Pattern,
    dense_cols: usize,
    cfg: &ExecConfig,
    cache_mode: CacheMode,
) -> Result<TrafficReport> {
    match kernel {
        KernelModel::Gcoo => model_gcoo_traffic(pattern, dense_cols, cfg, cache_mode),
        KernelModel::Csr => model_csr_traffic(pattern, dense_cols, cfg, cache_mode),
    }
}

/// Floating-point operations per byte of DRAM traffic.
pub fn operational_intensity(t: &TrafficReport, bytes_per_transaction: usize) -> Result<f64> {
    let bytes = t.n_dm * bytes_per_transaction as u64;
    if bytes == 0 {
        return Err(Error::UndefinedIntensity);
    }
    Ok(t.flops as f64 / bytes as f64)
}

/// Least-squares slope of `ln ys` against `ln xs`.
pub fn fit_scaling_exponent(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::ArrayLengths(format!(
            "xs={}, ys={}",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < 3 {
        return Err(Error::InsufficientPoints {
            needed: 3,
            got: xs.len(),
        });
    }
    if xs.iter().chain(ys).any(|v| v.is_nan() || *v <= 0.0) {
        return Err(Error::NonPositive("every fitted value"));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let k = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("all x values are equal".into()));
    }
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(p: usize, b: usize) -> ExecConfig {
        ExecConfig::new(p, b, 1).unwrap()
    }

    #[test]
    fn intensity_arithmetic() {
        let t = TrafficReport {
            n_dm: 8,
            flops: 1024,
            ..Default::default()
        };
        assert_eq!(operational_intensity(&t, 32).unwrap(), 4.0);
        let z = TrafficReport {
            n_dm: 8,
            ..Default::default()
        };
        assert_eq!(operational_intensity(&z, 32).unwrap(), 0.0);
        assert!(matches!(
            operational_intensity(&TrafficReport::default(), 32),
            Err(Error::UndefinedIntensity)
        ));
    }

    #[test]
    fn empty_pattern_costs_nothing() {
        let pat = Pattern::new(8, 8, vec![]).unwrap();
        for mode in [CacheMode::Cold, CacheMode::InfiniteL2] {
            assert_eq!(
                model_gcoo_traffic(&pat, 8, &cfg(4, 4), mode).unwrap(),
                TrafficReport::default()
            );
            assert_eq!(
                model_csr_traffic(&pat, 8, &cfg(4, 4), mode).unwrap(),
                TrafficReport::default()
            );
        }
    }

    #[test]
    fn single_nonzero_hand_count() {
        // n = 32, p = 4, b = 32, cold: one strip, eight groups.
        let pat = Pattern::new(32, 32, vec![(5, 7)]).unwrap();
        let t = model_gcoo_traffic(&pat, 32, &cfg(4, 32), CacheMode::Cold).unwrap();
        assert_eq!(t.n_shm, 2); // one staging write + one broadcast read
        assert_eq!(t.flops, 64);
        assert_eq!(t.tex_l1_trans, 0);
        assert_eq!(t.n_l2, 0);
        // sparse load 1 + one dense run load 1 + one nonempty group x ceil(4*32/32)
        assert_eq!(t.n_dm, 1 + 1 + 4);
    }

    #[test]
    fn diagonal_has_no_reuse() {
        let n = 64;
        let diag = Pattern::new(n, n, (0..n).map(|i| (i, i)).collect()).unwrap();
        // Same nnz, each group packed into a single column.
        let packed = Pattern::new(n, n, (0..n).map(|i| (i, i / 4)).collect()).unwrap();
        let c = cfg(4, 32);
        let rd = model_gcoo_reuse(&diag, n, &c).unwrap();
        let rp = model_gcoo_reuse(&packed, n, &c).unwrap();
        assert_eq!(rd.b_loads_reused, 0);
        assert!(rd.b_loads_total > rp.b_loads_total);
        for mode in [CacheMode::Cold, CacheMode::InfiniteL2] {
            let td = model_gcoo_traffic(&diag, n, &c, mode).unwrap();
            let tp = model_gcoo_traffic(&packed, n, &c, mode).unwrap();
            assert!(td.n_dm + td.n_l2 > tp.n_dm + tp.n_l2);
            assert_eq!(td.tex_l1_trans, 0);
        }
    }

    #[test]
    fn csr_never_uses_staging() {
        let pat = Pattern::new(10, 10, vec![(0, 0), (0, 3), (4, 3), (9, 9)]).unwrap();
        for mode in [CacheMode::Cold, CacheMode::InfiniteL2] {
            assert_eq!(
                model_csr_traffic(&pat, 10, &cfg(2, 4), mode).unwrap().n_shm,
                0
            );
        }
    }

    #[test]
    fn exponent_fits() {
        let xs = [1.0, 2.0, 4.0, 8.0, 16.0];
        let sq: Vec<f64> = xs.iter().map(|x| x * x).collect();
        assert!((fit_scaling_exponent(&xs, &sq).unwrap() - 2.0).abs() < 1e-9);
        let lin: Vec<f64> = xs.iter().map(|x| 3.5 * x).collect();
        assert!((fit_scaling_exponent(&xs, &lin).unwrap() - 1.0).abs() < 1e-9);
        assert!(fit_scaling_exponent(&xs, &[7.0; 5]).unwrap().abs() < 1e-12);
        assert!(fit_scaling_exponent(&xs[..2], &sq[..2]).is_err());
        assert!(fit_scaling_exponent(&[1.0, 2.0, 0.0], &[1.0, 2.0, 3.0]).is_err());
        assert!(fit_scaling_exponent(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn parses_modes() {
        assert_eq!("cold".parse::<CacheMode>().unwrap(), CacheMode::Cold);
        assert_eq!(
            "infinite_l2".parse::<CacheMode>().unwrap(),
            CacheMode::InfiniteL2
        );
        assert!("warm".parse::<CacheMode>().is_err());
        assert_eq!("csr".parse::<KernelModel>().unwrap(), KernelModel::Csr);
    }
}
