use std::collections::HashSet;
use std::fmt;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::data_io::{
    generate_dense_operand, generate_uniform_sparse, generated_name, nonzero_count,
    read_matrix_market, SweepGrid,
};
use crate::error::{Error, Result};
use crate::exec::ExecConfig;
use crate::kernels::{gemm_dense_blocked, gemm_oracle, spdm_coo, spdm_csr, spdm_gcoo};
use crate::matrix::{CooMatrix, CsrMatrix, DenseMatrix, GcooMatrix};
use crate::scalar::Scalar;

/// Seed offset separating the dense operand's stream from the sparse one.
pub const DENSE_SEED_OFFSET: u64 = 0x5eed_0000_0000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kernel {
    Oracle,
    Dense,
    Csr,
    Coo,
    Gcoo,
}

impl Kernel {
    pub const ALL: [Kernel; 5] = [
        Kernel::Oracle,
        Kernel::Dense,
        Kernel::Csr,
        Kernel::Coo,
        Kernel::Gcoo,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Kernel::Oracle => "oracle",
            Kernel::Dense => "dense",
            Kernel::Csr => "csr",
            Kernel::Coo => "coo",
            Kernel::Gcoo => "gcoo",
        }
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kernel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Kernel::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown kernel `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum MatrixSource {
    Generated { n: usize, sparsity: f64, seed: u64 },
    File(PathBuf),
}

impl MatrixSource {
    pub fn name(&self) -> String {
        match self {
            MatrixSource::Generated { n, sparsity, seed } => generated_name(*n, *sparsity, *seed),
            MatrixSource::File(p) => p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| p.display().to_string()),
        }
    }

    fn seed(&self) -> u64 {
        match self {
            MatrixSource::Generated { seed, .. } => *seed,
            MatrixSource::File(_) => 0,
        }
    }

    pub fn load<T: Scalar>(&self) -> Result<DenseMatrix<T>> {
        match self {
            MatrixSource::Generated { n, sparsity, seed } => {
                generate_uniform_sparse(*n, *sparsity, *seed)
            }
            MatrixSource::File(p) => Ok(read_matrix_market::<T>(p)?.to_dense()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BenchOptions {
    pub repetitions: usize,
    pub warmup: usize,
}

impl Default for BenchOptions {
    fn default() -> Self {
        Self {
            repetitions: 5,
            warmup: 2,
        }
    }
}

/// One timed kernel run. Serialized as one CSV row in field order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchResult {
    pub kernel: Kernel,
    pub name: String,
    /// Rows of the sparse operand.
    pub m: usize,
    /// Columns of the sparse operand (rows of the dense one).
    pub k: usize,
    /// Columns of the dense operand.
    pub n: usize,
    pub nnz: usize,
    pub sparsity: f64,
    pub eo_seconds: f64,
    pub kc_seconds: f64,
    pub effective_gflops: f64,
    pub repetitions: usize,
    pub warmup: usize,
    pub p: usize,
    pub b: usize,
    pub workers: usize,
    pub scalar: String,
    pub seed: u64,
}

impl BenchResult {
    /// Whether `effective_gflops` matches the rate recomputed from the
    /// row's own shape, sparsity and kernel time.
    pub fn is_consistent(&self) -> bool {
        match effective_gflops_rect(self.m, self.k, self.n, self.sparsity, self.kc_seconds) {
            Ok(g) => (g - self.effective_gflops).abs() <= 1e-9 * g.abs().max(1e-300),
            Err(_) => false,
        }
    }

    fn key(&self) -> (Kernel, usize, usize, usize, u64, u64) {
        (
            self.kernel,
            self.m,
            self.k,
            self.n,
            self.sparsity.to_bits(),
            self.seed,
        )
    }
}

/// Nonzero-normalized rate in GFLOPS: `2 n³ (1 - s) / t / 1e9`.
pub fn effective_gflops(n: usize, s: f64, t: f64) -> Result<f64> {
    effective_gflops_rect(n, n, n, s, t)
}

/// Rectangular form `2 m k n (1 - s) / t / 1e9` for an `m x k` sparse
/// operand and a `k x n` dense one.
pub fn effective_gflops_rect(m: usize, k: usize, n: usize, s: f64, t: f64) -> Result<f64> {
    if t.is_nan() || t <= 0.0 {
        return Err(Error::NonPositive("time"));
    }
    Ok(2.0 * m as f64 * k as f64 * n as f64 * (1.0 - s) / t / 1e9)
}

pub fn median(samples: &mut [f64]) -> f64 {
    samples.sort_by(f64::total_cmp);
    let len = samples.len();
    if len == 0 {
        return f64::NAN;
    }
    if len % 2 == 1 {
        samples[len / 2]
    } else {
        0.5 * (samples[len / 2 - 1] + samples[len / 2])
    }
}

fn time_runs(opts: &BenchOptions, mut run: impl FnMut() -> Result<()>) -> Result<f64> {
    for _ in 0..opts.warmup {
        run()?;
    }
    let mut samples = Vec::with_capacity(opts.repetitions);
    for _ in 0..opts.repetitions {
        let t = Instant::now();
        run()?;
        samples.push(t.elapsed().as_secs_f64());
    }
    // Clock granularity can round a tiny kernel down to zero.
    Ok(median(&mut samples).max(1e-9))
}

/// Times `kernel` on an already loaded sparse operand `a` against the dense
/// operand `b`.
pub(crate) fn bench_loaded<T: Scalar>(
    name: String,
    seed: u64,
    a: &DenseMatrix<T>,
    b: &DenseMatrix<T>,
    kernel: Kernel,
    cfg: &ExecConfig,
    opts: &BenchOptions,
) -> Result<BenchResult> {
    cfg.validate()?;
    if opts.repetitions == 0 {
        return Err(Error::InvalidArgument(
            "repetitions must be at least 1".into(),
        ));
    }
    if a.cols() != b.rows() {
        return Err(Error::DimensionMismatch {
            left_rows: a.rows(),
            left_cols: a.cols(),
            right_rows: b.rows(),
            right_cols: b.cols(),
        });
    }

    let (eo, kc) = match kernel {
        Kernel::Oracle => (0.0, time_runs(opts, || gemm_oracle(a, b).map(drop))?),
        Kernel::Dense => (
            0.0,
            time_runs(opts, || gemm_dense_blocked(a, b, cfg).map(drop))?,
        ),
        Kernel::Csr => {
            let t = Instant::now();
            let s = CsrMatrix::from_dense(a);
            let eo = t.elapsed().as_secs_f64();
            (eo, time_runs(opts, || spdm_csr(&s, b, cfg).map(drop))?)
        }
        Kernel::Coo => {
            let t = Instant::now();
            let s = CooMatrix::from_dense(a);
            let eo = t.elapsed().as_secs_f64();
            (eo, time_runs(opts, || spdm_coo(&s, b, cfg).map(drop))?)
        }
        Kernel::Gcoo => {
            let t = Instant::now();
            let s = GcooMatrix::from_dense_with_workers(a, cfg.p, cfg.workers)?;
            let eo = t.elapsed().as_secs_f64();
            (eo, time_runs(opts, || spdm_gcoo(&s, b, cfg).map(drop))?)
        }
    };

    let nnz = a.nnz();
    let sparsity = 1.0 - nnz as f64 / (a.rows() * a.cols()) as f64;
    Ok(BenchResult {
        kernel,
        name,
        m: a.rows(),
        k: a.cols(),
        n: b.cols(),
        nnz,
        sparsity,
        eo_seconds: eo,
        kc_seconds: kc,
        effective_gflops: effective_gflops_rect(a.rows(), a.cols(), b.cols(), sparsity, kc)?,
        repetitions: opts.repetitions,
        warmup: opts.warmup,
        p: cfg.p,
        b: cfg.b,
        workers: cfg.workers,
        scalar: T::NAME.to_string(),
        seed,
    })
}

/// Loads `source`, pairs it with a seeded dense operand of matching inner
/// dimension (square product), and times `kernel`.
pub fn run_benchmark<T: Scalar>(
    source: &MatrixSource,
    kernel: Kernel,
    cfg: &ExecConfig,
    opts: &BenchOptions,
) -> Result<BenchResult> {
    cfg.validate()?;
    let a = source.load::<T>()?;
    let b = dense_operand_for(&a, source.seed())?;
    bench_loaded(source.name(), source.seed(), &a, &b, kernel, cfg, opts)
}

pub(crate) fn dense_operand_for<T: Scalar>(
    a: &DenseMatrix<T>,
    seed: u64,
) -> Result<DenseMatrix<T>> {
    generate_dense_operand(a.cols(), a.cols(), seed.wrapping_add(DENSE_SEED_OFFSET))
}

pub fn write_bench_csv<W: Write>(rows: &[BenchResult], w: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(w);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_bench_csv(path: impl AsRef<Path>) -> Result<Vec<BenchResult>> {
    let mut r = csv::Reader::from_path(path)?;
    r.deserialize()
        .map(|row| row.map_err(Error::from))
        .collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SweepSummary {
    pub written: usize,
    pub skipped: usize,
}

/// Runs every `(n, s, kernel)` of the grid and appends one row per run to
/// `out`. Rows already present in `out` are skipped, so an interrupted sweep
/// can be resumed by rerunning it.
pub fn sweep<T: Scalar>(
    grid: &SweepGrid,
    kernels: &[Kernel],
    cfg: &ExecConfig,
    opts: &BenchOptions,
    out: impl AsRef<Path>,
) -> Result<SweepSummary> {
    cfg.validate()?;
    let out = out.as_ref();
    let existing = if out.exists() && std::fs::metadata(out)?.len() > 0 {
        read_bench_csv(out)?
    } else {
        Vec::new()
    };
    let done: HashSet<_> = existing.iter().map(BenchResult::key).collect();
    let file = OpenOptions::new().create(true).append(true).open(out)?;
    let mut w = csv::WriterBuilder::new()
        .has_headers(existing.is_empty())
        .from_writer(file);

    let mut summary = SweepSummary::default();
    for (n, s) in grid.points() {
        let measured = 1.0 - nonzero_count(n, s) as f64 / (n * n) as f64;
        let key = |k: Kernel| (k, n, n, n, measured.to_bits(), grid.seed);
        let todo: Vec<Kernel> = kernels
            .iter()
            .copied()
            .filter(|&k| !done.contains(&key(k)))
            .collect();
        summary.skipped += kernels.len() - todo.len();
        if todo.is_empty() {
            continue;
        }
        let a = generate_uniform_sparse::<T>(n, s, grid.seed)?;
        let b = dense_operand_for(&a, grid.seed)?;
        for k in todo {
            let row = bench_loaded(
                generated_name(n, s, grid.seed),
                grid.seed,
                &a,
                &b,
                k,
                cfg,
                opts,
            )?;
            w.serialize(&row)?;
            w.flush()?;
            summary.written += 1;
        }
    }
    Ok(summary)
}
