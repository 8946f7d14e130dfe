use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gcoo::bench::{
    crossover_search, run_benchmark, sweep, traffic_report, write_bench_csv, write_traffic_csv,
    BenchOptions, Kernel, MatrixSource, DENSE_SEED_OFFSET,
};
use gcoo::data_io::{
    generate_dense_operand, read_matrix_market, write_dense_market, write_generated_suite,
    SweepGrid,
};
use gcoo::exec::ExecConfig;
use gcoo::kernels::{
    gemm_dense_blocked, gemm_oracle, spdm_coo_with_stats, spdm_csr, spdm_gcoo, KernelStats,
};
use gcoo::matrix::{
    storage_footprint, CooMatrix, CsrMatrix, DenseMatrix, GcooMatrix, StorageFormat,
};
use gcoo::traffic::{
    fit_scaling_exponent, roofline_throughput, CacheMode, KernelModel, Pattern, RooflineModel,
};
use gcoo::{Error, Scalar};

#[derive(Parser)]
#[command(
    name = "gcoo",
    version,
    about = "Sparse-dense matrix multiplication with grouped COO storage"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convert a matrix and print the storage footprint of each format.
    Convert(ConvertArgs),
    /// Multiply a sparse matrix by a dense one and print kernel counters.
    Multiply(MultiplyArgs),
    /// Time kernels on one matrix (CSV on stdout or --out).
    Bench(BenchArgs),
    /// Time kernels over a size x sparsity grid, appending to --out.
    Sweep(SweepArgs),
    /// Find the smallest sparsity where the GCOO kernel beats the dense one.
    Crossover(CrossoverArgs),
    /// Evaluate the memory-traffic model.
    Traffic(TrafficArgs),
    /// Print the roofline bound of the built-in hardware profiles.
    Roofline(RooflineArgs),
    /// Write a generated MatrixMarket suite and its manifest.
    Generate(GenerateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ScalarArg {
    F32,
    F64,
}

#[derive(Args, Clone)]
struct Source {
    /// MatrixMarket file. When absent a uniform random matrix is generated.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Order of the generated matrix.
    #[arg(long, default_value_t = 1000)]
    n: usize,
    /// Fraction of zeros in the generated matrix.
    #[arg(long, short = 's', default_value_t = 0.99)]
    sparsity: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

impl Source {
    fn matrix_source(&self) -> MatrixSource {
        match &self.input {
            Some(p) => MatrixSource::File(p.clone()),
            None => MatrixSource::Generated {
                n: self.n,
                sparsity: self.sparsity,
                seed: self.seed,
            },
        }
    }

    fn seed(&self) -> u64 {
        if self.input.is_some() {
            0
        } else {
            self.seed
        }
    }
}

#[derive(Args, Clone)]
struct Exec {
    /// Rows per group.
    #[arg(long = "p", default_value_t = ExecConfig::DEFAULT_P)]
    p: usize,
    /// Lanes per column strip.
    #[arg(long = "b", default_value_t = ExecConfig::DEFAULT_B)]
    b: usize,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    #[arg(long, value_enum, default_value_t = ScalarArg::F32)]
    scalar: ScalarArg,
}

impl Exec {
    fn config(&self) -> Result<ExecConfig, Error> {
        ExecConfig::new(self.p, self.b, self.workers)
    }
}

#[derive(Args, Clone)]
struct Timing {
    #[arg(long, default_value_t = 5)]
    reps: usize,
    #[arg(long, default_value_t = 2)]
    warmup: usize,
}

impl Timing {
    fn options(&self) -> BenchOptions {
        BenchOptions {
            repetitions: self.reps,
            warmup: self.warmup,
        }
    }
}

#[derive(Args)]
struct ConvertArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long = "p", default_value_t = ExecConfig::DEFAULT_P)]
    p: usize,
    /// Also print the GCOO arrays.
    #[arg(long)]
    arrays: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MultiplyArgs {
    #[command(flatten)]
    source: Source,
    /// Dense right operand. Generated when absent.
    #[arg(long)]
    rhs: Option<PathBuf>,
    /// Columns of the generated right operand; defaults to the inner dimension.
    #[arg(long)]
    cols: Option<usize>,
    #[arg(long, value_parser = parse_kernel, default_value = "gcoo")]
    kernel: Kernel,
    /// Compare against the oracle and print the maximum relative error.
    #[arg(long)]
    verify: bool,
    #[command(flatten)]
    exec: Exec,
    /// Write the product as a MatrixMarket array file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, value_parser = parse_kernel, value_delimiter = ',', default_value = "dense,csr,coo,gcoo")]
    kernel: Vec<Kernel>,
    #[command(flatten)]
    exec: Exec,
    #[command(flatten)]
    timing: Timing,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GridArg {
    Desk,
    Full,
}

#[derive(Args)]
struct SweepArgs {
    /// Named grid, used unless --sizes and --sparsities are both given.
    #[arg(long, value_enum, default_value_t = GridArg::Desk)]
    grid: GridArg,
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    sparsities: Vec<f64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_parser = parse_kernel, value_delimiter = ',', default_value = "dense,csr,coo,gcoo")]
    kernel: Vec<Kernel>,
    #[command(flatten)]
    exec: Exec,
    #[command(flatten)]
    timing: Timing,
    /// Results file. Rows already present are skipped.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CrossoverArgs {
    #[arg(long, default_value_t = 2000)]
    n: usize,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "0.9,0.95,0.98,0.99,0.995,0.999"
    )]
    sparsities: Vec<f64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    exec: Exec,
    #[command(flatten)]
    timing: Timing,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TrafficArgs {
    /// MatrixMarket file. When absent, patterns are generated for every
    /// (n, sparsity) pair.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "1000")]
    n: Vec<usize>,
    #[arg(long, short = 's', value_delimiter = ',', default_value = "0.995")]
    sparsity: Vec<f64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Columns of the dense operand; defaults to the sparse operand's columns.
    #[arg(long)]
    cols: Option<usize>,
    #[arg(long, value_parser = parse_model, value_delimiter = ',', default_value = "gcoo")]
    model: Vec<KernelModel>,
    #[arg(long, value_parser = parse_cache_mode, default_value = "infinite_l2")]
    cache_mode: CacheMode,
    #[arg(long = "p", default_value_t = ExecConfig::DEFAULT_P)]
    p: usize,
    #[arg(long = "b", default_value_t = ExecConfig::DEFAULT_B)]
    b: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RooflineArgs {
    /// Profile name (GTX980, TitanX, P100). Every profile when absent.
    #[arg(long)]
    hardware: Option<String>,
    /// Operational intensities in FLOP per byte.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "0.25,0.5,1,2,4,8,16,32,64"
    )]
    intensity: Vec<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    sparsities: Vec<f64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = ScalarArg::F32)]
    scalar: ScalarArg,
    /// Output directory; receives one .mtx per point and manifest.csv.
    #[arg(long)]
    dir: PathBuf,
}

fn parse_kernel(s: &str) -> Result<Kernel, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_model(s: &str) -> Result<KernelModel, String> {
    match s.to_ascii_lowercase().as_str() {
        "gcoo" => Ok(KernelModel::Gcoo),
        "csr" => Ok(KernelModel::Csr),
        other => Err(format!("unknown model `{other}`")),
    }
}

fn parse_cache_mode(s: &str) -> Result<CacheMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Either a usage problem detected after parsing, or a library error.
enum Failure {
    Usage(String),
    Data(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotPowerOfTwo { .. }
            | Error::InvalidArgument(_)
            | Error::InvalidSparsity(_)
            | Error::NonPositive(_)
            | Error::ZeroDimension { .. } => Failure::Usage(e.to_string()),
            other => Failure::Data(other),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Data(Error::Io(e))
    }
}

type CliResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command) -> CliResult {
    match cmd {
        Command::Convert(a) => convert(&a),
        Command::Multiply(a) => match a.exec.scalar {
            ScalarArg::F32 => multiply::<f32>(&a),
            ScalarArg::F64 => multiply::<f64>(&a),
        },
        Command::Bench(a) => match a.exec.scalar {
            ScalarArg::F32 => bench::<f32>(&a),
            ScalarArg::F64 => bench::<f64>(&a),
        },
        Command::Sweep(a) => match a.exec.scalar {
            ScalarArg::F32 => run_sweep::<f32>(&a),
            ScalarArg::F64 => run_sweep::<f64>(&a),
        },
        Command::Crossover(a) => match a.exec.scalar {
            ScalarArg::F32 => crossover::<f32>(&a),
            ScalarArg::F64 => crossover::<f64>(&a),
        },
        Command::Traffic(a) => traffic(&a),
        Command::Roofline(a) => roofline(&a),
        Command::Generate(a) => generate(&a),
    }
}

fn output(path: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn convert(a: &ConvertArgs) -> CliResult {
    // Values are carried in f64 so the arrays print without rounding.
    let dense = a.source.matrix_source().load::<f64>()?;
    let coo = CooMatrix::from_dense(&dense);
    let gcoo = GcooMatrix::from_coo(&coo, a.p)?;
    let mut w = output(&a.out)?;
    writeln!(w, "format,rows,cols,nnz,p,words")?;
    for f in StorageFormat::ALL {
        let fp = storage_footprint(f, dense.rows(), coo.nnz(), a.p)?;
        writeln!(
            w,
            "{f},{},{},{},{},{}",
            dense.rows(),
            dense.cols(),
            coo.nnz(),
            a.p,
            fp.words
        )?;
    }
    if a.arrays {
        let csr = CsrMatrix::from_coo(&coo);
        writeln!(w)?;
        writeln!(w, "coo.values: {}", join(coo.values()))?;
        writeln!(w, "coo.row_idx: {}", join(coo.row_idx()))?;
        writeln!(w, "coo.col_idx: {}", join(coo.col_idx()))?;
        writeln!(w, "csr.row_ptr: {}", join(csr.row_ptr()))?;
        writeln!(w, "csr.col_idx: {}", join(csr.col_idx()))?;
        writeln!(w, "csr.values: {}", join(csr.values()))?;
        writeln!(w, "gcoo.values: {}", join(gcoo.values()))?;
        writeln!(w, "gcoo.row_idx: {}", join(gcoo.row_idx()))?;
        writeln!(w, "gcoo.col_idx: {}", join(gcoo.col_idx()))?;
        writeln!(w, "gcoo.g_idxes: {}", join(gcoo.g_idxes()))?;
        writeln!(w, "gcoo.nnz_per_group: {}", join(gcoo.nnz_per_group()))?;
    }
    w.flush()?;
    Ok(())
}

fn multiply<T: Scalar>(a: &MultiplyArgs) -> CliResult {
    let cfg = a.exec.config()?;
    let lhs = a.source.matrix_source().load::<T>()?;
    let rhs = match &a.rhs {
        Some(p) => read_matrix_market::<T>(p)?.to_dense(),
        None => generate_dense_operand::<T>(
            lhs.cols(),
            a.cols.unwrap_or(lhs.cols()),
            a.source.seed().wrapping_add(DENSE_SEED_OFFSET),
        )?,
    };
    let (c, stats) = multiply_with(&lhs, &rhs, a.kernel, &cfg)?;

    let mut out = io::stdout().lock();
    writeln!(
        out,
        "kernel,m,k,n,nnz,flops,b_loads_total,b_loads_reused,staging_fills"
    )?;
    writeln!(
        out,
        "{},{},{},{},{},{},{},{},{}",
        a.kernel,
        lhs.rows(),
        lhs.cols(),
        rhs.cols(),
        lhs.nnz(),
        stats.flops,
        stats.b_loads_total,
        stats.b_loads_reused,
        stats.staging_fills
    )?;
    if a.verify {
        let err = c.max_relative_error(&gemm_oracle(&lhs, &rhs)?);
        writeln!(out, "max_relative_error,{err:e}")?;
    }
    if let Some(p) = &a.out {
        write_dense_market(&c, BufWriter::new(File::create(p)?))?;
    }
    Ok(())
}

/// Runs one kernel. Kernels without instrumentation report only flops.
fn multiply_with<T: Scalar>(
    a: &DenseMatrix<T>,
    b: &DenseMatrix<T>,
    kernel: Kernel,
    cfg: &ExecConfig,
) -> Result<(DenseMatrix<T>, KernelStats), Error> {
    let flops_only = |c: DenseMatrix<T>| {
        let stats = KernelStats {
            flops: 2 * (a.nnz() * b.cols()) as u64,
            ..Default::default()
        };
        (c, stats)
    };
    Ok(match kernel {
        Kernel::Oracle => flops_only(gemm_oracle(a, b)?),
        Kernel::Dense => flops_only(gemm_dense_blocked(a, b, cfg)?),
        Kernel::Csr => flops_only(spdm_csr(&CsrMatrix::from_dense(a), b, cfg)?),
        Kernel::Coo => spdm_coo_with_stats(&CooMatrix::from_dense(a), b, cfg)?,
        Kernel::Gcoo => spdm_gcoo(
            &GcooMatrix::from_dense_with_workers(a, cfg.p, cfg.workers)?,
            b,
            cfg,
        )?,
    })
}

fn bench<T: Scalar>(a: &BenchArgs) -> CliResult {
    let cfg = a.exec.config()?;
    let src = a.source.matrix_source();
    let rows = a
        .kernel
        .iter()
        .map(|&k| run_benchmark::<T>(&src, k, &cfg, &a.timing.options()))
        .collect::<Result<Vec<_>, _>>()?;
    write_bench_csv(&rows, output(&a.out)?)?;
    Ok(())
}

fn run_sweep<T: Scalar>(a: &SweepArgs) -> CliResult {
    let cfg = a.exec.config()?;
    let grid = match (a.sizes.is_empty(), a.sparsities.is_empty()) {
        (false, false) => SweepGrid::new(a.sizes.clone(), a.sparsities.clone(), a.seed)?,
        (true, true) => match a.grid {
            GridArg::Desk => SweepGrid::desk(a.seed),
            GridArg::Full => SweepGrid::full(a.seed),
        },
        _ => {
            return Err(Failure::Usage(
                "--sizes and --sparsities must be given together".into(),
            ))
        }
    };
    let summary = sweep::<T>(&grid, &a.kernel, &cfg, &a.timing.options(), &a.out)?;
    eprintln!(
        "{} rows written, {} already present",
        summary.written, summary.skipped
    );
    Ok(())
}

fn crossover<T: Scalar>(a: &CrossoverArgs) -> CliResult {
    let cfg = a.exec.config()?;
    let report = crossover_search::<T>(a.n, &cfg, &a.sparsities, a.seed, &a.timing.options())?;
    let mut w = output(&a.out)?;
    writeln!(w, "n,sparsity,gcoo_kc_seconds,dense_kc_seconds")?;
    for p in &report.points {
        writeln!(
            w,
            "{},{},{:e},{:e}",
            report.n, p.sparsity, p.gcoo_kc, p.dense_kc
        )?;
    }
    w.flush()?;
    match report.crossover {
        Some(s) => eprintln!("crossover at s = {s}"),
        None => eprintln!("no crossover in the grid"),
    }
    Ok(())
}

fn traffic(a: &TrafficArgs) -> CliResult {
    let cfg = ExecConfig::new(a.p, a.b, 0)?;
    let mut inputs: Vec<(String, Pattern)> = Vec::new();
    match &a.input {
        Some(path) => {
            let coo = read_matrix_market::<f64>(path)?.into_coo();
            let name = MatrixSource::File(path.clone()).name();
            inputs.push((name, Pattern::from_coo(&coo)));
        }
        None => {
            for &n in &a.n {
                for &s in &a.sparsity {
                    let name = gcoo::data_io::generated_name(n, s, a.seed);
                    inputs.push((name, gcoo::data_io::generate_uniform_pattern(n, s, a.seed)?));
                }
            }
        }
    }

    let mut rows = Vec::new();
    for model in &a.model {
        for (name, pat) in &inputs {
            let cols = a.cols.unwrap_or(pat.cols());
            rows.push(traffic_report(
                name.clone(),
                pat,
                cols,
                *model,
                &cfg,
                a.cache_mode,
            )?);
        }
    }
    write_traffic_csv(&rows, output(&a.out)?)?;

    // Scaling exponents for a single-axis sweep.
    if a.input.is_none() {
        for model in &a.model {
            let sel: Vec<_> = rows
                .iter()
                .filter(|r| r.model == *model && r.total_transactions > 0)
                .collect();
            let ys: Vec<f64> = sel.iter().map(|r| r.total_transactions as f64).collect();
            let xs: Vec<f64> = if a.sparsity.len() == 1 {
                sel.iter().map(|r| r.rows as f64).collect()
            } else if a.n.len() == 1 {
                sel.iter().map(|r| 1.0 - r.sparsity).collect()
            } else {
                continue;
            };
            let axis = if a.sparsity.len() == 1 { "n" } else { "1-s" };
            if let Ok(k) = fit_scaling_exponent(&xs, &ys) {
                eprintln!(
                    "{} transactions ~ ({axis})^{k:.4}",
                    format!("{model:?}").to_lowercase()
                );
            }
        }
    }
    Ok(())
}

fn roofline(a: &RooflineArgs) -> CliResult {
    let profiles = match &a.hardware {
        Some(name) => vec![RooflineModel::by_name(name)
            .ok_or_else(|| Failure::Usage(format!("unknown hardware profile `{name}`")))?],
        None => RooflineModel::builtin(),
    };
    if let Some(r) = a.intensity.iter().find(|r| r.is_nan() || **r < 0.0) {
        return Err(Failure::Usage(format!(
            "intensity must be non-negative, got {r}"
        )));
    }
    let mut w = output(&a.out)?;
    writeln!(
        w,
        "hardware,peak_tflops,bandwidth_gbs,ridge_point,intensity,attainable_tflops,memory_bound"
    )?;
    for hw in &profiles {
        for &r in &a.intensity {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                hw.name,
                hw.peak_flops / 1e12,
                hw.bandwidth / 1e9,
                hw.ridge_point(),
                r,
                roofline_throughput(r, hw) / 1e12,
                hw.is_memory_bound(r)
            )?;
        }
    }
    w.flush()?;
    Ok(())
}

fn generate(a: &GenerateArgs) -> CliResult {
    let grid = SweepGrid::new(a.sizes.clone(), a.sparsities.clone(), a.seed)?;
    let entries = match a.scalar {
        ScalarArg::F32 => write_generated_suite::<f32>(&grid, &a.dir)?,
        ScalarArg::F64 => write_generated_suite::<f64>(&grid, &a.dir)?,
    };
    eprintln!("{} matrices written to {}", entries.len(), a.dir.display());
    Ok(())
}
