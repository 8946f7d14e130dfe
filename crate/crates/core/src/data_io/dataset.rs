use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::generate::{generate_uniform_coo, nonzero_count};
use super::market::{read_matrix_market, write_coo_market, MarketMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RecordSource {
    File,
    Generated,
}

/// Summary of one matrix of a collection.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixRecord {
    pub name: String,
    pub rows: usize,
    pub cols: usize,
    pub nnz: usize,
    pub sparsity: f64,
    pub source: RecordSource,
}

impl MatrixRecord {
    pub fn new(
        name: impl Into<String>,
        rows: usize,
        cols: usize,
        nnz: usize,
        source: RecordSource,
    ) -> Self {
        Self {
            name: name.into(),
            rows,
            cols,
            nnz,
            sparsity: 1.0 - nnz as f64 / (rows * cols) as f64,
            source,
        }
    }

    pub fn from_market<T: Scalar>(name: impl Into<String>, m: &MarketMatrix<T>) -> Self {
        let (rows, cols) = m.shape();
        let nnz = match m {
            MarketMatrix::Dense(d) => d.nnz(),
            MarketMatrix::Coo(c) => c.nnz(),
        };
        Self::new(name, rows, cols, nnz, RecordSource::File)
    }

    pub fn generated(n: usize, s: f64, seed: u64) -> Self {
        Self::new(
            generated_name(n, s, seed),
            n,
            n,
            nonzero_count(n, s),
            RecordSource::Generated,
        )
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
}

/// Selection rules for a public matrix collection.
#[derive(Clone, Debug, PartialEq)]
pub struct DatasetRules {
    pub square_only: bool,
    /// Inclusive sparsity range.
    pub sparsity: (f64, f64),
    /// Inclusive range for the row (and column) count.
    pub dims: (usize, usize),
}

impl Default for DatasetRules {
    /// Square matrices with sparsity in `[0.98, 0.999999]` and dimension in
    /// `[64, 36720]`.
    fn default() -> Self {
        Self {
            square_only: true,
            sparsity: (0.98, 0.999999),
            dims: (64, 36720),
        }
    }
}

impl DatasetRules {
    pub fn accepts(&self, r: &MatrixRecord) -> bool {
        let in_dims = |d: usize| (self.dims.0..=self.dims.1).contains(&d);
        (!self.square_only || r.is_square())
            && in_dims(r.rows)
            && in_dims(r.cols)
            && r.sparsity >= self.sparsity.0
            && r.sparsity <= self.sparsity.1
    }
}

pub fn filter_dataset(records: &[MatrixRecord], rules: &DatasetRules) -> Vec<MatrixRecord> {
    records
        .iter()
        .filter(|r| rules.accepts(r))
        .cloned()
        .collect()
}

/// Reads every `*.mtx` file directly under `dir`, sorted by file name.
pub fn scan_dataset(dir: impl AsRef<Path>) -> Result<Vec<MatrixRecord>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "mtx"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let m = read_matrix_market::<f64>(&p)?;
            let name = p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            Ok(MatrixRecord::from_market(name, &m))
        })
        .collect()
}

/// Points of a size × sparsity sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepGrid {
    pub sizes: Vec<usize>,
    pub sparsities: Vec<f64>,
    pub seed: u64,
}

impl SweepGrid {
    pub fn new(sizes: Vec<usize>, sparsities: Vec<f64>, seed: u64) -> Result<Self> {
        if sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(
                "sizes must be strictly increasing".into(),
            ));
        }
        if sizes.first() == Some(&0) {
            return Err(Error::InvalidArgument("sizes must be positive".into()));
        }
        if let Some(&s) = sparsities.iter().find(|s| !(0.0..1.0).contains(*s)) {
            return Err(Error::InvalidSparsity(s));
        }
        Ok(Self {
            sizes,
            sparsities,
            seed,
        })
    }

    /// The full sweep: sizes 400..=14500 step 100 and sparsities
    /// 0.8..=0.995 step 0.005 joined with 0.995..=0.9995 step 0.0005.
    pub fn full(seed: u64) -> Self {
        let sizes = (400..=14500).step_by(100).collect();
        // In units of 1e-4 so the union is exact.
        let coarse = (8000..=9950).step_by(50);
        let fine = (9955..=9995).step_by(5);
        let sparsities = coarse
            .chain(fine)
            .map(|k: u32| k as f64 / 10_000.0)
            .collect();
        Self {
            sizes,
            sparsities,
            seed,
        }
    }

    /// A sweep small enough for a workstation: n ≤ 2000.
    pub fn desk(seed: u64) -> Self {
        Self {
            sizes: vec![400, 800, 1200, 1600, 2000],
            sparsities: vec![0.8, 0.9, 0.95, 0.98, 0.99, 0.995, 0.999],
            seed,
        }
    }

    /// Keeps every `size_step`-th size and every `sparsity_step`-th sparsity,
    /// starting with the first.
    pub fn subsample(&self, size_step: usize, sparsity_step: usize) -> Self {
        Self {
            sizes: self
                .sizes
                .iter()
                .copied()
                .step_by(size_step.max(1))
                .collect(),
            sparsities: self
                .sparsities
                .iter()
                .copied()
                .step_by(sparsity_step.max(1))
                .collect(),
            seed: self.seed,
        }
    }

    pub fn len(&self) -> usize {
        self.sizes.len() * self.sparsities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `(n, s)` pairs, size-major.
    pub fn points(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.sizes
            .iter()
            .flat_map(move |&n| self.sparsities.iter().map(move |&s| (n, s)))
    }
}

pub fn full_sweep_grid() -> SweepGrid {
    SweepGrid::full(1)
}

pub fn generated_name(n: usize, s: f64, seed: u64) -> String {
    format!("uniform_n{n}_s{s}_seed{seed}")
}

/// One row of a generated-suite manifest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub name: String,
    pub n: usize,
    pub sparsity: f64,
    pub seed: u64,
    pub path: String,
}

/// Generates every grid point into `dir` as MatrixMarket files and writes
/// `dir/manifest.csv`. Paths in the manifest are relative to `dir`.
pub fn write_generated_suite<T: Scalar>(
    grid: &SweepGrid,
    dir: impl AsRef<Path>,
) -> Result<Vec<ManifestEntry>> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    let mut entries = Vec::with_capacity(grid.len());
    for (n, s) in grid.points() {
        let name = generated_name(n, s, grid.seed);
        let file = format!("{name}.mtx");
        let coo = generate_uniform_coo::<T>(n, s, grid.seed)?;
        write_coo_market(&coo, BufWriter::new(File::create(dir.join(&file))?))?;
        entries.push(ManifestEntry {
            name,
            n,
            sparsity: s,
            seed: grid.seed,
            path: file,
        });
    }
    let mut w = csv::Writer::from_path(dir.join("manifest.csv"))?;
    for e in &entries {
        w.serialize(e)?;
    }
    w.flush()?;
    Ok(entries)
}

pub fn read_manifest(path: impl AsRef<Path>) -> Result<Vec<ManifestEntry>> {
    let mut r = csv::Reader::from_path(path)?;
    r.deserialize().map(|e| e.map_err(Error::from)).collect()
}
