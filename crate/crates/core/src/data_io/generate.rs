//! Seeded uniform-random sparse matrices.
//!
//! All randomness comes from `ChaCha8Rng::seed_from_u64(seed)`. Positions are
//! drawn with `rand::seq::index::sample` (exact count, no replacement),
//! sorted row-major, and then assigned values `1 - u` with `u` uniform in
//! `[0, 1)`, i.e. uniform in `(0, 1]`, in that order.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::{CooMatrix, DenseMatrix};
use crate::scalar::Scalar;
use crate::traffic::Pattern;

fn check_sparsity(s: f64) -> Result<()> {
    if (0.0..=1.0).contains(&s) {
        Ok(())
    } else {
        Err(Error::InvalidSparsity(s))
    }
}

/// `round(n² (1 - s))`.
pub fn nonzero_count(n: usize, s: f64) -> usize {
    ((n * n) as f64 * (1.0 - s)).round() as usize
}

fn draw<T: Scalar>(n: usize, s: f64, seed: u64) -> Result<(Vec<usize>, Vec<T>)> {
    check_sparsity(s)?;
    if n == 0 {
        return Err(Error::ZeroDimension { rows: 0, cols: 0 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cells = index::sample(&mut rng, n * n, nonzero_count(n, s)).into_vec();
    cells.sort_unstable();
    let values = cells
        .iter()
        .map(|_| T::from_f64(1.0 - rng.gen::<f64>()))
        .collect();
    Ok((cells, values))
}

/// `n x n` matrix with exactly [`nonzero_count`] nonzeros placed uniformly
/// at random.
pub fn generate_uniform_sparse<T: Scalar>(n: usize, s: f64, seed: u64) -> Result<DenseMatrix<T>> {
    let (cells, values) = draw::<T>(n, s, seed)?;
    let mut data = vec![T::zero(); n * n];
    for (c, v) in cells.into_iter().zip(values) {
        data[c] = v;
    }
    DenseMatrix::new(n, n, data)
}

/// Same matrix as [`generate_uniform_sparse`] without materializing it
/// densely.
pub fn generate_uniform_coo<T: Scalar>(n: usize, s: f64, seed: u64) -> Result<CooMatrix<T>> {
    let (cells, values) = draw::<T>(n, s, seed)?;
    let (rows, cols) = cells.iter().map(|&c| (c / n, c % n)).unzip();
    CooMatrix::new(n, n, values, rows, cols)
}

/// Coordinates of [`generate_uniform_sparse`]'s nonzeros.
pub fn generate_uniform_pattern(n: usize, s: f64, seed: u64) -> Result<Pattern> {
    check_sparsity(s)?;
    if n == 0 {
        return Err(Error::ZeroDimension { rows: 0, cols: 0 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cells = index::sample(&mut rng, n * n, nonzero_count(n, s)).into_vec();
    cells.sort_unstable();
    Pattern::new(n, n, cells.into_iter().map(|c| (c / n, c % n)).collect())
}

/// Fully dense `rows x cols` operand with values uniform in `(0, 1]`.
pub fn generate_dense_operand<T: Scalar>(
    rows: usize,
    cols: usize,
    seed: u64,
) -> Result<DenseMatrix<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DenseMatrix::from_fn(rows, cols, |_, _| T::from_f64(1.0 - rng.gen::<f64>()))
}
