use crate::data_io::{generate_uniform_sparse, generated_name};
use crate::error::{Error, Result};
use crate::exec::ExecConfig;
use crate::scalar::Scalar;

use super::runner::{bench_loaded, dense_operand_for, BenchOptions, Kernel};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrossoverPoint {
    pub sparsity: f64,
    pub gcoo_kc: f64,
    pub dense_kc: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CrossoverReport {
    pub n: usize,
    pub points: Vec<CrossoverPoint>,
    /// Smallest sparsity at which the GCOO kernel beat the dense baseline.
    pub crossover: Option<f64>,
}

/// First point whose sparse time is strictly below the dense time.
pub fn first_crossover(points: &[CrossoverPoint]) -> Option<f64> {
    points
        .iter()
        .find(|p| p.gcoo_kc < p.dense_kc)
        .map(|p| p.sparsity)
}

/// Times the GCOO kernel and the blocked dense kernel at every sparsity of
/// `s_grid` (ascending) for `n x n` operands.
pub fn crossover_search<T: Scalar>(
    n: usize,
    cfg: &ExecConfig,
    s_grid: &[f64],
    seed: u64,
    opts: &BenchOptions,
) -> Result<CrossoverReport> {
    if s_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "sparsity grid must be ascending".into(),
        ));
    }
    let mut points = Vec::with_capacity(s_grid.len());
    for &s in s_grid {
        let a = generate_uniform_sparse::<T>(n, s, seed)?;
        let b = dense_operand_for(&a, seed)?;
        let name = generated_name(n, s, seed);
        let gcoo = bench_loaded(name.clone(), seed, &a, &b, Kernel::Gcoo, cfg, opts)?;
        let dense = bench_loaded(name, seed, &a, &b, Kernel::Dense, cfg, opts)?;
        points.push(CrossoverPoint {
            sparsity: s,
            gcoo_kc: gcoo.kc_seconds,
            dense_kc: dense.kc_seconds,
        });
    }
    let crossover = first_crossover(&points);
    Ok(CrossoverReport {
        n,
        points,
        crossover,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(sparsity: f64, gcoo_kc: f64, dense_kc: f64) -> CrossoverPoint {
        CrossoverPoint {
            sparsity,
            gcoo_kc,
            dense_kc,
        }
    }

    #[test]
    fn picks_first_win() {
        let pts = [
            pt(0.9, 3.0, 1.0),
            pt(0.95, 1.0, 1.0),
            pt(0.98, 0.5, 1.0),
            pt(0.99, 0.2, 1.0),
        ];
        assert_eq!(first_crossover(&pts), Some(0.98));
        assert_eq!(first_crossover(&pts[..2]), None);
        assert_eq!(first_crossover(&[]), None);
    }

    #[test]
    fn rejects_unsorted_grid() {
        let opts = BenchOptions {
            repetitions: 1,
            warmup: 0,
        };
        assert!(crossover_search::<f32>(8, &ExecConfig::default(), &[0.9, 0.5], 1, &opts).is_err());
    }

    #[test]
    fn small_search_runs() {
        let opts = BenchOptions {
            repetitions: 1,
            warmup: 0,
        };
        let r =
            crossover_search::<f32>(32, &ExecConfig::default(), &[0.5, 0.9999], 1, &opts).unwrap();
        assert_eq!(r.points.len(), 2);
        assert!(r.points.iter().all(|p| p.gcoo_kc > 0.0 && p.dense_kc > 0.0));
    }
}
