//! Kernel tiling parameters and the worker pool that runs independent work
//! items (row bands, groups, column strips).
//!
//! With the `parallel` feature (on by default) work items are spread over a
//! rayon pool; without it, or with `workers == 1`, they run in order on the
//! calling thread. Work items never share output, so results are identical
//! either way.

use crate::error::{Error, Result};

/// Tiling parameters shared by all kernels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExecConfig {
    /// Output-tile height; equals the rows per GCOO group.
    pub p: usize,
    /// Output-tile width and staging-buffer capacity in entries.
    pub b: usize,
    /// Concurrent workers; 0 picks the available hardware parallelism.
    pub workers: usize,
}

impl ExecConfig {
    pub const DEFAULT_P: usize = 4;
    pub const DEFAULT_B: usize = 64;

    pub fn new(p: usize, b: usize, workers: usize) -> Result<Self> {
        let cfg = Self { p, b, workers };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        check_power_of_two("p", self.p)?;
        check_power_of_two("b", self.b)
    }

    pub fn with_workers(self, workers: usize) -> Self {
        Self { workers, ..self }
    }

    /// Worker count after resolving `0` to the hardware parallelism.
    pub fn resolved_workers(&self) -> usize {
        match self.workers {
            0 => available_workers(),
            w => w,
        }
    }

    /// Number of `(row-band, column-strip)` tiles for an `m x k` sparse
    /// operand times a `k x n` dense operand.
    pub fn tile_grid(&self, m: usize, n: usize) -> (usize, usize) {
        (m.div_ceil(self.p), n.div_ceil(self.b))
    }
}

impl Default for ExecConfig {
    fn default() -> Self {
        Self {
            p: Self::DEFAULT_P,
            b: Self::DEFAULT_B,
            workers: 0,
        }
    }
}

pub(crate) fn check_power_of_two(name: &'static str, value: usize) -> Result<()> {
    if value.is_power_of_two() {
        Ok(())
    } else {
        Err(Error::NotPowerOfTwo { name, value })
    }
}

pub fn available_workers() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

/// Applies `f` to every item and returns the results in item order.
///
/// `workers == 0` uses the global pool, `workers == 1` runs sequentially,
/// anything else runs inside a dedicated pool of that size.
pub(crate) fn map_items<W, R, F>(items: Vec<W>, workers: usize, f: F) -> Vec<R>
where
    W: Send,
    R: Send,
    F: Fn(usize, W) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if workers != 1 && items.len() > 1 {
        use rayon::prelude::*;
        let pool = match workers {
            0 => None,
            w => match rayon::ThreadPoolBuilder::new().num_threads(w).build() {
                Ok(pool) => Some(pool),
                // Could not spawn threads; run sequentially instead.
                Err(_) => return sequential(items, f),
            },
        };
        let job = || {
            items
                .into_par_iter()
                .enumerate()
                .map(|(i, w)| f(i, w))
                .collect::<Vec<R>>()
        };
        return match pool {
            Some(pool) => pool.install(job),
            None => job(),
        };
    }
    let _ = workers;
    sequential(items, f)
}

fn sequential<W, R, F>(items: Vec<W>, f: F) -> Vec<R>
where
    F: Fn(usize, W) -> R,
{
    items
        .into_iter()
        .enumerate()
        .map(|(i, w)| f(i, w))
        .collect()
}
