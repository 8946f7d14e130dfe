//! Matrix-multiplication kernels.
//!
//! [`gemm_oracle`] is the plain triple loop with `f64` accumulation that every
//! other kernel is checked against. The remaining kernels split the output
//! into independent tiles and run them on the worker pool described by
//! [`ExecConfig`](crate::exec::ExecConfig); each element of the output is
//! produced by exactly one tile, with a fixed accumulation order, so results
//! do not depend on the worker count.

mod coo;
mod csr;
mod dense;
mod gcoo;
mod oracle;

use std::iter::Sum;
use std::ops::{Add, AddAssign};

pub use coo::{spdm_coo, spdm_coo_with_stats};
pub use csr::spdm_csr;
pub use dense::gemm_dense_blocked;
pub use gcoo::{spdm_gcoo, spdm_gcoo_auto, spdm_gcoo_tile, Tile, TimingBreakdown};
pub use oracle::gemm_oracle;

use crate::error::{Error, Result};

/// Work and dense-operand traffic counters, at element granularity.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct KernelStats {
    /// Two per multiply-add.
    pub flops: u64,
    /// Dense-operand elements fetched from memory.
    pub b_loads_total: u64,
    /// Multiply-adds served from an already fetched dense-operand element.
    pub b_loads_reused: u64,
    /// Sparse entries copied into staging buffers.
    pub staging_fills: u64,
}

impl KernelStats {
    /// Multiply-adds performed, `flops / 2`.
    pub fn multiply_adds(&self) -> u64 {
        self.flops / 2
    }
}

impl Add for KernelStats {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self {
            flops: self.flops + rhs.flops,
            b_loads_total: self.b_loads_total + rhs.b_loads_total,
            b_loads_reused: self.b_loads_reused + rhs.b_loads_reused,
            staging_fills: self.staging_fills + rhs.staging_fills,
        }
    }
}

impl AddAssign for KernelStats {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Sum for KernelStats {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::default(), Add::add)
    }
}

fn check_inner_dims(left: (usize, usize), right: (usize, usize)) -> Result<()> {
    if left.1 != right.0 {
        return Err(Error::DimensionMismatch {
            left_rows: left.0,
            left_cols: left.1,
            right_rows: right.0,
            right_cols: right.1,
        });
    }
    Ok(())
}
