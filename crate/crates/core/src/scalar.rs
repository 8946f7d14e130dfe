use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::ops::AddAssign;
use std::str::FromStr;

use num_traits::Float;

/// Element type of every matrix in the crate.
///
/// Implemented for `f32` (the single-precision configuration used by the
/// benchmarks) and `f64` (used by the high-precision oracle tests). Kernels
/// accumulate in `Self`; [`crate::kernels::gemm_oracle`] always accumulates
/// in `f64`.
pub trait Scalar:
    Float + AddAssign + Sum + Default + Debug + Display + LowerExp + FromStr + Send + Sync + 'static
{
    /// Short name used on the command line and in CSV output.
    const NAME: &'static str;
    /// Size in bytes of one element.
    const BYTES: usize;
    /// Maximum relative error tolerated when comparing a kernel against the
    /// oracle.
    const ORACLE_TOLERANCE: f64;

    fn from_f64(v: f64) -> Self;
    fn as_f64(self) -> f64;
    /// Raw bit pattern widened to 64 bits, for bitwise comparisons.
    fn bits(self) -> u64;
}

impl Scalar for f32 {
    const NAME: &'static str = "f32";
    const BYTES: usize = 4;
    const ORACLE_TOLERANCE: f64 = 1e-5;

    #[inline]
    fn from_f64(v: f64) -> Self {
        v as f32
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self as f64
    }

    #[inline]
    fn bits(self) -> u64 {
        self.to_bits() as u64
    }
}

impl Scalar for f64 {
    const NAME: &'static str = "f64";
    const BYTES: usize = 8;
    const ORACLE_TOLERANCE: f64 = 1e-12;

    #[inline]
    fn from_f64(v: f64) -> Self {
        v
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self
    }

    #[inline]
    fn bits(self) -> u64 {
        self.to_bits()
    }
}
