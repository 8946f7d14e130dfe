//! Analytical memory-traffic model of the GCOO and row-split CSR kernels on
//! a GPU-like hierarchy, and the roofline bound.
//!
//! The model consumes only the coordinate pattern of the sparse operand.
//! Transactions move 32 consecutive elements. Two cache modes bracket the
//! real behaviour: `Cold` sends every touch to DRAM, `InfiniteL2` sends only
//! first touches there.

mod model;
mod pattern;
mod roofline;

pub use model::{
    fit_scaling_exponent, model_csr_traffic, model_gcoo_reuse, model_gcoo_traffic, model_traffic,
    operational_intensity, CacheMode, KernelModel, ReuseCounts, TrafficReport,
    TRANSACTION_ELEMENTS,
};
pub use pattern::Pattern;
pub use roofline::{roofline_throughput, RooflineModel};
