//! Grouped-COO (GCOO) sparse storage and sparse x dense matrix
//! multiplication on a tile-parallel worker pool.
//!
//! The crate provides:
//!
//! - [`matrix`]: dense, COO, CSR and GCOO containers and conversions;
//! - [`kernels`]: an `f64` reference product, a blocked dense baseline, CSR
//!   and COO baselines, and the GCOO kernel with dense-operand reuse;
//! - [`traffic`]: a transaction-counting memory model and the roofline bound;
//! - [`data_io`]: MatrixMarket files, seeded generators, dataset filters;
//! - [`bench`]: timing, sweeps and CSV reports.
//!
//! ```
//! use gcoo::exec::ExecConfig;
//! use gcoo::kernels::spdm_gcoo;
//! use gcoo::matrix::{DenseMatrix, GcooMatrix};
//!
//! let a = DenseMatrix::<f32>::from_rows(&[[7.0, 0.0], [0.0, 10.0]]).unwrap();
//! let g = GcooMatrix::from_dense(&a, 2).unwrap();
//! let b = DenseMatrix::identity(2).unwrap();
//! let (c, stats) = spdm_gcoo(&g, &b, &ExecConfig::new(2, 2, 1).unwrap()).unwrap();
//! assert_eq!(c, a);
//! assert_eq!(stats.flops, 8);
//! ```

pub mod bench;
pub mod data_io;
mod error;
pub mod exec;
pub mod kernels;
pub mod matrix;
mod scalar;
pub mod traffic;

pub use error::{Error, Result};
pub use scalar::Scalar;
