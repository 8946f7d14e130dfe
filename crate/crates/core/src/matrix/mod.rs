//! Dense and sparse matrix containers and the conversions between them.

mod coo;
mod csr;
mod dense;
mod footprint;
mod gcoo;

pub use coo::{dense_to_coo, CooMatrix};
pub use csr::{csr_to_dense, dense_to_csr, CsrMatrix};
pub use dense::{sparsity, DenseMatrix};
pub use footprint::{storage_footprint, StorageFootprint, StorageFormat};
pub use gcoo::{dense_to_gcoo, gcoo_to_dense, num_groups, GcooMatrix, Group};

#[cfg(test)]
pub(crate) mod tests {
    use super::DenseMatrix;
    use crate::scalar::Scalar;

    /// The 4x4 worked example used throughout the unit tests.
    pub(crate) fn example_matrix<T: Scalar>() -> DenseMatrix<T> {
        let rows = [
            [7.0, 0.0, 0.0, 8.0],
            [0.0, 10.0, 0.0, 0.0],
            [9.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 6.0, 3.0],
        ];
        DenseMatrix::from_fn(4, 4, |i, j| T::from_f64(rows[i][j])).unwrap()
    }
}
