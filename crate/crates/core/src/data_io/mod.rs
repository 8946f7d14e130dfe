//! MatrixMarket I/O, seeded generators and dataset selection.

mod dataset;
mod generate;
mod market;

pub use dataset::{
    filter_dataset, full_sweep_grid, generated_name, read_manifest, scan_dataset,
    write_generated_suite, DatasetRules, ManifestEntry, MatrixRecord, RecordSource, SweepGrid,
};
pub use generate::{
    generate_dense_operand, generate_uniform_coo, generate_uniform_pattern,
    generate_uniform_sparse, nonzero_count,
};
pub use market::{
    parse_matrix_market, read_matrix_market, write_coo_market, write_dense_market,
    write_matrix_market, MarketMatrix,
};
