//! Timed benchmarks, sweeps, crossover search and traffic reports, all
//! serialized as CSV.
//!
//! Timing protocol: conversion of the sparse operand into the kernel's input
//! format (allocation included) is timed once per matrix as the extra
//! overhead (EO). The kernel call, including allocation of the output, is
//! run `warmup` times untimed and then `repetitions` times; the kernel time
//! (KC) is the median of those runs.

mod crossover;
mod report;
mod runner;

pub use crossover::{crossover_search, first_crossover, CrossoverPoint, CrossoverReport};
pub use report::{read_traffic_csv, traffic_report, write_traffic_csv, TrafficRow};
pub use runner::{
    effective_gflops, effective_gflops_rect, median, read_bench_csv, run_benchmark, sweep,
    write_bench_csv, BenchOptions, BenchResult, Kernel, MatrixSource, SweepSummary,
    DENSE_SEED_OFFSET,
};
