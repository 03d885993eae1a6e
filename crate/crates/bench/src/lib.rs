//! Criterion benchmarks for the `cliffpair` kernels. Run with `cargo bench -p cliffpair-bench`.
