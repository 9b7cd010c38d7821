//! Criterion benchmarks for `satdef-core`; see `benches/kernels.rs`.
