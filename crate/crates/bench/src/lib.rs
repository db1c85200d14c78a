//! Criterion benchmarks for `boij-core` live in `benches/`.

pub use boij_core;
