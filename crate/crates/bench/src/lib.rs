//! Criterion benchmarks for the hot paths of `qloop-core`; see `benches/`.
