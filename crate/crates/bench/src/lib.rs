//! Criterion benchmarks for `erlangc-core`; see `benches/`.
