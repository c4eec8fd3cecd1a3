//! Criterion benchmarks for `irsi-core` live under `benches/`.
