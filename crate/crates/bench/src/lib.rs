//! Criterion benchmarks for invpit live under `benches/`.
