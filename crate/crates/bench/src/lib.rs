//! Criterion benchmarks for `anyonchain`; see `benches/`.
