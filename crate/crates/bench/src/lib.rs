//! Criterion benchmarks for jumploci-core live under `benches/`.
