//! Criterion benchmarks for curveter-core; see `benches/`.
