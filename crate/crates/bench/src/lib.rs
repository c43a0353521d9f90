//! Criterion benchmarks for `jpgeom` live in `benches/`.
