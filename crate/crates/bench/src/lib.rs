//! Benchmarks for the wronski solver live in `benches/`.
