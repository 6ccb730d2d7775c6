//! Criterion benchmarks for pwcalc; see `benches/`.
