//! Criterion benchmarks for `polya-core`; see `benches/`.
