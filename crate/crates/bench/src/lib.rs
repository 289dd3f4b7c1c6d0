//! Criterion benchmarks for the subdivision, counting, synthesis and
//! isomorphism stages; see `benches/pipeline.rs`.
