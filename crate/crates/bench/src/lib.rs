//! Criterion benchmarks for `powerfree-core`; see `benches/core.rs`.
