//! Benchmark crate; see benches/homology.rs.
