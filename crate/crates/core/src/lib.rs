//! Bigraded integral homology of torus-braid closures from the cube of
//! resolutions, with exact Smith normal forms, stabilization certification
//! for growing twist counts, and infinite-twist limits per stable q-degree.

pub mod braid;
pub mod chain;
pub mod error;
pub mod homology;
pub mod limits;
pub mod matrix;
pub mod oracle;
pub mod snf;
pub mod stabilization;

pub use braid::{
    ladder_diagram, smooth, torus_braid, BraidDiagram, BraidSpec, LadderKind, Resolution,
};
pub use chain::{
    complex, generators, grading, split_at, ComplexOptions, Generator, GradedChainComplex,
    Grading, NormContext, SignConvention,
};
pub use error::{KhError, Result};
pub use homology::{homology, homology_mod, AbelianGroup, GradedHomology};
pub use limits::{limit_homology, limit_onset, n2_closed_form, LimitResult, SpectrumDescription};
pub use stabilization::{
    c_closed_form, homology_column, ladder, onset_bound, verify_stabilization, LadderStep,
    StabilizationReport,
};
