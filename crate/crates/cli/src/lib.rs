//! Shared pieces of the command-line front end: rendering, the result cache,
//! and the golden verification suite.

pub mod cache;
pub mod checks;
pub mod render;
