//! The `sbp` command-line front end: JSON input, the built-in example
//! corpus and report rendering on top of `sbp-core`.

pub mod app;
pub mod corpus;
pub mod report;

pub use app::{run, Invocation, EXIT_FAIL, EXIT_INPUT, EXIT_PASS};
