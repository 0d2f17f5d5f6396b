pub mod algebra;
pub mod equivalence;
pub mod error;
pub mod exec;
pub mod json;
pub mod pseudoaction;
pub mod report;
pub mod search;
pub mod semibiproduct;

pub use error::{Error, Result};
pub use exec::Execution;
pub use report::{LawFailure, ValidationReport};
