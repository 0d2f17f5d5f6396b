use thiserror::Error;

use crate::report::ValidationReport;

/// Errors raised by the engine.
///
/// Axiom failures are never errors: they are reported through the various
/// report types. An `Error` means the input did not have the shape an
/// operation needs, or a checked precondition did not hold.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid monoid `{name}`: {report}")]
    InvalidMonoid { name: String, report: ValidationReport },

    #[error("structural error: {0}")]
    Structural(String),

    #[error("map `{0}` is not a homomorphism: {1}")]
    NotHomomorphism(String, String),

    #[error("map `{0}` does not preserve the identity")]
    NotPointed(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("partition is not a congruence: {0}")]
    NotCongruence(String),

    #[error("invalid relation seed: {0}")]
    InvalidSeed(String),

    #[error("size budget exceeded: {0}")]
    Budget(String),

    #[error("unknown element `{element}` in `{monoid}`")]
    UnknownElement { monoid: String, element: String },

    #[error("unknown monoid `{0}`")]
    UnknownMonoid(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
