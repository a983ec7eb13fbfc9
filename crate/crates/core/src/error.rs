use thiserror::Error;

use crate::structure::{StructureClass, Violation};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Table shape does not match the carrier, or an index is out of range.
    #[error("malformed structure: {0}")]
    Malformed(String),

    #[error("structure violates its axioms: {0}")]
    Invalid(Violation),

    #[error("class mismatch: expected {expected}, found {found}")]
    ClassMismatch {
        expected: StructureClass,
        found: StructureClass,
    },

    #[error("map is not total: expected {expected} entries, got {got}")]
    NotTotal { expected: usize, got: usize },

    #[error("map value {value} at position {position} is outside the target carrier of size {size}")]
    OutOfRange {
        position: usize,
        value: usize,
        size: usize,
    },

    #[error("subset is not meet-closed ({left} ∧ {right} missing); use generate instead")]
    NotMeetClosed { left: usize, right: usize },

    #[error("brute-force bound exceeded: {candidates} candidates > limit {limit}")]
    BoundExceeded { candidates: u128, limit: u128 },

    #[error("span invariant violated: {0}")]
    SpanInvariant(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("metric catalog needs a non-empty distance grid")]
    EmptyGrid,

    #[error("carrier ceiling exceeded at stage {stage}: {size} > {ceiling}")]
    CeilingExceeded {
        stage: usize,
        size: usize,
        ceiling: usize,
    },

    #[error("catalog lookup failed: {0}")]
    CatalogMiss(String),

    #[error("extension isomorphism over the base is not unique for component {component}: {first:?} and {second:?}")]
    NonUniqueIsomorphism {
        component: usize,
        first: Vec<usize>,
        second: Vec<usize>,
    },

    #[error("semigroup table is not associative: ({x}·{y})·{z} ≠ {x}·({y}·{z})")]
    NotAssociative { x: usize, y: usize, z: usize },

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
