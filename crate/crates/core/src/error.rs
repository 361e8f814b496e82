use thiserror::Error;

use crate::scalar::Field;

/// Errors raised by the exact algebra kernel and everything built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("mixed field kinds: {0} and {1}")]
    MixedFields(Field, Field),

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("cannot parse scalar {0:?}")]
    ParseScalar(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    #[error("not an algebra morphism: {0}")]
    NotAMorphism(String),

    #[error("not a group: {0}")]
    NotAGroup(String),

    #[error("functors live on different universes")]
    UniverseMismatch,

    #[error("universe closure precondition violated: {0}")]
    Closure(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("empty tower")]
    EmptyTower,

    #[error("tower map into level {level} is not surjective")]
    NotSurjective { level: usize },

    #[error("functional is not compatible with the tower map into level {level}")]
    InconsistentFunctional { level: usize },

    #[error("power series with zero constant term has no inverse")]
    NotUnit,

    #[error("functionals use different product models")]
    ModelMismatch,

    #[error("no recurrence of degree <= {bound} fits the product sequence")]
    BoundExceeded { bound: usize },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
