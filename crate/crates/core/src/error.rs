use thiserror::Error;

use crate::fincat::{MorId, ObjId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("category is not direct: {0}")]
    NotDirect(String),
    #[error("functor is not fully faithful: {0}")]
    NotFullyFaithful(String),
    #[error("functor is invalid: {0}")]
    InvalidFunctor(String),
    #[error("simplicial set is not 1-skeletal: simplex {index} of dimension {dim} is nondegenerate")]
    NotOneSkeletal { dim: usize, index: usize },
    #[error("map is not a cofibration (degree {degree} is not injective)")]
    NotCofibration { degree: i32 },
    #[error("diagram is not Reedy cofibrant at object {0}")]
    NotReedyCofibrant(ObjId),
    #[error("map is not a weak equivalence: {0}")]
    NotWeakEquivalence(String),
    #[error("diagram is not homotopical: morphism {0} is a weak equivalence sent to a non-quasi-isomorphism")]
    NotHomotopical(MorId),
    #[error("caps differ: {0} vs {1}")]
    CapMismatch(usize, usize),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("postcondition violated: {0}")]
    Postcondition(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
