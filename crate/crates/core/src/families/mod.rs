//! The explicit parametrized families: the hyperelliptic locus map, the Z/5 and Z/3
//! line families, and the determinantal system for the second scroll.

mod certificate;
pub mod hyp;
pub mod para_v2;
pub mod z3;
pub mod z5;

pub use certificate::{Certificate, Check};

use thiserror::Error;

use crate::field::FieldError;
use crate::geometry::GeometryError;
use crate::poly::PolyError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("parameters lie in the base locus (vanishing factors: {0:?})")]
    BaseLocus(Vec<String>),
    #[error("expected {expected} parameters, got {got}")]
    ParamCount { expected: usize, got: usize },
    #[error("the two Stiefel rows are dependent at these parameters")]
    DegenerateRows,
    #[error("torsion spaces must be distinct")]
    SameSpace,
    #[error("restricted polarization B{index} is not a single bilinear monomial: {text}")]
    NotMonomial { index: usize, text: String },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

pub type FamilyResult<T> = Result<T, FamilyError>;
