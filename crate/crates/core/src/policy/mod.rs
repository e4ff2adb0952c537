//! Access policies: formula parsing, LSSS matrices, reconstruction
//! coefficients and the vanishing polynomial over a signing set.

mod attributes;
mod formula;
mod lsss;
mod vanishing;

pub use attributes::AttributeSet;
pub use formula::Formula;
pub use lsss::{policy_to_lsss, reconstruction_coefficients, AccessStructure};
pub use vanishing::VanishingCoefficients;

use thiserror::Error;

use crate::algebra::AlgebraError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolicyError {
    #[error("empty policy formula")]
    EmptyFormula,
    #[error("unsupported policy construct: {0}")]
    Unsupported(&'static str),
    #[error("policy parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid access structure: {0}")]
    InvalidStructure(String),
    #[error("the default attribute is reserved")]
    ReservedAttribute,
    #[error("attribute set of size {size} exceeds capacity {max}")]
    Capacity { size: usize, max: usize },
    #[error(transparent)]
    Encoding(#[from] AlgebraError),
}
