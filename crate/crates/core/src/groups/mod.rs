//! Finitely generated groups by concrete arithmetic, residually finite
//! quotient towers, and small finite groups given by Cayley tables.

mod action;
mod element;
mod fingen;
mod finite;
mod tower;

pub use action::GroupAction;
pub use element::{GroupElement, SquareMatrix};
pub use fingen::{reduce_mod, FinGenGroup, GroupKind};
pub use finite::{Cosets, FiniteGroup, Subgroup};
pub use tower::{EnumeratedGroup, KernelGirth, QuotientStage, QuotientTower};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("matrix shape mismatch: expected {expected} entries, found {found}")]
    Shape { expected: usize, found: usize },
    #[error("integer overflow in group arithmetic")]
    Overflow,
    #[error("element is not invertible: {0}")]
    NotInvertible(String),
    #[error("element {element} does not belong to a {kind} group")]
    KindMismatch { kind: &'static str, element: String },
    #[error("invalid modulus {0}")]
    InvalidModulus(u64),
    #[error("matrix is not unimodular (determinant {0})")]
    NotUnimodular(i128),
    #[error("word letter {0} is out of range")]
    BadLetter(i32),
    #[error("quotient has more than {0} elements")]
    OrderCapExceeded(usize),
    #[error("unsupported quotient stage: {0}")]
    UnsupportedStage(String),
    #[error("tower has no stage {0}")]
    NoSuchStage(usize),
    #[error("stage {0} quotient map is not a homomorphism on generator products")]
    NotHomomorphism(usize),
    #[error("stage {0} does not refine the previous stage")]
    NotNested(usize),
    #[error("enumerated set is not closed: {0} missing")]
    NotClosed(String),
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("invalid group action: {0}")]
    InvalidAction(String),
}
