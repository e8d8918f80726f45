//! Finite controlled categories of geometric modules: objects `(S, π, M)`
//! over a metric space with an extra level coordinate, sparse equivariant
//! morphisms with propagation tracking, decoration checks, Karoubi
//! factorizations, quotient equality and shift functors.
//!
//! Coefficients are free modules over `Z` or `Z/m`; the group acts on them
//! trivially.

mod coeff;
mod decoration;
mod karoubi;
mod module;
mod morphism;
mod quotient;
mod shift;

use thiserror::Error;

pub use coeff::{CoeffMatrix, Ring};
pub use decoration::{check_decoration, check_module_decoration, epsilon_grid, DecorationReport, PropertyCheck, Witness};
pub use karoubi::{karoubi_factorize, FactorMode, Factorization};
pub use module::{Decoration, GeometricModule, IndexLayout, Letter, ModuleRecord, OrbitSpec, Support, DEFAULT_LEVEL_WINDOW};
pub use morphism::{ControlledMorphism, EntryRecord, MorphismRecord, Propagation};
pub use quotient::{quotient_equal, QuotientVerdict, Subcategory};
pub use shift::{shift_module, shift_morphism};

use crate::groups::GroupError;

#[derive(Debug, Error)]
pub enum ModuleError {
    #[error("matrix shape mismatch: expected {expected:?}, found {found:?}")]
    Shape { expected: (usize, usize), found: (usize, usize) },
    #[error("integer coefficient overflow")]
    Overflow,
    #[error("action on the index set is invalid: {0}")]
    InvalidAction(String),
    #[error("group element {g} fixes index {s}")]
    NotFree { g: usize, s: usize },
    #[error("index {s} violates equivariance of {what} under element {g}")]
    NotEquivariant { what: &'static str, g: usize, s: usize },
    #[error("level {level} exceeds the window {window}")]
    LevelOutOfWindow { level: u64, window: u32 },
    #[error("decoration violated at index {s}: {reason}")]
    Decoration { s: usize, reason: String },
    #[error("index {0} out of range")]
    OutOfRange(usize),
    #[error("modules are not over the same space, group and ring")]
    Incompatible,
    #[error("morphisms are not composable or not parallel")]
    NotComposable,
    #[error("entry ({0}, {1}) given twice")]
    DuplicateEntry(usize, usize),
    #[error("morphism entry ({source_index}, {target}) is nonzero between different points of a concentrated pair")]
    NotConcentrated { source_index: usize, target: usize },
    #[error("subset is not invariant under the group action")]
    NotInvariant,
    #[error("precondition missing: {0}")]
    Precondition(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}
