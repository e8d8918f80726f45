//! Functors between controlled categories: the group-ring equivalence,
//! orbit decomposition, descent along covers, induction from subgroups,
//! the coset bijection used for normal subgroups, and net rearrangement.

mod descent;
mod group_ring;
mod induction;
mod nets;
mod orbit;
mod vset;

use thiserror::Error;

pub use descent::{
    deck_action, descend, descend_module, descent_faithfulness_check, faithfulness_threshold, lift_module, Descent, FaithfulnessVerdict,
};
pub use group_ring::{controlled_to_group_ring, equivariant_hom_rank, group_ring_to_controlled, orbit_module, GroupRingMorphism};
pub use induction::{CosetModule, CosetMorphism, CosetOrbitSpec, Induction, InductionReport};
pub use nets::{net_rearrange, LevelBound, NetRearrangement};
pub use orbit::{orbit_decompose, OrbitDecomposition};
pub use vset::{VSetBijection, VSetReport};

use crate::covers::CoverError;
use crate::groups::GroupError;
use crate::metric::{MetricError, NetViolation};
use crate::modules::ModuleError;

#[derive(Debug, Error)]
pub enum FunctorError {
    #[error("module is not a single orbit in orbit form")]
    NotOrbitForm,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("invalid section: {0}")]
    InvalidSection(String),
    #[error("cover has no complete deck action")]
    MissingDeck,
    #[error("module does not live over the cover's total space with its deck action")]
    WrongSpace,
    #[error("net at level {level} is not maximal: {violation:?}")]
    NetNotMaximal { level: usize, violation: NetViolation },
    #[error("net radii must not increase with the level")]
    DeltaNotDecreasing,
    #[error("precondition: {0}")]
    Precondition(String),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Metric(#[from] MetricError),
}
