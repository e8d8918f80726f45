//! Seeded verification suites. Each returns a [`SuiteReport`] listing its
//! checks with case and failure counts; the command-line tool serializes
//! these and the acceptance target reads them.

mod algebra;
mod geometry;

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

pub use algebra::{
    descent_suite, group_ring_suite, induction_suite, modules_suite, nets_suite, vset_suite, GroupRingBudget, ModulesSuiteSize,
};
pub use geometry::{covers_suite, expanders_suite, rips_suite, TowerGroup, TowerSpec};

use crate::covers::CoverError;
use crate::expanders::ExpanderError;
use crate::functors::FunctorError;
use crate::groups::{FiniteGroup, GroupError};
use crate::metric::MetricError;
use crate::modules::ModuleError;
use crate::rips::RipsError;

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("unknown group {0:?}")]
    UnknownGroup(String),
    #[error("unknown demo {0:?}")]
    UnknownDemo(String),
    #[error("invalid parameters: {0}")]
    Invalid(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Rips(#[from] RipsError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Functor(#[from] FunctorError),
    #[error(transparent)]
    Expander(#[from] ExpanderError),
}

/// One named property with how often it was exercised.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub check: String,
    pub passed: bool,
    pub cases: usize,
    pub failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn tally(check: impl Into<String>, cases: usize, failures: usize) -> Self {
        Self {
            check: check.into(),
            passed: failures == 0,
            cases,
            failures,
            note: None,
        }
    }

    pub fn flag(check: impl Into<String>, passed: bool) -> Self {
        Self::tally(check, 1, usize::from(!passed))
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Counts cases and failures of one property.
#[derive(Debug, Default)]
pub(crate) struct Tally {
    cases: usize,
    failures: usize,
}

impl Tally {
    pub(crate) fn record(&mut self, ok: bool) {
        self.cases += 1;
        self.failures += usize::from(!ok);
    }

    pub(crate) fn check(&self, name: &str) -> Check {
        Check::tally(name, self.cases, self.failures)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub data: serde_json::Value,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>, checks: Vec<Check>, data: serde_json::Value) -> Self {
        Self {
            suite: suite.into(),
            passed: checks.iter().all(|c| c.passed),
            checks,
            data,
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.check == name)
    }
}

/// Finite groups by name: `Z<n>` or `Z/<n>`, `S<k>`, `A<k>`, `D<n>`
/// (order `2n`), and `V4`.
pub fn named_group(name: &str) -> Result<Arc<FiniteGroup>, SuiteError> {
    let unknown = || SuiteError::UnknownGroup(name.to_string());
    let upper = name.trim().to_ascii_uppercase();
    let (head, tail) = upper.split_at(upper.find(|c: char| c.is_ascii_digit()).ok_or_else(unknown)?);
    let n: usize = tail.parse().map_err(|_| unknown())?;
    let group = match (head, n) {
        ("Z" | "Z/" | "C", 1..=10_000) => FiniteGroup::cyclic(n),
        ("S", 1..=6) => FiniteGroup::symmetric(n),
        ("A", 3..=6) => FiniteGroup::alternating(n),
        ("D", 3..=500) => FiniteGroup::dihedral(n),
        ("V", 4) => FiniteGroup::from_permutations("V4", 4, &[vec![1, 0, 3, 2], vec![2, 3, 0, 1]])?,
        _ => return Err(unknown()),
    };
    Ok(Arc::new(group))
}

/// Seeds derived per sub-suite so that adding one suite does not shift
/// the random stream of another.
pub(crate) fn sub_seed(seed: u64, salt: &str) -> u64 {
    salt.bytes()
        .fold(seed ^ 0x9e37_79b9_7f4a_7c15, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}
