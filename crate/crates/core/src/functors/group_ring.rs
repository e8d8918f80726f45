use std::collections::BTreeMap;
use std::sync::Arc;

use super::FunctorError;
use crate::groups::{FiniteGroup, GroupAction};
use crate::metric::FiniteMetricSpace;
use crate::modules::{CoeffMatrix, ControlledMorphism, Decoration, GeometricModule, ModuleError, OrbitSpec, Ring};

/// A group-ring element `Σ_g φ_g g` with `φ_g` a `target_rank x
/// source_rank` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRingMorphism {
    group: Arc<FiniteGroup>,
    ring: Ring,
    source_rank: usize,
    target_rank: usize,
    terms: BTreeMap<usize, CoeffMatrix>,
}

impl GroupRingMorphism {
    pub fn new(
        group: Arc<FiniteGroup>,
        ring: Ring,
        source_rank: usize,
        target_rank: usize,
        terms: impl IntoIterator<Item = (usize, CoeffMatrix)>,
    ) -> Result<Self, FunctorError> {
        let mut map = BTreeMap::new();
        for (g, m) in terms {
            if g >= group.order() {
                return Err(ModuleError::OutOfRange(g).into());
            }
            if (m.rows(), m.cols()) != (target_rank, source_rank) {
                return Err(ModuleError::Shape {
                    expected: (target_rank, source_rank),
                    found: (m.rows(), m.cols()),
                }
                .into());
            }
            if map.insert(g, m).is_some() {
                return Err(ModuleError::DuplicateEntry(g, g).into());
            }
        }
        map.retain(|_, m| !m.is_zero());
        Ok(Self {
            group,
            ring,
            source_rank,
            target_rank,
            terms: map,
        })
    }

    pub fn identity(group: Arc<FiniteGroup>, ring: Ring, rank: usize) -> Self {
        let terms = if rank > 0 {
            BTreeMap::from([(0, CoeffMatrix::identity(rank))])
        } else {
            BTreeMap::new()
        };
        Self {
            group,
            ring,
            source_rank: rank,
            target_rank: rank,
            terms,
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn source_rank(&self) -> usize {
        self.source_rank
    }

    pub fn target_rank(&self) -> usize {
        self.target_rank
    }

    pub fn terms(&self) -> &BTreeMap<usize, CoeffMatrix> {
        &self.terms
    }

    pub fn add(&self, other: &Self) -> Result<Self, FunctorError> {
        if (self.source_rank, self.target_rank) != (other.source_rank, other.target_rank) {
            return Err(ModuleError::NotComposable.into());
        }
        let mut terms = self.terms.clone();
        for (&g, m) in &other.terms {
            let sum = match terms.remove(&g) {
                Some(prev) => prev.add(m, self.ring)?,
                None => m.clone(),
            };
            terms.insert(g, sum);
        }
        Self::new(self.group.clone(), self.ring, self.source_rank, self.target_rank, terms)
    }

    /// Product `self · other` (apply `other` first):
    /// `(φψ)_k = Σ_{gh = k} φ_g ψ_h`, coefficients carrying the trivial action.
    pub fn convolve(&self, other: &Self) -> Result<Self, FunctorError> {
        if other.target_rank != self.source_rank {
            return Err(ModuleError::NotComposable.into());
        }
        let mut terms: BTreeMap<usize, CoeffMatrix> = BTreeMap::new();
        for (&g, a) in &self.terms {
            for (&h, b) in &other.terms {
                let k = self.group.mul(g, h);
                let prod = a.compose(b, self.ring)?;
                let sum = match terms.remove(&k) {
                    Some(prev) => prev.add(&prod, self.ring)?,
                    None => prod,
                };
                terms.insert(k, sum);
            }
        }
        Self::new(self.group.clone(), self.ring, other.source_rank, self.target_rank, terms)
    }
}

/// The single-orbit module `(G, g ↦ g.x0, g ↦ A)` at level zero.
pub fn orbit_module(
    space: &Arc<FiniteMetricSpace>,
    action: &Arc<GroupAction>,
    basepoint: usize,
    rank: usize,
    ring: Ring,
) -> Result<GeometricModule, FunctorError> {
    let spec = OrbitSpec {
        point: basepoint as u32,
        level: 0,
        rank: rank as u32,
    };
    Ok(GeometricModule::from_orbits(
        space.clone(),
        action.clone(),
        &[spec],
        ring,
        Decoration::default(),
    )?)
}

/// The equivariant morphism with `φ^g_1 = φ_g` between orbit modules at
/// `basepoint`, i.e. entry `(s, t)` equal to `φ_{t^{-1} s}`.
pub fn group_ring_to_controlled(
    m: &GroupRingMorphism,
    space: &Arc<FiniteMetricSpace>,
    action: &Arc<GroupAction>,
    basepoint: usize,
) -> Result<ControlledMorphism, FunctorError> {
    if **action.group() != *m.group {
        return Err(FunctorError::Precondition("group ring and action use different groups".into()));
    }
    let source = Arc::new(orbit_module(space, action, basepoint, m.source_rank, m.ring)?);
    let target = if m.source_rank == m.target_rank {
        source.clone()
    } else {
        Arc::new(orbit_module(space, action, basepoint, m.target_rank, m.ring)?)
    };
    let group = &m.group;
    let mut entries = Vec::new();
    for t in group.elements() {
        for (&g, phi) in &m.terms {
            entries.push(((group.mul(t, g), t), phi.clone()));
        }
    }
    Ok(ControlledMorphism::new(source, target, entries)?)
}

/// Reads `φ_g = φ^g_1` off a morphism between single-orbit modules in
/// orbit form.
pub fn controlled_to_group_ring(phi: &ControlledMorphism) -> Result<GroupRingMorphism, FunctorError> {
    let (src, dst) = (phi.source(), phi.target());
    let n = src.group_order();
    for m in [src, dst] {
        if m.len() != n || !m.is_orbit_form() {
            return Err(FunctorError::NotOrbitForm);
        }
    }
    let terms = (0..n).filter_map(|g| phi.entry(g, 0).map(|m| (g, m.clone())));
    GroupRingMorphism::new(src.space_action().group().clone(), src.ring(), src.rank(0), dst.rank(0), terms)
}

/// Number of free coefficients of an equivariant morphism: the sum of
/// `rank(s) * rank(t)` over orbits of index pairs.
pub fn equivariant_hom_rank(source: &GeometricModule, target: &GeometricModule) -> usize {
    let pairs: usize = (0..source.len())
        .flat_map(|s| (0..target.len()).map(move |t| source.rank(s) * target.rank(t)))
        .sum();
    pairs / source.group_order()
}
