use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{CoeffMatrix, GeometricModule, ModuleError};
use crate::metric::Dist;

/// Maximal displacement of a morphism in the space and level directions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Propagation {
    pub space: Dist,
    pub levels: u32,
}

impl Propagation {
    /// Componentwise `<=`.
    pub fn within(&self, other: &Propagation) -> bool {
        self.space <= other.space && self.levels <= other.levels
    }

    pub fn sum(&self, other: &Propagation) -> Propagation {
        Propagation {
            space: self.space + other.space,
            levels: self.levels + other.levels,
        }
    }

    pub fn max(&self, other: &Propagation) -> Propagation {
        Propagation {
            space: self.space.max(other.space),
            levels: self.levels.max(other.levels),
        }
    }
}

impl std::fmt::Display for Propagation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(space {}, levels {})", self.space, self.levels)
    }
}

fn same_object(a: &Arc<GeometricModule>, b: &Arc<GeometricModule>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A sparse equivariant matrix of coefficient maps `φ^s_{s'}: M(s) → M'(s')`.
///
/// Keys are `(s, s')` with `s` in the source and `s'` in the target; only
/// nonzero entries are stored.
#[derive(Clone, Debug)]
pub struct ControlledMorphism {
    source: Arc<GeometricModule>,
    target: Arc<GeometricModule>,
    entries: BTreeMap<(u32, u32), CoeffMatrix>,
    propagation: Propagation,
}

impl PartialEq for ControlledMorphism {
    fn eq(&self, other: &Self) -> bool {
        same_object(&self.source, &other.source) && same_object(&self.target, &other.target) && self.entries == other.entries
    }
}

impl Eq for ControlledMorphism {}

impl ControlledMorphism {
    /// Checks shapes, equivariance and concentration, and computes the
    /// propagation. Zero matrices are dropped.
    pub fn new(
        source: Arc<GeometricModule>,
        target: Arc<GeometricModule>,
        entries: impl IntoIterator<Item = ((usize, usize), CoeffMatrix)>,
    ) -> Result<Self, ModuleError> {
        if !source.same_category(&target) {
            return Err(ModuleError::Incompatible);
        }
        let mut map = BTreeMap::new();
        for ((s, t), m) in entries {
            Self::check_entry(&source, &target, s, t, &m)?;
            if map.insert((s as u32, t as u32), m).is_some() {
                return Err(ModuleError::DuplicateEntry(s, t));
            }
        }
        map.retain(|_, m| !m.is_zero());
        let phi = Self::assemble(source, target, map);
        phi.check_equivariant()?;
        phi.check_concentrated()?;
        Ok(phi)
    }

    /// Extends the given entries over their group orbits:
    /// `φ^{gs}_{gs'} = φ^s_{s'}`. Conflicting values are rejected.
    pub fn equivariant_from(
        source: Arc<GeometricModule>,
        target: Arc<GeometricModule>,
        generators: impl IntoIterator<Item = ((usize, usize), CoeffMatrix)>,
    ) -> Result<Self, ModuleError> {
        if !source.same_category(&target) {
            return Err(ModuleError::Incompatible);
        }
        let mut map: BTreeMap<(u32, u32), CoeffMatrix> = BTreeMap::new();
        for ((s, t), m) in generators {
            Self::check_entry(&source, &target, s, t, &m)?;
            if m.is_zero() {
                continue;
            }
            for g in source.group_elements() {
                let key = (source.act(g, s) as u32, target.act(g, t) as u32);
                match map.get(&key) {
                    Some(old) if *old != m => return Err(ModuleError::NotEquivariant { what: "entries", g, s }),
                    Some(_) => {}
                    None => {
                        map.insert(key, m.clone());
                    }
                }
            }
        }
        let phi = Self::assemble(source, target, map);
        phi.check_concentrated()?;
        Ok(phi)
    }

    pub fn zero(source: Arc<GeometricModule>, target: Arc<GeometricModule>) -> Result<Self, ModuleError> {
        Self::new(source, target, [])
    }

    pub fn identity(module: Arc<GeometricModule>) -> Self {
        let entries = (0..module.len())
            .filter(|&s| module.rank(s) > 0)
            .map(|s| ((s as u32, s as u32), CoeffMatrix::identity(module.rank(s))))
            .collect();
        Self::assemble(module.clone(), module, entries)
    }

    pub(crate) fn zero_endo(module: &GeometricModule) -> Self {
        let m = Arc::new(module.clone());
        Self::assemble(m.clone(), m, BTreeMap::new())
    }

    fn check_entry(source: &GeometricModule, target: &GeometricModule, s: usize, t: usize, m: &CoeffMatrix) -> Result<(), ModuleError> {
        if s >= source.len() {
            return Err(ModuleError::OutOfRange(s));
        }
        if t >= target.len() {
            return Err(ModuleError::OutOfRange(t));
        }
        if (m.rows(), m.cols()) != (target.rank(t), source.rank(s)) {
            return Err(ModuleError::Shape {
                expected: (target.rank(t), source.rank(s)),
                found: (m.rows(), m.cols()),
            });
        }
        Ok(())
    }

    /// Builds without checks; entries must be nonzero and well shaped.
    pub(crate) fn assemble(source: Arc<GeometricModule>, target: Arc<GeometricModule>, entries: BTreeMap<(u32, u32), CoeffMatrix>) -> Self {
        let space = source.space().clone();
        let propagation = entries
            .keys()
            .map(|&(s, t)| {
                let (s, t) = (s as usize, t as usize);
                Propagation {
                    space: space.dist(source.point(s), target.point(t)),
                    levels: source.level(s).abs_diff(target.level(t)),
                }
            })
            .fold(Propagation::default(), |a, b| a.max(&b));
        Self {
            source,
            target,
            entries,
            propagation,
        }
    }

    fn check_equivariant(&self) -> Result<(), ModuleError> {
        for (&(s, t), m) in &self.entries {
            for g in 1..self.source.group_order() {
                let key = (self.source.act(g, s as usize) as u32, self.target.act(g, t as usize) as u32);
                if self.entries.get(&key) != Some(m) {
                    return Err(ModuleError::NotEquivariant {
                        what: "entries",
                        g,
                        s: s as usize,
                    });
                }
            }
        }
        Ok(())
    }

    fn check_concentrated(&self) -> Result<(), ModuleError> {
        if !(self.source.decoration().concentrated && self.target.decoration().concentrated) {
            return Ok(());
        }
        match self
            .entries
            .keys()
            .find(|&&(s, t)| self.source.point(s as usize) != self.target.point(t as usize))
        {
            Some(&(s, t)) => Err(ModuleError::NotConcentrated {
                source_index: s as usize,
                target: t as usize,
            }),
            None => Ok(()),
        }
    }

    pub fn source(&self) -> &Arc<GeometricModule> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GeometricModule> {
        &self.target
    }

    pub fn entries(&self) -> &BTreeMap<(u32, u32), CoeffMatrix> {
        &self.entries
    }

    pub fn entry(&self, s: usize, t: usize) -> Option<&CoeffMatrix> {
        self.entries.get(&(s as u32, t as u32))
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// `(α_X, α_N)`, the maxima over nonzero entries; zero for the zero
    /// morphism.
    pub fn propagation(&self) -> Propagation {
        self.propagation
    }

    /// Whether every nonzero entry moves strictly less than `eps` in both
    /// directions.
    pub fn is_controlled(&self, eps: Dist) -> bool {
        self.is_zero() || (self.propagation.space < eps && Dist::from_integer(self.propagation.levels as i64) < eps)
    }

    /// The composite `self ∘ other`, with `other` applied first.
    /// Parallel over target indices.
    pub fn compose(&self, other: &ControlledMorphism) -> Result<ControlledMorphism, ModuleError> {
        if !same_object(&other.target, &self.source) {
            return Err(ModuleError::NotComposable);
        }
        let ring = self.source.ring();
        // other's entries grouped by their target, the middle index
        let mut by_middle: BTreeMap<u32, Vec<(u32, &CoeffMatrix)>> = BTreeMap::new();
        for (&(s, mid), m) in &other.entries {
            by_middle.entry(mid).or_default().push((s, m));
        }
        // self's entries grouped by final target
        let mut by_target: BTreeMap<u32, Vec<(u32, &CoeffMatrix)>> = BTreeMap::new();
        for (&(mid, t), m) in &self.entries {
            by_target.entry(t).or_default().push((mid, m));
        }
        let blocks: Vec<(u32, Vec<(u32, CoeffMatrix)>)> = by_target
            .into_par_iter()
            .map(|(t, row)| {
                let mut acc: BTreeMap<u32, CoeffMatrix> = BTreeMap::new();
                for (mid, outer) in row {
                    for &(s, inner) in by_middle.get(&mid).map(Vec::as_slice).unwrap_or(&[]) {
                        let prod = outer.compose(inner, ring)?;
                        let sum = match acc.remove(&s) {
                            Some(prev) => prev.add(&prod, ring)?,
                            None => prod,
                        };
                        acc.insert(s, sum);
                    }
                }
                Ok((t, acc.into_iter().filter(|(_, m)| !m.is_zero()).collect()))
            })
            .collect::<Result<_, ModuleError>>()?;
        let entries = blocks
            .into_iter()
            .flat_map(|(t, row)| row.into_iter().map(move |(s, m)| ((s, t), m)))
            .collect();
        Ok(Self::assemble(other.source.clone(), self.target.clone(), entries))
    }

    fn parallel_to(&self, other: &ControlledMorphism) -> Result<(), ModuleError> {
        if same_object(&self.source, &other.source) && same_object(&self.target, &other.target) {
            Ok(())
        } else {
            Err(ModuleError::NotComposable)
        }
    }

    pub fn add(&self, other: &ControlledMorphism) -> Result<ControlledMorphism, ModuleError> {
        self.parallel_to(other)?;
        let ring = self.source.ring();
        let mut entries = self.entries.clone();
        for (k, m) in &other.entries {
            let sum = match entries.remove(k) {
                Some(prev) => prev.add(m, ring)?,
                None => m.clone(),
            };
            if !sum.is_zero() {
                entries.insert(*k, sum);
            }
        }
        Ok(Self::assemble(self.source.clone(), self.target.clone(), entries))
    }

    pub fn neg(&self) -> Result<ControlledMorphism, ModuleError> {
        let ring = self.source.ring();
        let entries = self
            .entries
            .iter()
            .map(|(k, m)| Ok((*k, m.neg(ring)?)))
            .collect::<Result<BTreeMap<_, _>, ModuleError>>()?;
        Ok(Self::assemble(self.source.clone(), self.target.clone(), entries))
    }

    pub fn sub(&self, other: &ControlledMorphism) -> Result<ControlledMorphism, ModuleError> {
        self.add(&other.neg()?)
    }

    /// Same entries between different endpoints with identical indices and
    /// ranks, e.g. after relabelling levels.
    pub(crate) fn retarget(&self, source: Arc<GeometricModule>, target: Arc<GeometricModule>) -> ControlledMorphism {
        Self::assemble(source, target, self.entries.clone())
    }

    pub fn to_record(&self) -> MorphismRecord {
        MorphismRecord {
            source_len: self.source.len(),
            target_len: self.target.len(),
            propagation_space: self.propagation.space.to_string(),
            propagation_levels: self.propagation.levels,
            entries: self
                .entries
                .iter()
                .map(|(&(s, t), m)| EntryRecord {
                    source: s,
                    target: t,
                    matrix: m.to_rows(),
                })
                .collect(),
        }
    }

    /// Rebuilds from a record between the given modules. The stored
    /// propagation is recomputed, not trusted.
    pub fn from_record(source: Arc<GeometricModule>, target: Arc<GeometricModule>, record: &MorphismRecord) -> Result<Self, ModuleError> {
        if record.source_len != source.len() || record.target_len != target.len() {
            return Err(ModuleError::Incompatible);
        }
        let ring = source.ring();
        // empty matrices have a zero-rank side and carry no data
        let entries = record
            .entries
            .iter()
            .filter(|e| !e.matrix.is_empty())
            .map(|e| Ok(((e.source as usize, e.target as usize), CoeffMatrix::from_rows(&e.matrix, ring)?)))
            .collect::<Result<Vec<_>, ModuleError>>()?;
        Self::new(source, target, entries)
    }
}

/// One sparse entry as a dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryRecord {
    pub source: u32,
    pub target: u32,
    pub matrix: Vec<Vec<i64>>,
}

/// Serialized morphism; entries sorted by `(source, target)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismRecord {
    pub source_len: usize,
    pub target_len: usize,
    pub propagation_space: String,
    pub propagation_levels: u32,
    pub entries: Vec<EntryRecord>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::FiniteMetricSpace;
    use crate::modules::{Decoration, OrbitSpec, Ring};

    fn int(n: i64) -> Dist {
        Dist::from_integer(n)
    }

    fn one() -> CoeffMatrix {
        CoeffMatrix::identity(1)
    }

    fn path_module(levels: Vec<u32>) -> Arc<GeometricModule> {
        let n = levels.len();
        let space = Arc::new(FiniteMetricSpace::path(n));
        Arc::new(GeometricModule::plain(space, (0..n as u32).collect(), levels, vec![1; n], Ring::Integers).unwrap())
    }

    /// `s -> s + 1` on a path module.
    fn step(m: &Arc<GeometricModule>) -> ControlledMorphism {
        let entries = (0..m.len() - 1).map(|s| ((s, s + 1), one()));
        ControlledMorphism::new(m.clone(), m.clone(), entries).unwrap()
    }

    #[test]
    fn identity_composition() {
        let m = path_module(vec![0, 0, 0]);
        let id = ControlledMorphism::identity(m.clone());
        assert_eq!(id.propagation(), Propagation::default());
        let phi = step(&m);
        assert_eq!(phi.compose(&id).unwrap(), phi);
        assert_eq!(id.compose(&phi).unwrap(), phi);
    }

    #[test]
    fn two_steps_on_a_path() {
        let m = path_module(vec![0, 0, 0]);
        let phi = step(&m);
        let twice = phi.compose(&phi).unwrap();
        assert_eq!(twice.propagation().space, int(2));
        assert_eq!(twice.entries().keys().copied().collect::<Vec<_>>(), vec![(0, 2)]);
    }

    #[test]
    fn cancelling_composite_is_zero() {
        let space = Arc::new(FiniteMetricSpace::path(2));
        let a = Arc::new(GeometricModule::plain(space.clone(), vec![0], vec![0], vec![1], Ring::Integers).unwrap());
        let b = Arc::new(GeometricModule::plain(space.clone(), vec![1], vec![0], vec![2], Ring::Integers).unwrap());
        let col = CoeffMatrix::from_rows(&[vec![1], vec![-1]], Ring::Integers).unwrap();
        let row = CoeffMatrix::from_rows(&[vec![1, 1]], Ring::Integers).unwrap();
        let psi = ControlledMorphism::new(a.clone(), b.clone(), [((0, 0), col)]).unwrap();
        let phi = ControlledMorphism::new(b, a, [((0, 0), row)]).unwrap();
        let c = phi.compose(&psi).unwrap();
        assert!(c.is_zero());
        assert_eq!(c.propagation(), Propagation::default());
    }

    #[test]
    fn single_entry_readout() {
        let space = Arc::new(FiniteMetricSpace::path(4));
        let src = Arc::new(GeometricModule::plain(space.clone(), vec![0], vec![2], vec![1], Ring::Integers).unwrap());
        let dst = Arc::new(GeometricModule::plain(space, vec![3], vec![5], vec![1], Ring::Integers).unwrap());
        let phi = ControlledMorphism::new(src, dst, [((0, 0), one())]).unwrap();
        assert_eq!(phi.propagation(), Propagation { space: int(3), levels: 3 });
        assert!(phi.is_controlled(int(4)));
        assert!(!phi.is_controlled(int(3)));
    }

    #[test]
    fn equivariant_adjacency_on_a_cycle() {
        let space = FiniteMetricSpace::cycle(6);
        let action = space.action().unwrap().clone();
        let m = Arc::new(
            GeometricModule::from_orbits(
                Arc::new(space),
                action,
                &[OrbitSpec {
                    point: 0,
                    level: 0,
                    rank: 1,
                }],
                Ring::Integers,
                Decoration::default(),
            )
            .unwrap(),
        );
        let phi = ControlledMorphism::equivariant_from(m.clone(), m.clone(), [((0, 1), one())]).unwrap();
        assert_eq!(phi.nonzero_count(), 6);
        assert_eq!(phi.propagation(), Propagation { space: int(1), levels: 0 });
        // a single non-orbit entry is not equivariant
        assert!(ControlledMorphism::new(m.clone(), m, [((0, 1), one())]).is_err());
    }

    #[test]
    fn shapes_and_duplicates() {
        let m = path_module(vec![0, 0]);
        let bad = CoeffMatrix::zeros(2, 1);
        assert!(matches!(
            ControlledMorphism::new(m.clone(), m.clone(), [((0, 1), bad)]),
            Err(ModuleError::Shape { .. })
        ));
        assert!(matches!(
            ControlledMorphism::new(m.clone(), m, [((0, 1), one()), ((0, 1), one())]),
            Err(ModuleError::DuplicateEntry(0, 1))
        ));
    }

    #[test]
    fn addition_and_subtraction() {
        let m = path_module(vec![0, 1, 2]);
        let phi = step(&m);
        let id = ControlledMorphism::identity(m.clone());
        let sum = phi.add(&id).unwrap();
        assert_eq!(sum.nonzero_count(), 5);
        assert_eq!(sum.sub(&phi).unwrap(), id);
        assert!(phi.sub(&phi).unwrap().is_zero());
    }

    #[test]
    fn record_round_trip() {
        let m = path_module(vec![0, 3]);
        let phi = step(&m);
        let json = serde_json::to_string(&phi.to_record()).unwrap();
        let back = ControlledMorphism::from_record(m.clone(), m, &serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back, phi);
    }
}
