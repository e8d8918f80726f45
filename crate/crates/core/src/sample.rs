//! Seeded random geometric modules and morphisms for the verification
//! suites and property tests.

use std::sync::Arc;

use rand::Rng;

use crate::groups::GroupAction;
use crate::metric::{Dist, FiniteMetricSpace};
use crate::modules::{CoeffMatrix, ControlledMorphism, Decoration, GeometricModule, ModuleError, OrbitSpec, Ring, DEFAULT_LEVEL_WINDOW};

/// Size limits for sampled objects.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleShape {
    pub max_orbits: usize,
    pub max_rank: u32,
    pub max_level: u32,
    /// Coefficients are drawn from `[-coeff, coeff]` before reduction.
    pub coeff: i64,
    /// Chance that an allowed entry is nonzero.
    pub density: f64,
    /// Level window of sampled modules.
    pub window: u32,
}

impl Default for SampleShape {
    fn default() -> Self {
        Self {
            max_orbits: 4,
            max_rank: 2,
            max_level: 3,
            coeff: 3,
            density: 0.4,
            window: DEFAULT_LEVEL_WINDOW,
        }
    }
}

pub fn orbit_specs<R: Rng>(rng: &mut R, points: &[u32], levels: std::ops::RangeInclusive<u32>, shape: &SampleShape) -> Vec<OrbitSpec> {
    let count = rng.gen_range(1..=shape.max_orbits);
    (0..count)
        .map(|_| OrbitSpec {
            point: points[rng.gen_range(0..points.len())],
            level: rng.gen_range(levels.clone()),
            rank: rng.gen_range(1..=shape.max_rank),
        })
        .collect()
}

/// A module in orbit form over `action`, with representatives drawn from
/// `points` and levels from `levels`.
#[allow(clippy::too_many_arguments)]
pub fn module<R: Rng>(
    rng: &mut R,
    space: &Arc<FiniteMetricSpace>,
    action: &Arc<GroupAction>,
    points: &[u32],
    levels: std::ops::RangeInclusive<u32>,
    ring: Ring,
    decoration: Decoration,
    shape: &SampleShape,
) -> Result<Arc<GeometricModule>, ModuleError> {
    let specs = orbit_specs(rng, points, levels, shape);
    GeometricModule::from_orbits(space.clone(), action.clone(), &specs, ring, decoration)?
        .with_window(shape.window)
        .map(Arc::new)
}

/// Any module over the space, points and levels unrestricted.
pub fn any_module<R: Rng>(
    rng: &mut R,
    space: &Arc<FiniteMetricSpace>,
    action: &Arc<GroupAction>,
    ring: Ring,
    shape: &SampleShape,
) -> Result<Arc<GeometricModule>, ModuleError> {
    let points: Vec<u32> = (0..space.len() as u32).collect();
    module(rng, space, action, &points, 0..=shape.max_level, ring, Decoration::default(), shape)
}

pub fn matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, ring: Ring, coeff: i64) -> Result<CoeffMatrix, ModuleError> {
    let data = (0..rows * cols).map(|_| rng.gen_range(-coeff..=coeff)).collect();
    CoeffMatrix::new(rows, cols, data, ring)
}

/// An equivariant morphism whose entries connect indices at spatial
/// distance at most `reach` (any distance when `None`). Entries are drawn
/// on one representative per source orbit and spread over the orbit.
pub fn morphism<R: Rng>(
    rng: &mut R,
    source: &Arc<GeometricModule>,
    target: &Arc<GeometricModule>,
    reach: Option<Dist>,
    shape: &SampleShape,
) -> Result<ControlledMorphism, ModuleError> {
    let space = source.space();
    let ring = source.ring();
    let mut entries = Vec::new();
    for orbit in source.orbits() {
        let s = orbit[0];
        for t in 0..target.len() {
            if reach.is_some_and(|r| space.dist(source.point(s), target.point(t)) > r) {
                continue;
            }
            if rng.gen_bool(shape.density) {
                entries.push(((s, t), matrix(rng, target.rank(t), source.rank(s), ring, shape.coeff)?));
            }
        }
    }
    ControlledMorphism::equivariant_from(source.clone(), target.clone(), entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sampled_morphisms_respect_reach() {
        let space = FiniteMetricSpace::cycle(12);
        let action = space.action().unwrap().clone();
        let space = Arc::new(space);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let shape = SampleShape::default();
        for _ in 0..20 {
            let a = any_module(&mut rng, &space, &action, Ring::Integers, &shape).unwrap();
            let b = any_module(&mut rng, &space, &action, Ring::Integers, &shape).unwrap();
            let phi = morphism(&mut rng, &a, &b, Some(Dist::from_integer(2)), &shape).unwrap();
            assert!(phi.propagation().space <= Dist::from_integer(2));
        }
    }

    #[test]
    fn same_seed_same_sample() {
        let space = Arc::new(FiniteMetricSpace::path(6));
        let action = Arc::new(GroupAction::trivial(6));
        let shape = SampleShape::default();
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = any_module(&mut rng, &space, &action, Ring::Mod(5), &shape).unwrap();
            morphism(&mut rng, &a, &a, None, &shape).unwrap()
        };
        assert_eq!(draw(3), draw(3));
    }
}
