use std::collections::BTreeMap;
use std::sync::Arc;

use super::FunctorError;
use crate::modules::{CoeffMatrix, ControlledMorphism, GeometricModule, OrbitSpec};

/// A module rewritten as a direct sum of single-orbit modules.
#[derive(Clone, Debug)]
pub struct OrbitDecomposition {
    /// Orbit-form module; orbit `o` is the orbit of the `o`-th smallest
    /// representative.
    pub orbit_form: Arc<GeometricModule>,
    /// Representative of each orbit in the original module.
    pub representatives: Vec<usize>,
    pub forward: ControlledMorphism,
    pub backward: ControlledMorphism,
}

/// Sends `g.rep_o` to index `o * |G| + g`; both directions have zero
/// propagation.
pub fn orbit_decompose(module: &Arc<GeometricModule>) -> Result<OrbitDecomposition, FunctorError> {
    let n = module.group_order();
    let orbits = module.orbits();
    let representatives: Vec<usize> = orbits.iter().map(|o| o[0]).collect();
    let specs: Vec<OrbitSpec> = representatives
        .iter()
        .map(|&s| OrbitSpec {
            point: module.point(s) as u32,
            level: module.level(s),
            rank: module.rank(s) as u32,
        })
        .collect();
    let orbit_form = GeometricModule::from_orbits(
        module.space().clone(),
        module.space_action().clone(),
        &specs,
        module.ring(),
        module.decoration().clone(),
    )?
    .with_window(module.window())?;
    let orbit_form = Arc::new(orbit_form);
    let mut forward = BTreeMap::new();
    let mut backward = BTreeMap::new();
    for (o, &rep) in representatives.iter().enumerate() {
        let r = module.rank(rep);
        if r == 0 {
            continue;
        }
        for g in 0..n {
            let s = module.act(g, rep);
            let target = o * n + g;
            forward.insert((s, target), CoeffMatrix::identity(r));
            backward.insert((target, s), CoeffMatrix::identity(r));
        }
    }
    let forward = ControlledMorphism::new(module.clone(), orbit_form.clone(), forward)?;
    let backward = ControlledMorphism::new(orbit_form.clone(), module.clone(), backward)?;
    Ok(OrbitDecomposition {
        orbit_form,
        representatives,
        forward,
        backward,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{FiniteGroup, GroupAction};
    use crate::metric::FiniteMetricSpace;
    use crate::modules::{Decoration, IndexLayout, Ring, DEFAULT_LEVEL_WINDOW};

    #[test]
    fn orbit_form_decomposes_to_identity() {
        let space = FiniteMetricSpace::cycle(4);
        let action = space.action().unwrap().clone();
        let specs = [
            OrbitSpec {
                point: 0,
                level: 1,
                rank: 2,
            },
            OrbitSpec {
                point: 1,
                level: 0,
                rank: 1,
            },
        ];
        let m = Arc::new(GeometricModule::from_orbits(Arc::new(space), action, &specs, Ring::Integers, Decoration::default()).unwrap());
        let d = orbit_decompose(&m).unwrap();
        assert_eq!(*d.orbit_form, *m);
        assert_eq!(d.forward, ControlledMorphism::identity(m.clone()));
    }

    #[test]
    fn interleaved_indices_split_into_two_orbits() {
        // Z/2 swapping the two ends of a path, four indices in two orbits
        let group = Arc::new(FiniteGroup::cyclic(2));
        let action = Arc::new(GroupAction::new(group, 2, |g, x| if g == 0 { x } else { 1 - x }).unwrap());
        let space = Arc::new(FiniteMetricSpace::path(2).with_action(action.clone()).unwrap());
        let layout = IndexLayout {
            action: Some(vec![0, 1, 2, 3, 2, 3, 0, 1]),
            points: vec![0, 1, 1, 0],
            levels: vec![0, 3, 0, 3],
            ranks: vec![1, 1, 1, 1],
            window: DEFAULT_LEVEL_WINDOW,
        };
        let m = Arc::new(GeometricModule::new(space, action, layout, Ring::Integers, Decoration::default()).unwrap());
        let d = orbit_decompose(&m).unwrap();
        assert_eq!(d.representatives, vec![0, 1]);
        assert!(d.orbit_form.is_orbit_form());
        assert_eq!(d.forward.propagation(), Default::default());
        let round = d.backward.compose(&d.forward).unwrap();
        assert_eq!(round, ControlledMorphism::identity(m.clone()));
        let other = d.forward.compose(&d.backward).unwrap();
        assert_eq!(other, ControlledMorphism::identity(d.orbit_form.clone()));
    }
}
