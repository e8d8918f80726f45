//! Gathering a module onto nets: everything at level `k` is moved to the
//! nearest point of a `δ_k`-net, summing coefficients that land together.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use super::FunctorError;
use crate::metric::{Dist, Net};
use crate::modules::{CoeffMatrix, ControlledMorphism, GeometricModule, IndexLayout};

/// Spatial propagation of the rearranging isomorphism at one level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LevelBound {
    pub level: u32,
    pub delta: Dist,
    pub propagation: Dist,
}

impl LevelBound {
    pub fn holds(&self) -> bool {
        self.propagation <= self.delta
    }
}

/// One module rewritten over its nets, with the isomorphism both ways.
#[derive(Clone, Debug)]
pub struct NetRearrangement {
    /// Index `i` sits over net point `points[i]` of level `levels[i]`.
    pub rearranged: Arc<GeometricModule>,
    pub forward: ControlledMorphism,
    pub backward: ControlledMorphism,
    pub bounds: Vec<LevelBound>,
}

impl NetRearrangement {
    pub fn bounds_hold(&self) -> bool {
        self.bounds.iter().all(LevelBound::holds)
    }

    /// Both composites are identities.
    pub fn is_isomorphism(&self) -> Result<bool, FunctorError> {
        Ok(
            self.backward.compose(&self.forward)? == ControlledMorphism::identity(self.forward.source().clone())
                && self.forward.compose(&self.backward)? == ControlledMorphism::identity(self.rearranged.clone()),
        )
    }
}

fn check_nets(space: &crate::metric::FiniteMetricSpace, nets: &[Net], action: &crate::groups::GroupAction) -> Result<(), FunctorError> {
    if nets.is_empty() {
        return Err(FunctorError::Precondition("at least one net is needed".into()));
    }
    for (level, net) in nets.iter().enumerate() {
        if net.projection.len() != space.len() {
            return Err(FunctorError::Precondition(format!(
                "net {level} has a projection of the wrong length"
            )));
        }
        net.verify(space)
            .map_err(|violation| FunctorError::NetNotMaximal { level, violation })?;
    }
    if nets.windows(2).any(|w| w[1].delta > w[0].delta) {
        return Err(FunctorError::DeltaNotDecreasing);
    }
    if action.group().order() > 1 {
        for (level, net) in nets.iter().enumerate() {
            let mut on_net = vec![false; space.len()];
            for &x in &net.points {
                on_net[x] = true;
            }
            for g in 1..action.group().order() {
                for &x in &net.points {
                    let gx = action.act(g, x);
                    if gx == x || !on_net[gx] {
                        return Err(FunctorError::Precondition(format!("group does not act freely on net {level}")));
                    }
                }
                if (0..space.len()).any(|y| net.projection[action.act(g, y)] != action.act(g, net.projection[y])) {
                    return Err(FunctorError::Precondition(format!(
                        "projection onto net {level} is not equivariant"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Rearranges each module onto `nets`, where `nets[k]` serves level `k`.
///
/// The new index set is the disjoint union over levels of the net points
/// that receive something; `(k, x)` carries the sum of the coefficients of
/// all indices at level `k` projecting to `x`. Inside a fiber, summands are
/// stacked in order of the orbit of their index, which keeps the
/// isomorphism equivariant.
pub fn net_rearrange(modules: &[Arc<GeometricModule>], nets: &[Net]) -> Result<Vec<NetRearrangement>, FunctorError> {
    let Some(first) = modules.first() else {
        return Ok(Vec::new());
    };
    let space = first.space().clone();
    let action = first.space_action().clone();
    check_nets(&space, nets, &action)?;
    let n = action.group().order();

    modules
        .iter()
        .map(|module| {
            if !module.same_category(first) {
                return Err(FunctorError::WrongSpace);
            }
            let mut orbit_id = vec![0usize; module.len()];
            for (o, orbit) in module.orbits().iter().enumerate() {
                for &s in orbit {
                    orbit_id[s] = o;
                }
            }
            // fibers keyed by (level, net point), members sorted by orbit
            let mut fibers: BTreeMap<(u32, usize), Vec<usize>> = BTreeMap::new();
            for s in (0..module.len()).filter(|&s| module.rank(s) > 0) {
                let k = module.level(s);
                let net = nets
                    .get(k as usize)
                    .ok_or_else(|| FunctorError::Precondition(format!("index {s} has level {k} but only {} nets are given", nets.len())))?;
                fibers.entry((k, net.projection[module.point(s)])).or_default().push(s);
            }
            for members in fibers.values_mut() {
                members.sort_by_key(|&s| orbit_id[s]);
            }
            let keys: Vec<(u32, usize)> = fibers.keys().copied().collect();
            let position: BTreeMap<(u32, usize), usize> = keys.iter().enumerate().map(|(i, &key)| (key, i)).collect();
            let ranks: Vec<u32> = fibers.values().map(|m| m.iter().map(|&s| module.rank(s) as u32).sum()).collect();
            let table = (n > 1).then(|| {
                (0..n)
                    .flat_map(|g| keys.iter().map(move |&(k, x)| (g, k, x)))
                    .map(|(g, k, x)| position[&(k, action.act(g, x))] as u32)
                    .collect::<Vec<u32>>()
            });
            let layout = IndexLayout {
                action: table,
                points: keys.iter().map(|&(_, x)| x as u32).collect(),
                levels: keys.iter().map(|&(k, _)| k).collect(),
                ranks: ranks.clone(),
                window: module.window(),
            };
            let rearranged = Arc::new(GeometricModule::new(
                space.clone(),
                action.clone(),
                layout,
                module.ring(),
                module.decoration().clone(),
            )?);

            let mut forward = Vec::new();
            let mut backward = Vec::new();
            let mut spread: BTreeMap<u32, Dist> = BTreeMap::new();
            for (i, members) in fibers.values().enumerate() {
                let total = ranks[i] as usize;
                let mut offset = 0;
                for &s in members {
                    let r = module.rank(s);
                    let mut inc = vec![0i64; total * r];
                    for j in 0..r {
                        inc[(offset + j) * r + j] = 1;
                    }
                    let inclusion = CoeffMatrix::new(total, r, inc, module.ring())?;
                    let projection = CoeffMatrix::new(r, total, transpose(&inclusion), module.ring())?;
                    forward.push(((s, i), inclusion));
                    backward.push(((i, s), projection));
                    offset += r;
                    let d = space.dist(module.point(s), keys[i].1);
                    let e = spread.entry(keys[i].0).or_default();
                    *e = (*e).max(d);
                }
            }
            let forward = ControlledMorphism::new(module.clone(), rearranged.clone(), forward)?;
            let backward = ControlledMorphism::new(rearranged.clone(), module.clone(), backward)?;
            let bounds = spread
                .into_iter()
                .map(|(level, propagation)| LevelBound {
                    level,
                    delta: nets[level as usize].delta,
                    propagation,
                })
                .collect();
            Ok(NetRearrangement {
                rearranged,
                forward,
                backward,
                bounds,
            })
        })
        .collect()
}

fn transpose(m: &CoeffMatrix) -> Vec<i64> {
    (0..m.cols()).flat_map(|c| (0..m.rows()).map(move |r| m.get(r, c))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{max_separated_net, FiniteMetricSpace, NetViolation};
    use crate::modules::Ring;
    use num_rational::Rational64;

    fn int(n: i64) -> Dist {
        Rational64::from_integer(n)
    }

    fn net(space: &FiniteMetricSpace, delta: i64) -> Net {
        let order: Vec<usize> = (0..space.len()).collect();
        max_separated_net(space, int(delta), &order, false).unwrap()
    }

    #[test]
    fn large_delta_gathers_everything() {
        let space = Arc::new(FiniteMetricSpace::path(4));
        let m = Arc::new(GeometricModule::plain(space.clone(), vec![0, 1, 2, 3], vec![0; 4], vec![1, 2, 1, 1], Ring::Integers).unwrap());
        let out = net_rearrange(&[m], &[net(&space, 10)]).unwrap();
        let r = &out[0];
        assert_eq!(r.rearranged.len(), 1);
        assert_eq!(r.rearranged.rank(0), 5);
        assert!(r.bounds_hold());
        assert_eq!(r.bounds[0].propagation, int(3));
        assert!(r.is_isomorphism().unwrap());
    }

    #[test]
    fn two_levels_on_a_path() {
        let space = Arc::new(FiniteMetricSpace::path(5));
        let nets = [net(&space, 2), net(&space, 1)];
        let m = Arc::new(
            GeometricModule::plain(
                space.clone(),
                vec![0, 1, 2, 3, 4, 1, 3],
                vec![0, 0, 0, 0, 0, 1, 1],
                vec![1; 7],
                Ring::Integers,
            )
            .unwrap(),
        );
        let out = net_rearrange(&[m.clone(), m], &nets).unwrap();
        assert_eq!(out.len(), 2);
        let r = &out[0];
        assert!(r.is_isomorphism().unwrap());
        assert_eq!(r.bounds.len(), 2);
        assert_eq!((r.bounds[0].delta, r.bounds[0].propagation), (int(2), int(1)));
        assert_eq!((r.bounds[1].delta, r.bounds[1].propagation), (int(1), int(0)));
        assert!(r.bounds_hold());
    }

    #[test]
    fn empty_module_gives_empty_output() {
        let space = Arc::new(FiniteMetricSpace::path(3));
        let m = Arc::new(GeometricModule::plain(space.clone(), vec![], vec![], vec![], Ring::Integers).unwrap());
        let r = &net_rearrange(&[m], &[net(&space, 1)]).unwrap()[0];
        assert!(r.rearranged.is_empty());
        assert!(r.forward.is_zero());
    }

    #[test]
    fn non_maximal_net_rejected() {
        let space = Arc::new(FiniteMetricSpace::path(5));
        let bad = Net {
            delta: int(2),
            points: vec![0],
            projection: vec![0; 5],
        };
        let m = Arc::new(GeometricModule::plain(space.clone(), vec![0], vec![0], vec![1], Ring::Integers).unwrap());
        assert!(matches!(
            net_rearrange(&[m], &[bad]),
            Err(FunctorError::NetNotMaximal {
                level: 0,
                violation: NetViolation::Covering(_)
            })
        ));
    }

    #[test]
    fn increasing_delta_rejected() {
        let space = Arc::new(FiniteMetricSpace::path(5));
        let m = Arc::new(GeometricModule::plain(space.clone(), vec![0], vec![0], vec![1], Ring::Integers).unwrap());
        assert!(matches!(
            net_rearrange(&[m], &[net(&space, 1), net(&space, 2)]),
            Err(FunctorError::DeltaNotDecreasing)
        ));
    }

    #[test]
    fn equivariant_on_a_cycle() {
        let space = FiniteMetricSpace::cycle(6);
        let rot =
            Arc::new(crate::groups::GroupAction::new(Arc::new(crate::groups::FiniteGroup::cyclic(2)), 6, |g, x| (x + 3 * g) % 6).unwrap());
        let space = Arc::new(space.with_action(rot.clone()).unwrap());
        let order: Vec<usize> = (0..6).collect();
        let nets = [max_separated_net(&space, int(3), &order, true).unwrap()];
        let specs = [
            crate::modules::OrbitSpec {
                point: 0,
                level: 0,
                rank: 1,
            },
            crate::modules::OrbitSpec {
                point: 1,
                level: 0,
                rank: 2,
            },
        ];
        let m = Arc::new(GeometricModule::from_orbits(space.clone(), rot, &specs, Ring::Integers, Default::default()).unwrap());
        let r = &net_rearrange(&[m], &nets).unwrap()[0];
        assert!(r.is_isomorphism().unwrap());
        assert!(r.bounds_hold());
        assert_eq!(r.rearranged.group_order(), 2);
    }
}
