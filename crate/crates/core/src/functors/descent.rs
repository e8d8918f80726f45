use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use super::FunctorError;
use crate::covers::{max_cover_radius, min_translation, MetricCoverMap};
use crate::groups::{FiniteGroup, GroupAction};
use crate::metric::Dist;
use crate::modules::{CoeffMatrix, ControlledMorphism, Decoration, GeometricModule, OrbitSpec, Support};

/// The deck transformations of `p` as a group acting on the total space.
///
/// Every deck move must be defined on every point and the moves together
/// with the identity must be closed under composition.
pub fn deck_action(p: &MetricCoverMap) -> Result<Arc<GroupAction>, FunctorError> {
    let deck = p.deck().ok_or(FunctorError::MissingDeck)?;
    let n = p.total().len();
    let mut perms: Vec<Vec<u32>> = vec![(0..n as u32).collect()];
    for g in 0..deck.len() {
        let perm = (0..n)
            .map(|x| deck.apply(g, x).map(|y| y as u32))
            .collect::<Option<Vec<_>>>()
            .ok_or(FunctorError::MissingDeck)?;
        perms.push(perm);
    }
    let index: HashMap<&[u32], usize> = perms.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
    if index.len() != perms.len() {
        return Err(FunctorError::Precondition("deck moves repeat or include the identity".into()));
    }
    let order = perms.len();
    let mut table = vec![0u32; order * order];
    for a in 0..order {
        for b in 0..order {
            // (a b)(x) = a(b(x))
            let prod: Vec<u32> = perms[b].iter().map(|&x| perms[a][x as usize]).collect();
            let &c = index
                .get(prod.as_slice())
                .ok_or_else(|| FunctorError::Precondition("deck moves are not closed under composition".into()))?;
            table[a * order + b] = c as u32;
        }
    }
    let generators = (1..order as u32).collect();
    let group = Arc::new(FiniteGroup::from_table("deck", order, table, generators)?);
    Ok(Arc::new(GroupAction::new(group, n, |g, x| perms[g][x] as usize)?))
}

/// Descent along a cover with a complete deck action: deck-equivariant
/// modules and morphisms on the total space are pushed down to the base
/// by summing over deck orbits.
#[derive(Debug)]
pub struct Descent {
    cover: MetricCoverMap,
    action: Arc<GroupAction>,
    base_action: Arc<GroupAction>,
    radius: OnceLock<Dist>,
}

impl Descent {
    pub fn new(cover: MetricCoverMap) -> Result<Self, FunctorError> {
        let action = deck_action(&cover)?;
        for g in 1..action.group().order() {
            if let Some(x) = (0..cover.total().len()).find(|&x| cover.map()[action.act(g, x)] != cover.map()[x]) {
                return Err(crate::covers::CoverError::DeckNotFiberPreserving { g, x }.into());
            }
        }
        let base_action = Arc::new(GroupAction::trivial(cover.base().len()));
        Ok(Self {
            cover,
            action,
            base_action,
            radius: OnceLock::new(),
        })
    }

    pub fn cover(&self) -> &MetricCoverMap {
        &self.cover
    }

    /// The deck action, to be used as the space action of modules upstairs.
    pub fn action(&self) -> &Arc<GroupAction> {
        &self.action
    }

    /// Largest verified cover radius (the certified one when present).
    pub fn cover_radius(&self) -> Dist {
        *self
            .radius
            .get_or_init(|| self.cover.certified_radius().unwrap_or_else(|| max_cover_radius(&self.cover)))
    }

    fn check_upstairs(&self, module: &GeometricModule) -> Result<(), FunctorError> {
        if !Arc::ptr_eq(module.space(), self.cover.total()) || **module.space_action() != *self.action {
            return Err(FunctorError::WrongSpace);
        }
        Ok(())
    }

    fn push_decoration(&self, decoration: &Decoration) -> Decoration {
        let support = match &decoration.support {
            Support::LocallyFinite => Support::LocallyFinite,
            Support::Compact { region } => {
                let mut image: Vec<u32> = region.iter().map(|&x| self.cover.map()[x as usize] as u32).collect();
                image.sort_unstable();
                image.dedup();
                Support::Compact { region: image }
            }
        };
        Decoration {
            support,
            ..decoration.clone()
        }
    }

    /// One index per deck orbit, in the order of [`GeometricModule::orbits`],
    /// lying over the image of the orbit's points.
    pub fn descend_module(&self, module: &GeometricModule) -> Result<GeometricModule, FunctorError> {
        self.check_upstairs(module)?;
        let reps: Vec<usize> = module.orbits().iter().map(|o| o[0]).collect();
        let points = reps.iter().map(|&s| self.cover.map()[module.point(s)] as u32).collect();
        let levels = reps.iter().map(|&s| module.level(s)).collect();
        let ranks = reps.iter().map(|&s| module.rank(s) as u32).collect();
        let plain = GeometricModule::new(
            self.cover.base().clone(),
            self.base_action.clone(),
            crate::modules::IndexLayout {
                action: None,
                points,
                levels,
                ranks,
                window: module.window(),
            },
            module.ring(),
            Decoration::default(),
        )?;
        Ok(plain.with_decoration(self.push_decoration(module.decoration()))?)
    }

    /// Entry `([s], [s'])` is `Σ_h φ^{h s}_{s'}`, summing over the deck
    /// orbit of the source index; the sum is checked to be the same for
    /// every representative `s'` of the target orbit.
    pub fn descend(&self, phi: &ControlledMorphism) -> Result<ControlledMorphism, FunctorError> {
        let (src, dst) = (phi.source(), phi.target());
        let source = Arc::new(self.descend_module(src)?);
        let target = if Arc::ptr_eq(src, dst) {
            source.clone()
        } else {
            Arc::new(self.descend_module(dst)?)
        };
        let ring = src.ring();
        let orbit_of = |m: &GeometricModule| {
            let mut ids = vec![0usize; m.len()];
            let orbits = m.orbits();
            for (o, orbit) in orbits.iter().enumerate() {
                for &s in orbit {
                    ids[s] = o;
                }
            }
            (ids, orbits)
        };
        let (src_orbit, src_orbits) = orbit_of(src);
        let (dst_orbit, dst_orbits) = orbit_of(dst);

        // sums over the source orbit, per target index
        let mut sums: BTreeMap<(usize, usize), CoeffMatrix> = BTreeMap::new();
        for (&(s, t), m) in phi.entries() {
            let key = (src_orbit[s as usize], t as usize);
            let sum = match sums.remove(&key) {
                Some(prev) => prev.add(m, ring)?,
                None => m.clone(),
            };
            sums.insert(key, sum);
        }
        let pairs: std::collections::BTreeSet<(usize, usize)> = sums.keys().map(|&(o, t)| (o, dst_orbit[t])).collect();
        let mut entries = Vec::with_capacity(pairs.len());
        for (o, o2) in pairs {
            let orbit = &dst_orbits[o2];
            let rep = orbit[0];
            let zero = CoeffMatrix::zeros(dst.rank(rep), src.rank(src_orbits[o][0]));
            let value = sums.get(&(o, rep)).cloned().unwrap_or_else(|| zero.clone());
            for &t in &orbit[1..] {
                let other = sums.get(&(o, t)).unwrap_or(&zero);
                if *other != value {
                    return Err(FunctorError::Precondition(format!(
                        "descent sum from source orbit {o} differs between target indices {rep} and {t}"
                    )));
                }
            }
            entries.push(((o, o2), value));
        }
        Ok(ControlledMorphism::new(source, target, entries)?)
    }

    /// A module upstairs whose descent is `base_module`: orbit `o` sits over
    /// the smallest preimage of the base point of index `o`.
    pub fn lift_module(&self, base_module: &GeometricModule) -> Result<GeometricModule, FunctorError> {
        if !Arc::ptr_eq(base_module.space(), self.cover.base()) || base_module.group_order() != 1 {
            return Err(FunctorError::WrongSpace);
        }
        let mut first = vec![usize::MAX; self.cover.base().len()];
        for (x, &y) in self.cover.map().iter().enumerate().rev() {
            first[y] = x;
        }
        let specs: Vec<OrbitSpec> = (0..base_module.len())
            .map(|s| OrbitSpec {
                point: first[base_module.point(s)] as u32,
                level: base_module.level(s),
                rank: base_module.rank(s) as u32,
            })
            .collect();
        let decoration = Decoration {
            letter: base_module.decoration().letter,
            concentrated: base_module.decoration().concentrated,
            ..Decoration::default()
        };
        let module = GeometricModule::from_orbits(
            self.cover.total().clone(),
            self.action.clone(),
            &specs,
            base_module.ring(),
            decoration,
        )?;
        Ok(module.with_window(base_module.window())?)
    }

    /// Checks `descent(φ) = 0 ⟺ φ = 0` when `2 α < min translation`, the
    /// condition under which each descended sum has at most one nonzero
    /// term. The radius rule `radius ≥ 2 α` is reported alongside.
    pub fn check_faithfulness(&self, phi: &ControlledMorphism) -> Result<FaithfulnessVerdict, FunctorError> {
        let alpha = phi.propagation().space;
        let translation = min_translation(&self.cover);
        let radius = self.cover_radius();
        let descended = self.descend(phi)?;
        Ok(FaithfulnessVerdict {
            alpha,
            min_translation: translation,
            cover_radius: radius,
            separated: translation.is_none_or(|d| alpha * 2 < d),
            radius_rule: radius >= alpha * 2,
            morphism_zero: phi.is_zero(),
            descent_zero: descended.is_zero(),
        })
    }
}

/// Outcome of a faithfulness check for one morphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FaithfulnessVerdict {
    /// Spatial propagation of the morphism.
    pub alpha: Dist,
    pub min_translation: Option<Dist>,
    pub cover_radius: Dist,
    /// `2 α` is below the smallest deck displacement.
    pub separated: bool,
    /// The cover radius is at least `2 α`.
    pub radius_rule: bool,
    pub morphism_zero: bool,
    pub descent_zero: bool,
}

impl FaithfulnessVerdict {
    /// `None` when the separation precondition fails and the check is
    /// skipped.
    pub fn holds(&self) -> Option<bool> {
        self.separated.then_some(self.morphism_zero == self.descent_zero)
    }

    /// A nonzero morphism that descends to zero.
    pub fn cancels(&self) -> bool {
        !self.morphism_zero && self.descent_zero
    }
}

pub fn descend(phi: &ControlledMorphism, p: &MetricCoverMap) -> Result<ControlledMorphism, FunctorError> {
    Descent::new(p.clone())?.descend(phi)
}

pub fn descend_module(module: &GeometricModule, p: &MetricCoverMap) -> Result<GeometricModule, FunctorError> {
    Descent::new(p.clone())?.descend_module(module)
}

pub fn lift_module(base_module: &GeometricModule, p: &MetricCoverMap) -> Result<GeometricModule, FunctorError> {
    Descent::new(p.clone())?.lift_module(base_module)
}

pub fn descent_faithfulness_check(phi: &ControlledMorphism, p: &MetricCoverMap) -> Result<FaithfulnessVerdict, FunctorError> {
    Descent::new(p.clone())?.check_faithfulness(phi)
}

/// First stage `N` such that every stage from `N` on separates morphisms
/// of propagation `alpha` (`2 α` below the smallest deck displacement).
/// `None` if the last stage does not.
pub fn faithfulness_threshold(covers: &[MetricCoverMap], alpha: Dist) -> Option<usize> {
    let good: Vec<bool> = covers.iter().map(|p| min_translation(p).is_none_or(|d| alpha * 2 < d)).collect();
    let bad_tail = good.iter().rposition(|&g| !g);
    match bad_tail {
        None => Some(0),
        Some(i) if i + 1 < covers.len() => Some(i + 1),
        Some(_) => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modules::Ring;
    use num_rational::Rational64;

    fn int(n: i64) -> Dist {
        Rational64::from_integer(n)
    }

    fn one() -> CoeffMatrix {
        CoeffMatrix::identity(1)
    }

    fn neg_one() -> CoeffMatrix {
        CoeffMatrix::new(1, 1, vec![-1], Ring::Integers).unwrap()
    }

    fn c8_over_c4() -> Descent {
        Descent::new(MetricCoverMap::cycle_cover(4, 2)).unwrap()
    }

    fn orbit_module(d: &Descent, points: &[u32]) -> Arc<GeometricModule> {
        let specs: Vec<_> = points.iter().map(|&point| OrbitSpec { point, level: 0, rank: 1 }).collect();
        Arc::new(
            GeometricModule::from_orbits(
                d.cover().total().clone(),
                d.action().clone(),
                &specs,
                Ring::Integers,
                Decoration::default(),
            )
            .unwrap(),
        )
    }

    #[test]
    fn deck_group_of_c8_is_z2() {
        let d = c8_over_c4();
        assert_eq!(d.action().group().order(), 2);
        assert_eq!(d.action().act(1, 3), 7);
    }

    #[test]
    fn identity_descends_to_identity() {
        let d = c8_over_c4();
        let m = orbit_module(&d, &[0, 1, 2, 3]);
        let down = d.descend(&ControlledMorphism::identity(m)).unwrap();
        assert_eq!(down, ControlledMorphism::identity(down.source().clone()));
    }

    #[test]
    fn adjacency_descends_with_propagation_one() {
        let d = c8_over_c4();
        // every point of C8 once, index o*2+g over point o + 4g
        let m = orbit_module(&d, &[0, 1, 2, 3]);
        let point_to_index: Vec<usize> = (0..8).map(|x| (0..8).find(|&s| m.point(s) == x).unwrap()).collect();
        let entries = (0..8).map(|x| ((point_to_index[x], point_to_index[(x + 1) % 8]), one()));
        let phi = ControlledMorphism::new(m.clone(), m, entries).unwrap();
        assert_eq!(phi.propagation().space, int(1));
        let down = d.descend(&phi).unwrap();
        assert_eq!(down.propagation().space, int(1));
        assert_eq!(down.nonzero_count(), 4);
        for o in 0..4 {
            assert_eq!(down.entry(o, (o + 1) % 4), Some(&one()));
        }
    }

    #[test]
    fn antipodal_entries_add_up() {
        let d = c8_over_c4();
        let m = orbit_module(&d, &[0]);
        let entries = [
            ((0, 0), one()),
            ((1, 1), one()),
            ((0, 1), CoeffMatrix::new(1, 1, vec![2], Ring::Integers).unwrap()),
            ((1, 0), CoeffMatrix::new(1, 1, vec![2], Ring::Integers).unwrap()),
        ];
        let phi = ControlledMorphism::new(m.clone(), m, entries).unwrap();
        let down = d.descend(&phi).unwrap();
        assert_eq!(down.entry(0, 0).unwrap().get(0, 0), 3);
    }

    #[test]
    fn nonzero_small_morphism_survives() {
        let d = c8_over_c4();
        let m = orbit_module(&d, &[0, 1]);
        let phi = ControlledMorphism::equivariant_from(m.clone(), m, [((0, 2), one())]).unwrap();
        let v = d.check_faithfulness(&phi).unwrap();
        assert_eq!(v.alpha, int(1));
        assert!(v.separated);
        assert_eq!(v.holds(), Some(true));
        assert!(!v.descent_zero);
        // the literal radius rule fails on C8 -> C4
        assert_eq!(v.cover_radius, int(1));
        assert!(!v.radius_rule);
    }

    #[test]
    fn cancelling_example_is_sharp() {
        let d = c8_over_c4();
        let source = orbit_module(&d, &[0]);
        let target = orbit_module(&d, &[2]);
        let entries = [((0, 0), one()), ((0, 1), neg_one()), ((1, 1), one()), ((1, 0), neg_one())];
        let phi = ControlledMorphism::new(source, target, entries).unwrap();
        let v = d.check_faithfulness(&phi).unwrap();
        assert_eq!(v.alpha, int(2));
        assert_eq!(v.holds(), None);
        assert!(v.cancels());
    }

    #[test]
    fn zero_is_consistent() {
        let d = c8_over_c4();
        let m = orbit_module(&d, &[0]);
        let v = d.check_faithfulness(&ControlledMorphism::zero(m.clone(), m).unwrap()).unwrap();
        assert_eq!(v.holds(), Some(true));
    }

    #[test]
    fn wrong_space_rejected() {
        let d = c8_over_c4();
        let other = Arc::new(crate::metric::FiniteMetricSpace::cycle(8));
        let m = GeometricModule::plain(other, vec![0], vec![0], vec![1], Ring::Integers).unwrap();
        assert!(matches!(d.descend_module(&m), Err(FunctorError::WrongSpace)));
    }

    #[test]
    fn lift_then_descend_is_identity_on_objects() {
        let d = c8_over_c4();
        let base = GeometricModule::plain(
            d.cover().base().clone(),
            vec![3, 1, 1],
            vec![0, 2, 1],
            vec![1, 2, 1],
            Ring::Integers,
        )
        .unwrap();
        let up = d.lift_module(&base).unwrap();
        assert_eq!(d.descend_module(&up).unwrap(), base);
    }

    #[test]
    fn threshold_over_a_family() {
        let covers: Vec<_> = [1, 2, 3, 5].iter().map(|&m| MetricCoverMap::cycle_cover(m, 2)).collect();
        // translations are 1, 2, 3, 5
        assert_eq!(faithfulness_threshold(&covers, int(1)), Some(2));
        assert_eq!(faithfulness_threshold(&covers, int(3)), None);
        assert_eq!(faithfulness_threshold(&covers, Rational64::new(1, 4)), Some(0));
    }
}
