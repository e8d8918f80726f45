//! Induction between a subgroup's equivariant modules and modules for the
//! whole group whose coefficients are graded by the cosets `G/H`.
//!
//! A coset-graded object is stored flat: one index per (original index,
//! coset) pair, carrying the coset as a label. The group moves labels by
//! left multiplication and morphisms must preserve them.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use super::FunctorError;
use crate::groups::{Cosets, FiniteGroup, GroupAction, Subgroup};
use crate::metric::FiniteMetricSpace;
use crate::modules::{
    CoeffMatrix, ControlledMorphism, Decoration, GeometricModule, IndexLayout, ModuleError, Propagation, Ring, DEFAULT_LEVEL_WINDOW,
};

/// One orbit of a coset-graded module: the representative's point, level,
/// and the rank of each coset summand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosetOrbitSpec {
    pub point: u32,
    pub level: u32,
    pub ranks: Vec<u32>,
}

/// A `G`-module over `X` whose coefficients split over `G/H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetModule {
    flat: Arc<GeometricModule>,
    labels: Vec<u32>,
    blocks: Vec<u32>,
    block_count: usize,
}

impl CosetModule {
    pub fn flat(&self) -> &Arc<GeometricModule> {
        &self.flat
    }

    /// Coset of each flat index.
    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// Original index each flat index belongs to.
    pub fn blocks(&self) -> &[u32] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.block_count
    }

    pub fn len(&self) -> usize {
        self.flat.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flat.is_empty()
    }
}

/// A label-preserving equivariant morphism of coset-graded modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetMorphism {
    source: Arc<CosetModule>,
    target: Arc<CosetModule>,
    flat: ControlledMorphism,
}

impl CosetMorphism {
    pub fn new(source: Arc<CosetModule>, target: Arc<CosetModule>, flat: ControlledMorphism) -> Result<Self, FunctorError> {
        if *flat.source() != source.flat || *flat.target() != target.flat {
            return Err(ModuleError::NotComposable.into());
        }
        if let Some(&(s, t)) = flat
            .entries()
            .keys()
            .find(|&&(s, t)| source.labels[s as usize] != target.labels[t as usize])
        {
            return Err(ModuleError::NotConcentrated {
                source_index: s as usize,
                target: t as usize,
            }
            .into());
        }
        Ok(Self { source, target, flat })
    }

    pub fn source(&self) -> &Arc<CosetModule> {
        &self.source
    }

    pub fn target(&self) -> &Arc<CosetModule> {
        &self.target
    }

    pub fn flat(&self) -> &ControlledMorphism {
        &self.flat
    }

    pub fn propagation(&self) -> Propagation {
        self.flat.propagation()
    }

    pub fn compose(&self, other: &CosetMorphism) -> Result<CosetMorphism, FunctorError> {
        let flat = self.flat.compose(&other.flat)?;
        Self::new(other.source.clone(), self.target.clone(), flat)
    }
}

/// Results of [`Induction::verify`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InductionReport {
    pub propagation: Propagation,
    pub restricted_propagation: Propagation,
    pub induced_propagation: Propagation,
    /// `N ≅ F̄(Ind N)` for the restricted source and target.
    pub unit_iso: bool,
    /// `Ind(F̄ M) ≅ M` for the source and target.
    pub counit_iso: bool,
    /// Both isomorphisms commute with the morphism.
    pub natural: bool,
}

impl InductionReport {
    pub fn propagation_preserved(&self) -> bool {
        self.propagation == self.restricted_propagation && self.propagation == self.induced_propagation
    }

    pub fn passed(&self) -> bool {
        self.propagation_preserved() && self.unit_iso && self.counit_iso && self.natural
    }
}

/// Restriction `F̄` to the `H/H` summand and induction `G ×_H -` between
/// coset-graded `G`-modules and `H`-modules over the same space.
#[derive(Debug)]
pub struct Induction {
    space: Arc<FiniteMetricSpace>,
    g_action: Arc<GroupAction>,
    subgroup: Subgroup,
    cosets: Cosets,
    h_to_g: Vec<usize>,
    g_to_h: Vec<Option<usize>>,
    h_action: Arc<GroupAction>,
}

impl Induction {
    /// `h_elements` must form a subgroup of the acting group.
    pub fn new(space: Arc<FiniteMetricSpace>, g_action: Arc<GroupAction>, h_elements: &[usize]) -> Result<Self, FunctorError> {
        if g_action.degree() != space.len() {
            return Err(ModuleError::InvalidAction("action has the wrong degree".into()).into());
        }
        let group = g_action.group().clone();
        let subgroup = group.subgroup(h_elements)?;
        let cosets = group.left_cosets(&subgroup);
        let (h_group, h_to_g) = group.restrict(&subgroup);
        let mut g_to_h = vec![None; group.order()];
        for (h, &g) in h_to_g.iter().enumerate() {
            g_to_h[g] = Some(h);
        }
        let h_action = Arc::new(GroupAction::new(Arc::new(h_group), space.len(), |h, x| g_action.act(h_to_g[h], x))?);
        Ok(Self {
            space,
            g_action,
            subgroup,
            cosets,
            h_to_g,
            g_to_h,
            h_action,
        })
    }

    pub fn space(&self) -> &Arc<FiniteMetricSpace> {
        &self.space
    }

    pub fn g_action(&self) -> &Arc<GroupAction> {
        &self.g_action
    }

    /// The subgroup's action on the space, for building `H`-modules.
    pub fn h_action(&self) -> &Arc<GroupAction> {
        &self.h_action
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn coset_count(&self) -> usize {
        self.cosets.count()
    }

    fn group(&self) -> &FiniteGroup {
        self.g_action.group()
    }

    /// Coset of `g · r_c`.
    fn move_label(&self, g: usize, c: usize) -> usize {
        self.cosets.id[self.group().mul(g, self.cosets.reps[c])]
    }

    /// Writes `g r_c = r_{c'} h` and returns `(c', h)` with `h` as an
    /// element of the subgroup.
    fn split(&self, g: usize, c: usize) -> (usize, usize) {
        let group = self.group();
        let grc = group.mul(g, self.cosets.reps[c]);
        let c2 = self.cosets.id[grc];
        let h = group.mul(group.inv(self.cosets.reps[c2]), grc);
        (c2, self.g_to_h[h].expect("r_c'^{-1} g r_c lies in H"))
    }

    /// Orbit `o` contributes indices `(o |G| + g) k + c` for `g` in `G`
    /// and `c` in `G/H`, where `k` is the number of cosets; the summand at
    /// `(g s_o, c)` has the rank of `(s_o, g^{-1} c)`.
    pub fn coset_module(&self, orbits: &[CosetOrbitSpec], ring: Ring, decoration: Decoration) -> Result<CosetModule, FunctorError> {
        let group = self.group();
        let (n, k) = (group.order(), self.coset_count());
        let len = orbits.len() * n * k;
        let mut layout = IndexLayout {
            action: Some(vec![0; n * len]),
            points: Vec::with_capacity(len),
            levels: Vec::with_capacity(len),
            ranks: Vec::with_capacity(len),
            window: DEFAULT_LEVEL_WINDOW,
        };
        let mut labels = Vec::with_capacity(len);
        let mut blocks = Vec::with_capacity(len);
        let table = layout.action.as_mut().expect("set above");
        for (o, spec) in orbits.iter().enumerate() {
            if spec.ranks.len() != k {
                return Err(ModuleError::Shape {
                    expected: (k, 1),
                    found: (spec.ranks.len(), 1),
                }
                .into());
            }
            if spec.point as usize >= self.space.len() {
                return Err(ModuleError::OutOfRange(spec.point as usize).into());
            }
            for g in 0..n {
                for c in 0..k {
                    layout.points.push(self.g_action.act(g, spec.point as usize) as u32);
                    layout.levels.push(spec.level);
                    layout.ranks.push(spec.ranks[self.move_label(group.inv(g), c)]);
                    labels.push(c as u32);
                    blocks.push((o * n + g) as u32);
                    for g2 in 0..n {
                        let image = (o * n + group.mul(g2, g)) * k + self.move_label(g2, c);
                        table[g2 * len + (o * n + g) * k + c] = image as u32;
                    }
                }
            }
        }
        let flat = GeometricModule::new(self.space.clone(), self.g_action.clone(), layout, ring, decoration)?;
        Ok(CosetModule {
            flat: Arc::new(flat),
            labels,
            blocks,
            block_count: orbits.len() * n,
        })
    }

    /// Completes label-preserving entries over their `G`-orbits.
    pub fn coset_morphism(
        &self,
        source: &Arc<CosetModule>,
        target: &Arc<CosetModule>,
        generators: impl IntoIterator<Item = ((usize, usize), CoeffMatrix)>,
    ) -> Result<CosetMorphism, FunctorError> {
        let flat = ControlledMorphism::equivariant_from(source.flat.clone(), target.flat.clone(), generators)?;
        CosetMorphism::new(source.clone(), target.clone(), flat)
    }

    fn check_coset_module(&self, m: &CosetModule) -> Result<(), FunctorError> {
        if !Arc::ptr_eq(m.flat.space(), &self.space) || **m.flat.space_action() != *self.g_action {
            return Err(FunctorError::WrongSpace);
        }
        Ok(())
    }

    /// `F̄`: the `H`-module on the flat indices labelled by `H` itself.
    /// Returns it with the flat index of each of its indices.
    pub fn restrict_module(&self, m: &CosetModule) -> Result<(GeometricModule, Vec<usize>), FunctorError> {
        self.check_coset_module(m)?;
        let home = self.cosets.id[0] as u32;
        let kept: Vec<usize> = (0..m.len()).filter(|&i| m.labels[i] == home).collect();
        let mut new_index = vec![u32::MAX; m.len()];
        for (j, &i) in kept.iter().enumerate() {
            new_index[i] = j as u32;
        }
        let flat = &m.flat;
        let hn = self.h_to_g.len();
        let len = kept.len();
        let mut table = vec![0u32; hn * len];
        for (h, &g) in self.h_to_g.iter().enumerate() {
            for (j, &i) in kept.iter().enumerate() {
                table[h * len + j] = new_index[flat.act(g, i)];
            }
        }
        let pick = |v: &[u32]| kept.iter().map(|&i| v[i]).collect::<Vec<_>>();
        let layout = IndexLayout {
            action: Some(table),
            points: pick(flat.points()),
            levels: pick(flat.levels()),
            ranks: pick(flat.ranks()),
            window: flat.window(),
        };
        let module = GeometricModule::new(
            self.space.clone(),
            self.h_action.clone(),
            layout,
            flat.ring(),
            flat.decoration().clone(),
        )?;
        Ok((module, kept))
    }

    /// `F̄` on morphisms: the block between `H`-labelled indices.
    pub fn restrict(&self, phi: &CosetMorphism) -> Result<ControlledMorphism, FunctorError> {
        let (source, kept_s) = self.restrict_module(&phi.source)?;
        let source = Arc::new(source);
        let (target, kept_t) = if Arc::ptr_eq(&phi.source, &phi.target) {
            (source.clone(), kept_s.clone())
        } else {
            let (t, kept) = self.restrict_module(&phi.target)?;
            (Arc::new(t), kept)
        };
        let position = |kept: &[usize], len: usize| {
            let mut pos = vec![usize::MAX; len];
            for (j, &i) in kept.iter().enumerate() {
                pos[i] = j;
            }
            pos
        };
        let ps = position(&kept_s, phi.source.len());
        let pt = position(&kept_t, phi.target.len());
        let entries = phi
            .flat
            .entries()
            .iter()
            .filter(|(&(s, t), _)| ps[s as usize] != usize::MAX && pt[t as usize] != usize::MAX)
            .map(|(&(s, t), m)| ((ps[s as usize], pt[t as usize]), m.clone()));
        Ok(ControlledMorphism::new(source, target, entries)?)
    }

    fn check_h_module(&self, n: &GeometricModule) -> Result<(), FunctorError> {
        if !Arc::ptr_eq(n.space(), &self.space) || **n.space_action() != *self.h_action {
            return Err(FunctorError::WrongSpace);
        }
        Ok(())
    }

    /// `G ×_H N`: index `c |N| + s` sits over `r_c π(s)` with label `c`, and
    /// `g (c, s) = (c', h s)` where `g r_c = r_{c'} h`.
    pub fn induce_module(&self, n: &GeometricModule) -> Result<CosetModule, FunctorError> {
        self.check_h_module(n)?;
        let (gn, k, len_n) = (self.group().order(), self.coset_count(), n.len());
        let len = k * len_n;
        let mut table = vec![0u32; gn * len];
        let mut points = Vec::with_capacity(len);
        let mut labels = Vec::with_capacity(len);
        for c in 0..k {
            for s in 0..len_n {
                points.push(self.g_action.act(self.cosets.reps[c], n.point(s)) as u32);
                labels.push(c as u32);
                for g in 0..gn {
                    let (c2, h) = self.split(g, c);
                    table[g * len + c * len_n + s] = (c2 * len_n + n.act(h, s)) as u32;
                }
            }
        }
        let layout = IndexLayout {
            action: Some(table),
            points,
            levels: n.levels().repeat(k),
            ranks: n.ranks().repeat(k),
            window: n.window(),
        };
        let flat = GeometricModule::new(self.space.clone(), self.g_action.clone(), layout, n.ring(), n.decoration().clone())?;
        Ok(CosetModule {
            flat: Arc::new(flat),
            labels,
            blocks: (0..len as u32).collect(),
            block_count: len,
        })
    }

    /// `G ×_H ψ`: `ψ` repeated on every coset block.
    pub fn induce(&self, psi: &ControlledMorphism) -> Result<CosetMorphism, FunctorError> {
        let source = Arc::new(self.induce_module(psi.source())?);
        let target = if Arc::ptr_eq(psi.source(), psi.target()) {
            source.clone()
        } else {
            Arc::new(self.induce_module(psi.target())?)
        };
        let (ls, lt) = (psi.source().len(), psi.target().len());
        let mut entries = BTreeMap::new();
        for c in 0..self.coset_count() {
            for (&(s, t), m) in psi.entries() {
                entries.insert((c * ls + s as usize, c * lt + t as usize), m.clone());
            }
        }
        let flat = ControlledMorphism::new(source.flat.clone(), target.flat.clone(), entries)?;
        CosetMorphism::new(source, target, flat)
    }

    /// `N → F̄(Ind N)` and its inverse.
    pub fn unit(&self, n: &Arc<GeometricModule>) -> Result<(ControlledMorphism, ControlledMorphism), FunctorError> {
        let induced = self.induce_module(n)?;
        let (back, kept) = self.restrict_module(&induced)?;
        let back = Arc::new(back);
        let home = self.cosets.id[0];
        let mut fwd = Vec::new();
        let mut inv = Vec::new();
        for (j, &i) in kept.iter().enumerate() {
            let s = i - home * n.len();
            if n.rank(s) > 0 {
                fwd.push(((s, j), CoeffMatrix::identity(n.rank(s))));
                inv.push(((j, s), CoeffMatrix::identity(n.rank(s))));
            }
        }
        Ok((
            ControlledMorphism::new(n.clone(), back.clone(), fwd)?,
            ControlledMorphism::new(back, n.clone(), inv)?,
        ))
    }

    /// `Ind(F̄ M) → M`, sending `(c, j)` to `r_c` applied to the `j`-th
    /// `H`-labelled index, and its inverse.
    pub fn counit(&self, m: &Arc<CosetModule>) -> Result<(CosetMorphism, CosetMorphism), FunctorError> {
        let (restricted, kept) = self.restrict_module(m)?;
        let induced = Arc::new(self.induce_module(&restricted)?);
        let len = kept.len();
        let mut fwd = Vec::new();
        let mut inv = Vec::new();
        for c in 0..self.coset_count() {
            for (j, &i) in kept.iter().enumerate() {
                let image = m.flat.act(self.cosets.reps[c], i);
                let r = m.flat.rank(image);
                if r > 0 {
                    fwd.push(((c * len + j, image), CoeffMatrix::identity(r)));
                    inv.push(((image, c * len + j), CoeffMatrix::identity(r)));
                }
            }
        }
        let f = ControlledMorphism::new(induced.flat.clone(), m.flat.clone(), fwd)?;
        let b = ControlledMorphism::new(m.flat.clone(), induced.flat.clone(), inv)?;
        Ok((
            CosetMorphism::new(induced.clone(), m.clone(), f)?,
            CosetMorphism::new(m.clone(), induced, b)?,
        ))
    }

    /// Restricts and re-induces `φ`, checking propagation, both round-trip
    /// isomorphisms and their naturality.
    pub fn verify(&self, phi: &CosetMorphism) -> Result<InductionReport, FunctorError> {
        let restricted = self.restrict(phi)?;
        let induced = self.induce(&restricted)?;

        let is_iso = |f: &ControlledMorphism, b: &ControlledMorphism| -> Result<bool, FunctorError> {
            Ok(b.compose(f)? == ControlledMorphism::identity(f.source().clone())
                && f.compose(b)? == ControlledMorphism::identity(f.target().clone()))
        };
        let (us_f, us_b) = self.unit(restricted.source())?;
        let (ut_f, ut_b) = self.unit(restricted.target())?;
        let unit_iso = is_iso(&us_f, &us_b)? && is_iso(&ut_f, &ut_b)?;
        let (cs_f, cs_b) = self.counit(&phi.source)?;
        let (ct_f, ct_b) = self.counit(&phi.target)?;
        let counit_iso = is_iso(cs_f.flat(), cs_b.flat())? && is_iso(ct_f.flat(), ct_b.flat())?;

        // counit_T ∘ Ind(F̄ φ) = φ ∘ counit_S, and F̄(Ind ψ) ∘ unit_S = unit_T ∘ ψ
        let counit_natural = ct_f.flat().compose(induced.flat())? == phi.flat.compose(cs_f.flat())?;
        let re_restricted = self.restrict(&induced)?;
        let unit_natural = re_restricted.compose(&us_f)? == ut_f.compose(&restricted)?;

        Ok(InductionReport {
            propagation: phi.propagation(),
            restricted_propagation: restricted.propagation(),
            induced_propagation: induced.propagation(),
            unit_iso,
            counit_iso,
            natural: counit_natural && unit_natural,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z4_on_cycle() -> (Arc<FiniteMetricSpace>, Arc<GroupAction>) {
        let space = FiniteMetricSpace::cycle(4);
        let action = space.action().unwrap().clone();
        (Arc::new(space), action)
    }

    fn scalar(x: i64) -> CoeffMatrix {
        CoeffMatrix::new(1, 1, vec![x], Ring::Integers).unwrap()
    }

    #[test]
    fn non_subgroup_rejected() {
        let (space, action) = z4_on_cycle();
        assert!(matches!(Induction::new(space, action, &[0, 1]), Err(FunctorError::Group(_))));
    }

    #[test]
    fn z4_over_z2_single_orbit_round_trip() {
        let (space, action) = z4_on_cycle();
        let ind = Induction::new(space, action, &[0, 2]).unwrap();
        assert_eq!(ind.coset_count(), 2);
        let spec = CosetOrbitSpec {
            point: 0,
            level: 1,
            ranks: vec![1, 2],
        };
        let m = Arc::new(ind.coset_module(&[spec], Ring::Integers, Decoration::default()).unwrap());
        assert_eq!(m.len(), 8);
        assert_eq!(m.block_count(), 4);
        let (restricted, kept) = ind.restrict_module(&m).unwrap();
        assert_eq!(restricted.len(), 4);
        assert_eq!(kept.iter().map(|&i| m.labels()[i]).collect::<Vec<_>>(), vec![0; 4]);
        // a rank-1 identity and a rank-2 matrix on the other summand
        let wide = CoeffMatrix::new(2, 2, vec![0, 1, 1, 3], Ring::Integers).unwrap();
        let phi = ind.coset_morphism(&m, &m, [((0, 4), scalar(5)), ((1, 1), wide)]).unwrap();
        let report = ind.verify(&phi).unwrap();
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn whole_group_is_identity_like() {
        let (space, action) = z4_on_cycle();
        let ind = Induction::new(space, action.clone(), &[0, 1, 2, 3]).unwrap();
        let m = Arc::new(
            ind.coset_module(
                &[CosetOrbitSpec {
                    point: 1,
                    level: 0,
                    ranks: vec![2],
                }],
                Ring::Integers,
                Decoration::default(),
            )
            .unwrap(),
        );
        let (restricted, kept) = ind.restrict_module(&m).unwrap();
        assert_eq!(kept, vec![0, 1, 2, 3]);
        assert_eq!(restricted.points(), m.flat().points());
    }

    #[test]
    fn labels_must_be_preserved() {
        let (space, action) = z4_on_cycle();
        let ind = Induction::new(space, action, &[0, 2]).unwrap();
        let m = Arc::new(
            ind.coset_module(
                &[CosetOrbitSpec {
                    point: 0,
                    level: 0,
                    ranks: vec![1, 1],
                }],
                Ring::Integers,
                Decoration::default(),
            )
            .unwrap(),
        );
        assert!(ind.coset_morphism(&m, &m, [((0, 1), scalar(1))]).is_err());
    }

    #[test]
    fn induced_sparse_morphism_keeps_propagation() {
        let group = Arc::new(FiniteGroup::symmetric(3));
        let space = Arc::new(FiniteMetricSpace::finite_cayley(group).unwrap());
        let action = space.action().unwrap().clone();
        let swap = (1..6).find(|&g| space.action().unwrap().group().element_order(g) == 2).unwrap();
        let ind = Induction::new(space.clone(), action, &[0, swap]).unwrap();
        let specs = [
            CosetOrbitSpec {
                point: 0,
                level: 0,
                ranks: vec![1, 0, 1],
            },
            CosetOrbitSpec {
                point: 0,
                level: 2,
                ranks: vec![1, 1, 1],
            },
        ];
        let m = Arc::new(ind.coset_module(&specs, Ring::Mod(7), Decoration::default()).unwrap());
        let k = ind.coset_count();
        let same_label = (0..m.len())
            .flat_map(|s| (0..m.len()).map(move |t| (s, t)))
            .filter(|&(s, t)| m.labels()[s] == m.labels()[t] && m.flat().rank(s) == 1 && m.flat().rank(t) == 1)
            .step_by(5)
            .take(4)
            .map(|p| (p, CoeffMatrix::new(1, 1, vec![3], Ring::Mod(7)).unwrap()));
        let phi = ind.coset_morphism(&m, &m, same_label).unwrap();
        assert!(!phi.flat().is_zero());
        let report = ind.verify(&phi).unwrap();
        assert!(report.passed(), "{report:?} with {k} cosets");
    }
}
