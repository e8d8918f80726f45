use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::fingen::reduce_mod;
use super::{FinGenGroup, GroupElement, GroupError, GroupKind};

/// How one stage of a tower maps the base group onto a quotient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuotientStage {
    /// Entrywise reduction: matrices to residue matrices, lattice vectors
    /// to residue vectors.
    Modulus(u64),
    /// A free-word base mapped by sending generator `i` to the `i`-th
    /// generator of the target group.
    Images(FinGenGroup),
}

/// A sequence of finite quotients `G -> G/H_n` of a base group, each
/// encoded by its quotient map (kernel membership = maps to identity).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuotientTower {
    base: FinGenGroup,
    stages: Vec<QuotientStage>,
    nested: bool,
}

impl QuotientTower {
    pub fn new(base: FinGenGroup, stages: Vec<QuotientStage>) -> Result<Self, GroupError> {
        let tower = Self {
            base,
            stages,
            nested: false,
        };
        for i in 0..tower.stages.len() {
            tower.check_homomorphism(i)?;
        }
        Ok(tower)
    }

    /// Declares the tower nested and checks that every stage surjects
    /// onto its predecessor compatibly with the generators.
    pub fn nested(mut self, cap: usize) -> Result<Self, GroupError> {
        for i in 1..self.stages.len() {
            self.check_refines(i, cap)?;
        }
        self.nested = true;
        Ok(self)
    }

    /// Residue towers `Z -> Z/n` for each listed `n`.
    pub fn integers(moduli: &[u64]) -> Result<Self, GroupError> {
        Self::new(FinGenGroup::lattice(1), moduli.iter().map(|&m| QuotientStage::Modulus(m)).collect())
    }

    /// The tower `<A, B> -> SL2(F_p)` by reduction modulo each listed `p`.
    pub fn sanov(primes: &[u64]) -> Result<Self, GroupError> {
        Self::new(FinGenGroup::sanov(), primes.iter().map(|&p| QuotientStage::Modulus(p)).collect())
    }

    pub fn base(&self) -> &FinGenGroup {
        &self.base
    }

    pub fn stages(&self) -> &[QuotientStage] {
        &self.stages
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    pub fn is_nested(&self) -> bool {
        self.nested
    }

    /// The quotient group of stage `i` together with the induced
    /// generating set `[S]`.
    pub fn quotient_group(&self, stage: usize) -> Result<FinGenGroup, GroupError> {
        let s = self.stage(stage)?;
        match s {
            QuotientStage::Images(target) => {
                if !matches!(self.base.kind(), GroupKind::FreeWord { rank } if *rank == target.generators().len()) {
                    return Err(GroupError::UnsupportedStage(
                        "generator images require a free-word base of matching rank".into(),
                    ));
                }
                Ok(target.clone())
            }
            QuotientStage::Modulus(m) => {
                let m = *m;
                if m < 1 {
                    return Err(GroupError::InvalidModulus(m));
                }
                let kind = match self.base.kind() {
                    GroupKind::IntegerMatrix { dim } => GroupKind::ModularMatrix { dim: *dim, modulus: m },
                    GroupKind::Lattice { rank } => GroupKind::Cyclic { modulus: m, rank: *rank },
                    GroupKind::Cyclic { modulus, rank } if modulus % m == 0 => GroupKind::Cyclic { modulus: m, rank: *rank },
                    GroupKind::ModularMatrix { dim, modulus } if modulus % m == 0 => GroupKind::ModularMatrix { dim: *dim, modulus: m },
                    other => return Err(GroupError::UnsupportedStage(format!("modulus {m} on {other:?}"))),
                };
                let gens = self
                    .base
                    .generators()
                    .iter()
                    .map(|g| self.project(stage, g))
                    .collect::<Result<Vec<_>, _>>()?;
                FinGenGroup::new(kind, gens)
            }
        }
    }

    /// Image of a base element in the stage-`i` quotient.
    pub fn project(&self, stage: usize, g: &GroupElement) -> Result<GroupElement, GroupError> {
        self.base.check_member(g)?;
        match self.stage(stage)? {
            QuotientStage::Images(target) => match g {
                GroupElement::Word(w) => target.evaluate_word(w),
                _ => Err(GroupError::UnsupportedStage("images need words".into())),
            },
            QuotientStage::Modulus(m) => {
                let m = *m;
                match g {
                    GroupElement::Matrix(_) => match self.base.kind() {
                        GroupKind::IntegerMatrix { .. } => reduce_mod(g, m),
                        _ => Ok(GroupElement::Matrix(g.as_matrix().unwrap().reduced(m))),
                    },
                    GroupElement::Vector(v) => {
                        let m = m as i64;
                        Ok(GroupElement::Vector(v.iter().map(|x| x.rem_euclid(m)).collect()))
                    }
                    _ => Err(GroupError::UnsupportedStage(format!("modulus on {g:?}"))),
                }
            }
        }
    }

    /// Enumerates `G/H_i` by breadth-first closure from the identity.
    pub fn enumerate_quotient(&self, stage: usize, cap: usize) -> Result<EnumeratedGroup, GroupError> {
        EnumeratedGroup::enumerate(self.quotient_group(stage)?, cap)
    }

    /// Length of the shortest non-trivial element of `H_i`, searched in
    /// the word-metric ball of the given radius.
    pub fn kernel_girth(&self, stage: usize, search_radius: u32, cap: usize) -> Result<KernelGirth, GroupError> {
        let quotient = self.quotient_group(stage)?;
        let steps = self.base.symmetric_generators();
        let id = self.base.identity();
        let mut seen = std::collections::HashSet::from([id.clone()]);
        let mut layer = vec![id];
        for depth in 1..=search_radius {
            let mut next = Vec::new();
            for x in &layer {
                for s in &steps {
                    let y = self.base.multiply(x, s)?;
                    if seen.contains(&y) {
                        continue;
                    }
                    if quotient.is_identity(&self.project(stage, &y)?) {
                        return Ok(KernelGirth::Exact(depth));
                    }
                    if seen.len() >= cap {
                        return Err(GroupError::OrderCapExceeded(cap));
                    }
                    seen.insert(y.clone());
                    next.push(y);
                }
            }
            layer = next;
        }
        Ok(KernelGirth::AtLeast(search_radius + 1))
    }

    fn stage(&self, stage: usize) -> Result<&QuotientStage, GroupError> {
        self.stages.get(stage).ok_or(GroupError::NoSuchStage(stage))
    }

    fn check_homomorphism(&self, stage: usize) -> Result<(), GroupError> {
        let quotient = self.quotient_group(stage)?;
        let gens = self.base.symmetric_generators();
        for s in &gens {
            for t in &gens {
                let lhs = self.project(stage, &self.base.multiply(s, t)?)?;
                let rhs = quotient.multiply(&self.project(stage, s)?, &self.project(stage, t)?)?;
                if lhs != rhs {
                    return Err(GroupError::NotHomomorphism(stage));
                }
            }
        }
        Ok(())
    }

    fn check_refines(&self, stage: usize, cap: usize) -> Result<(), GroupError> {
        let fine = self.enumerate_quotient(stage, cap)?;
        let coarse_group = self.quotient_group(stage - 1)?;
        let coarse_gens: Vec<GroupElement> = self
            .base
            .generators()
            .iter()
            .map(|g| self.project(stage - 1, g))
            .collect::<Result<_, _>>()?;
        let fine_gens = fine.group().generators().to_vec();
        // induced map on the symmetric generating sets, matched by position
        let step_images: Vec<GroupElement> = fine
            .step_generators()
            .iter()
            .map(|s| {
                let pos = fine_gens.iter().position(|g| g == s);
                match pos {
                    Some(i) => Ok(coarse_gens[i].clone()),
                    None => {
                        let i = fine_gens
                            .iter()
                            .position(|g| fine.group().inverse(g).ok().as_ref() == Some(s))
                            .expect("step generators come from generators and inverses");
                        coarse_group.inverse(&coarse_gens[i])
                    }
                }
            })
            .collect::<Result<_, _>>()?;
        let mut image: Vec<Option<GroupElement>> = vec![None; fine.order()];
        image[0] = Some(coarse_group.identity());
        for x in 0..fine.order() {
            let fx = image[x].clone().expect("BFS order reaches parents first");
            for (j, t) in step_images.iter().enumerate() {
                let y = fine.step(x, j).expect("finite quotient is closed") as usize;
                let fy = coarse_group.multiply(&fx, t)?;
                match &image[y] {
                    None => image[y] = Some(fy),
                    Some(existing) if *existing == fy => {}
                    Some(_) => return Err(GroupError::NotNested(stage)),
                }
            }
        }
        let coarse = self.enumerate_quotient(stage - 1, cap)?;
        let mut hit = vec![false; coarse.order()];
        for fx in image.iter().flatten() {
            hit[coarse.index_of(fx).ok_or(GroupError::NotNested(stage))?] = true;
        }
        if hit.iter().all(|&h| h) {
            Ok(())
        } else {
            Err(GroupError::NotNested(stage))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelGirth {
    Exact(u32),
    /// No non-trivial kernel element within the searched ball.
    AtLeast(u32),
}

impl KernelGirth {
    pub fn value(self) -> u32 {
        match self {
            Self::Exact(v) | Self::AtLeast(v) => v,
        }
    }

    /// Largest `R` with `B_{2R}(1) ∩ H = {1}`, i.e. `2R < girth`.
    pub fn cover_bound(self) -> u32 {
        self.value().saturating_sub(1) / 2
    }
}

/// A group (or a ball in one) listed in breadth-first order from the
/// identity, with right multiplication by the symmetric generators
/// tabulated.
#[derive(Clone, Debug)]
pub struct EnumeratedGroup {
    group: FinGenGroup,
    steps: Vec<GroupElement>,
    elements: Vec<GroupElement>,
    index: HashMap<GroupElement, u32>,
    depth: Vec<u32>,
    /// `right[x * steps + j]`, `u32::MAX` when the product leaves a ball.
    right: Vec<u32>,
    /// `(parent, step)` on a breadth-first tree; the identity has none.
    parent: Vec<(u32, u32)>,
    complete: bool,
}

impl EnumeratedGroup {
    /// Closure of the identity under right multiplication by `[S]^{±1}`.
    pub fn enumerate(group: FinGenGroup, cap: usize) -> Result<Self, GroupError> {
        Self::bfs(group, None, cap)
    }

    /// The closed ball of the given radius in the word metric.
    pub fn ball(group: FinGenGroup, radius: u32, cap: usize) -> Result<Self, GroupError> {
        Self::bfs(group, Some(radius), cap)
    }

    fn bfs(group: FinGenGroup, radius: Option<u32>, cap: usize) -> Result<Self, GroupError> {
        let steps = group.symmetric_generators();
        let k = steps.len();
        let id = group.identity();
        let mut elements = vec![id.clone()];
        let mut index = HashMap::from([(id, 0u32)]);
        let mut depth = vec![0u32];
        let mut parent = vec![(u32::MAX, u32::MAX)];
        let mut right: Vec<u32> = Vec::new();
        let mut head = 0;
        while head < elements.len() {
            let d = depth[head];
            let x = elements[head].clone();
            for (j, s) in steps.iter().enumerate() {
                let y = group.multiply(&x, s)?;
                let target = match index.get(&y) {
                    Some(&i) => i,
                    None if radius.is_some_and(|r| d >= r) => u32::MAX,
                    None => {
                        if elements.len() >= cap {
                            return Err(GroupError::OrderCapExceeded(cap));
                        }
                        let i = elements.len() as u32;
                        index.insert(y.clone(), i);
                        elements.push(y);
                        depth.push(d + 1);
                        parent.push((head as u32, j as u32));
                        i
                    }
                };
                right.push(target);
            }
            head += 1;
        }
        let complete = !right.contains(&u32::MAX);
        debug_assert_eq!(right.len(), elements.len() * k);
        Ok(Self {
            group,
            steps,
            elements,
            index,
            depth,
            right,
            parent,
            complete,
        })
    }

    pub fn group(&self) -> &FinGenGroup {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn element(&self, idx: usize) -> &GroupElement {
        &self.elements[idx]
    }

    pub fn index_of(&self, g: &GroupElement) -> Option<usize> {
        self.index.get(g).map(|&i| i as usize)
    }

    /// Word length from the identity.
    pub fn depth(&self, idx: usize) -> u32 {
        self.depth[idx]
    }

    pub fn step_generators(&self) -> &[GroupElement] {
        &self.steps
    }

    /// Index of `element(x) * step_generators()[j]`, if enumerated.
    pub fn step(&self, x: usize, j: usize) -> Option<u32> {
        let v = self.right[x * self.steps.len() + j];
        (v != u32::MAX).then_some(v)
    }

    /// Indices of step generators spelling a shortest word for `idx`.
    pub fn word(&self, idx: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.depth[idx] as usize);
        let mut x = idx;
        while x != 0 {
            let (p, j) = self.parent[x];
            out.push(j as usize);
            x = p as usize;
        }
        out.reverse();
        out
    }

    /// True when the listed set is closed under the generators.
    pub fn is_closed(&self) -> bool {
        self.complete
    }

    /// All generators act trivially, so the enumeration is `{1}`.
    pub fn is_degenerate(&self) -> bool {
        self.steps.is_empty()
    }

    /// Index of `element(a) * element(b)`.
    pub fn multiply_indices(&self, a: usize, b: usize) -> Result<usize, GroupError> {
        let prod = self.group.multiply(&self.elements[a], &self.elements[b])?;
        self.index_of(&prod).ok_or_else(|| GroupError::NotClosed(format!("{prod:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CAP: usize = 1_000_000;

    #[test]
    fn sl2_f3_has_order_24() {
        let tower = QuotientTower::sanov(&[3]).unwrap();
        let q = tower.enumerate_quotient(0, CAP).unwrap();
        assert_eq!(q.order(), 24);
        assert!(q.is_closed());
        assert!(!q.is_degenerate());
    }

    #[test]
    fn integer_stage_gives_cyclic() {
        let tower = QuotientTower::integers(&[10]).unwrap();
        let q = tower.enumerate_quotient(0, CAP).unwrap();
        assert_eq!(q.order(), 10);
        assert_eq!(q.group().generators(), &[GroupElement::Vector(vec![1])]);
    }

    #[test]
    fn mod_two_stage_is_degenerate() {
        let tower = QuotientTower::sanov(&[2]).unwrap();
        let q = tower.enumerate_quotient(0, CAP).unwrap();
        assert_eq!(q.order(), 1);
        assert!(q.is_degenerate());
    }

    #[test]
    fn cap_is_enforced() {
        let tower = QuotientTower::sanov(&[7]).unwrap();
        assert!(matches!(tower.enumerate_quotient(0, 100), Err(GroupError::OrderCapExceeded(100))));
    }

    #[test]
    fn free_group_ball_sizes() {
        // 2 * 3^r - 1 elements in a radius-r ball of the 4-regular tree
        let ball = EnumeratedGroup::ball(FinGenGroup::sanov(), 3, CAP).unwrap();
        assert_eq!(ball.order(), 53);
        assert!(!ball.is_closed());
    }

    #[test]
    fn closure_under_generators() {
        let tower = QuotientTower::sanov(&[5]).unwrap();
        let q = tower.enumerate_quotient(0, CAP).unwrap();
        assert_eq!(q.order(), 120);
        for x in 0..q.order() {
            for s in q.step_generators() {
                let y = q.group().multiply(q.element(x), s).unwrap();
                assert!(q.index_of(&y).is_some());
            }
        }
    }

    #[test]
    fn nested_tower_checks() {
        let ok = QuotientTower::integers(&[2, 4, 8]).unwrap().nested(CAP);
        assert!(ok.is_ok());
        let bad = QuotientTower::integers(&[4, 6]).unwrap().nested(CAP);
        assert!(matches!(bad, Err(GroupError::NotNested(1))));
    }

    #[test]
    fn kernel_girth_of_integer_stage() {
        let tower = QuotientTower::integers(&[10]).unwrap();
        assert_eq!(tower.kernel_girth(0, 12, CAP).unwrap(), KernelGirth::Exact(10));
        assert_eq!(tower.kernel_girth(0, 5, CAP).unwrap(), KernelGirth::AtLeast(6));
        assert_eq!(KernelGirth::Exact(10).cover_bound(), 4);
    }

    #[test]
    fn free_images_stage() {
        let s3 = FinGenGroup::new(
            GroupKind::Permutation { degree: 3 },
            vec![GroupElement::Permutation(vec![1, 0, 2]), GroupElement::Permutation(vec![1, 2, 0])],
        )
        .unwrap();
        let tower = QuotientTower::new(FinGenGroup::free(2), vec![QuotientStage::Images(s3)]).unwrap();
        assert_eq!(tower.enumerate_quotient(0, CAP).unwrap().order(), 6);
        // a^2 lies in the kernel
        assert_eq!(tower.kernel_girth(0, 4, CAP).unwrap(), KernelGirth::Exact(2));
    }
}
