use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::element::{compose_permutations, invert_permutation};
use super::{EnumeratedGroup, GroupError};

/// Largest order for which a full Cayley table is built.
pub const TABLE_CAP: usize = 2500;

/// A finite group given by its multiplication table. Element `0` is the
/// identity; elements are plain indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<u32>,
    inverses: Vec<u32>,
    generators: Vec<u32>,
}

impl FiniteGroup {
    /// Builds a group from a table, checking identity, inverses and
    /// associativity.
    pub fn from_table(name: impl Into<String>, order: usize, table: Vec<u32>, generators: Vec<u32>) -> Result<Self, GroupError> {
        if order == 0 || table.len() != order * order || table.iter().any(|&x| x as usize >= order) {
            return Err(GroupError::Shape {
                expected: order * order,
                found: table.len(),
            });
        }
        for a in 0..order {
            if table[a] as usize != a || table[a * order] as usize != a {
                return Err(GroupError::NotSubgroup("element 0 is not the identity".into()));
            }
        }
        let mut inverses = vec![u32::MAX; order];
        for a in 0..order {
            for b in 0..order {
                if table[a * order + b] == 0 {
                    inverses[a] = b as u32;
                }
            }
            if inverses[a] == u32::MAX {
                return Err(GroupError::NotInvertible(format!("element {a}")));
            }
        }
        let g = Self {
            name: name.into(),
            order,
            table,
            inverses,
            generators,
        };
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c)) {
                        return Err(GroupError::NotSubgroup("table is not associative".into()));
                    }
                }
            }
        }
        Ok(g)
    }

    /// Closure of permutation generators, listed in breadth-first order.
    pub fn from_permutations(name: impl Into<String>, degree: usize, gens: &[Vec<u32>]) -> Result<Self, GroupError> {
        let id: Vec<u32> = (0..degree as u32).collect();
        let mut elements = vec![id.clone()];
        let mut index = HashMap::from([(id, 0usize)]);
        let mut head = 0;
        while head < elements.len() {
            for g in gens {
                if g.len() != degree {
                    return Err(GroupError::Shape {
                        expected: degree,
                        found: g.len(),
                    });
                }
                let y = compose_permutations(&elements[head], g);
                if !index.contains_key(&y) {
                    if elements.len() >= TABLE_CAP {
                        return Err(GroupError::OrderCapExceeded(TABLE_CAP));
                    }
                    index.insert(y.clone(), elements.len());
                    elements.push(y);
                }
            }
            head += 1;
        }
        let n = elements.len();
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = index[&compose_permutations(&elements[a], &elements[b])] as u32;
            }
        }
        let inverses = (0..n).map(|a| index[&invert_permutation(&elements[a])] as u32).collect();
        let generators = gens.iter().map(|g| index[g] as u32).collect();
        Ok(Self {
            name: name.into(),
            order: n,
            table,
            inverses,
            generators,
        })
    }

    /// Tabulates an enumerated quotient; element indices are preserved.
    pub fn from_enumerated(name: impl Into<String>, group: &EnumeratedGroup) -> Result<Self, GroupError> {
        let n = group.order();
        if n > TABLE_CAP {
            return Err(GroupError::OrderCapExceeded(TABLE_CAP));
        }
        if !group.is_closed() {
            return Err(GroupError::NotClosed("enumeration is a ball".into()));
        }
        // a * b by walking a shortest word for b from a
        let words: Vec<Vec<usize>> = (0..n).map(|b| group.word(b)).collect();
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for (b, w) in words.iter().enumerate() {
                let mut x = a;
                for &j in w {
                    x = group.step(x, j).expect("closed") as usize;
                }
                table[a * n + b] = x as u32;
            }
        }
        let mut inverses = vec![0u32; n];
        for a in 0..n {
            inverses[a] = (0..n).find(|&b| table[a * n + b] == 0).expect("group") as u32;
        }
        let generators = group
            .group()
            .generators()
            .iter()
            .filter_map(|g| group.index_of(g).map(|i| i as u32))
            .collect();
        Ok(Self {
            name: name.into(),
            order: n,
            table,
            inverses,
            generators,
        })
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// Z/n with element `k` the residue `k`.
    pub fn cyclic(n: usize) -> Self {
        let table = (0..n * n).map(|i| ((i / n + i % n) % n) as u32).collect();
        let inverses = (0..n).map(|a| ((n - a) % n) as u32).collect();
        Self {
            name: format!("Z/{n}"),
            order: n,
            table,
            inverses,
            generators: if n > 1 { vec![1] } else { vec![] },
        }
    }

    /// The symmetric group on `k` letters.
    pub fn symmetric(k: usize) -> Self {
        let mut gens = Vec::new();
        if k >= 2 {
            let mut swap: Vec<u32> = (0..k as u32).collect();
            swap.swap(0, 1);
            gens.push(swap);
            let cycle: Vec<u32> = (0..k as u32).map(|i| (i + 1) % k as u32).collect();
            gens.push(cycle);
        }
        Self::from_permutations(format!("S{k}"), k, &gens).expect("symmetric group is small")
    }

    /// The alternating group on `k >= 3` letters, generated by 3-cycles.
    pub fn alternating(k: usize) -> Self {
        let gens: Vec<Vec<u32>> = (2..k)
            .map(|j| {
                let mut p: Vec<u32> = (0..k as u32).collect();
                // (0 1 j)
                p[0] = 1;
                p[1] = j as u32;
                p[j] = 0;
                p
            })
            .collect();
        Self::from_permutations(format!("A{k}"), k, &gens).expect("alternating group is small")
    }

    /// The dihedral group of order `2n`, acting on the vertices of an `n`-gon.
    pub fn dihedral(n: usize) -> Self {
        let rot: Vec<u32> = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
        let refl: Vec<u32> = (0..n as u32).map(|i| (n as u32 - i) % n as u32).collect();
        Self::from_permutations(format!("D{n}"), n, &[rot, refl]).expect("dihedral group is small")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a] as usize
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// The subgroup generated by the given elements.
    pub fn generate(&self, gens: &[usize]) -> Subgroup {
        let mut members = vec![false; self.order];
        members[0] = true;
        let mut list = vec![0usize];
        let mut head = 0;
        while head < list.len() {
            let x = list[head];
            for &g in gens {
                let y = self.mul(x, g);
                if !members[y] {
                    members[y] = true;
                    list.push(y);
                }
            }
            head += 1;
        }
        Subgroup::from_mask(members)
    }

    /// Checks that a set of elements is a subgroup.
    pub fn subgroup(&self, elements: &[usize]) -> Result<Subgroup, GroupError> {
        let mut mask = vec![false; self.order];
        for &e in elements {
            if e >= self.order {
                return Err(GroupError::NotSubgroup(format!("element {e} out of range")));
            }
            mask[e] = true;
        }
        if !mask[0] {
            return Err(GroupError::NotSubgroup("identity missing".into()));
        }
        for &a in elements {
            for &b in elements {
                if !mask[self.mul(a, self.inv(b))] {
                    return Err(GroupError::NotSubgroup(format!("{a} * {b}^-1 missing")));
                }
            }
        }
        Ok(Subgroup::from_mask(mask))
    }

    /// Every subgroup, sorted by order then members.
    pub fn all_subgroups(&self) -> Vec<Subgroup> {
        let mut found: BTreeSet<Vec<u32>> = BTreeSet::new();
        let mut frontier: Vec<Subgroup> = Vec::new();
        for a in self.elements() {
            let h = self.generate(&[a]);
            if found.insert(h.members.clone()) {
                frontier.push(h);
            }
        }
        let cyclic: Vec<Subgroup> = frontier.clone();
        // every subgroup is a join of cyclic ones
        while let Some(h) = frontier.pop() {
            for c in &cyclic {
                if c.members.iter().all(|&x| h.contains(x as usize)) {
                    continue;
                }
                let gens: Vec<usize> = h.iter().chain(c.iter()).collect();
                let j = self.generate(&gens);
                if found.insert(j.members.clone()) {
                    frontier.push(j);
                }
            }
        }
        let mut out: Vec<Subgroup> = found.into_iter().map(Subgroup::from_members).collect();
        out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.members.cmp(&b.members)));
        out
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        self.elements()
            .all(|g| h.iter().all(|x| h.contains(self.mul(self.mul(g, x), self.inv(g)))))
    }

    /// Left cosets `gH`: returns the coset id of each element and the
    /// minimal-index representative of each coset.
    pub fn left_cosets(&self, h: &Subgroup) -> Cosets {
        let mut id = vec![usize::MAX; self.order];
        let mut reps = Vec::new();
        for g in self.elements() {
            if id[g] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(g);
            for x in h.iter() {
                id[self.mul(g, x)] = c;
            }
        }
        Cosets { id, reps }
    }

    /// The subgroup as a group in its own right, with a map back.
    pub fn restrict(&self, h: &Subgroup) -> (FiniteGroup, Vec<usize>) {
        let members: Vec<usize> = h.iter().collect();
        let local: HashMap<usize, usize> = members.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let n = members.len();
        let mut table = vec![0u32; n * n];
        for (i, &a) in members.iter().enumerate() {
            for (j, &b) in members.iter().enumerate() {
                table[i * n + j] = local[&self.mul(a, b)] as u32;
            }
        }
        let inverses = members.iter().map(|&a| local[&self.inv(a)] as u32).collect();
        let group = FiniteGroup {
            name: format!("{}<{}>", self.name, n),
            order: n,
            table,
            inverses,
            generators: (1..n as u32).collect(),
        };
        (group, members)
    }
}

/// Left cosets of a subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cosets {
    pub id: Vec<usize>,
    pub reps: Vec<usize>,
}

impl Cosets {
    pub fn count(&self) -> usize {
        self.reps.len()
    }
}

/// A subgroup as a sorted member list with a membership mask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    members: Vec<u32>,
    mask: Vec<bool>,
}

impl Subgroup {
    fn from_mask(mask: Vec<bool>) -> Self {
        let members = mask.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| i as u32).collect();
        Self { members, mask }
    }

    fn from_members(members: Vec<u32>) -> Self {
        let n = members.iter().max().map_or(0, |&m| m as usize + 1);
        let mut mask = vec![false; n];
        for &m in &members {
            mask[m as usize] = true;
        }
        Self { members, mask }
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.mask.get(g).copied().unwrap_or(false)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().map(|&m| m as usize)
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_orders() {
        assert_eq!(FiniteGroup::symmetric(3).order(), 6);
        assert_eq!(FiniteGroup::symmetric(4).order(), 24);
        assert_eq!(FiniteGroup::alternating(4).order(), 12);
        assert_eq!(FiniteGroup::dihedral(4).order(), 8);
        assert_eq!(FiniteGroup::cyclic(7).order(), 7);
        assert_eq!(FiniteGroup::trivial().order(), 1);
    }

    #[test]
    fn subgroup_counts() {
        // well-known subgroup counts
        assert_eq!(FiniteGroup::symmetric(3).all_subgroups().len(), 6);
        assert_eq!(FiniteGroup::dihedral(4).all_subgroups().len(), 10);
        assert_eq!(FiniteGroup::alternating(4).all_subgroups().len(), 10);
        assert_eq!(FiniteGroup::symmetric(4).all_subgroups().len(), 30);
        assert_eq!(FiniteGroup::cyclic(12).all_subgroups().len(), 6);
    }

    #[test]
    fn normal_subgroups_of_s4() {
        let g = FiniteGroup::symmetric(4);
        let normal = g.all_subgroups().into_iter().filter(|h| g.is_normal(h)).count();
        assert_eq!(normal, 4);
    }

    #[test]
    fn cosets_partition() {
        let g = FiniteGroup::symmetric(3);
        let h = g.generate(&[g.generators()[0] as usize]);
        let c = g.left_cosets(&h);
        assert_eq!(c.count(), 3);
        for &r in &c.reps {
            assert_eq!(c.id.iter().filter(|&&i| i == c.id[r]).count(), 2);
        }
    }

    #[test]
    fn table_is_checked() {
        let bad = FiniteGroup::from_table("bad", 2, vec![0, 1, 1, 1], vec![]);
        assert!(bad.is_err());
        let z2 = FiniteGroup::from_table("Z/2", 2, vec![0, 1, 1, 0], vec![1]).unwrap();
        assert_eq!(z2.inv(1), 1);
    }

    #[test]
    fn enumerated_table_matches_direct_products() {
        let tower = crate::groups::QuotientTower::sanov(&[5]).unwrap();
        let q = tower.enumerate_quotient(0, 10_000).unwrap();
        let g = FiniteGroup::from_enumerated("SL2(5)", &q).unwrap();
        for a in (0..g.order()).step_by(7) {
            for b in 0..g.order() {
                assert_eq!(g.mul(a, b), q.multiply_indices(a, b).unwrap());
            }
        }
    }

    #[test]
    fn restriction_is_a_group() {
        let g = FiniteGroup::symmetric(4);
        let a4 = g.all_subgroups().into_iter().find(|h| h.order() == 12).unwrap();
        let (sub, map) = g.restrict(&a4);
        assert_eq!(sub.order(), 12);
        for i in 0..12 {
            for j in 0..12 {
                assert_eq!(map[sub.mul(i, j)], g.mul(map[i], map[j]));
            }
        }
    }
}
