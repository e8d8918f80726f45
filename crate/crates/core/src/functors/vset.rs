//! The bijection `VH/H × G/VH ≅ G/H` for a normal subgroup `H` and any
//! subgroup `V`, built from a section of `k ↦ k⁻¹ VH`.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::FunctorError;
use crate::groups::{Cosets, FiniteGroup, Subgroup};

/// `φ(vH, c) = v s(c) H` and `ψ(gH) = (g s(g⁻¹VH)⁻¹ H, g⁻¹VH)`, where
/// `s(c)` is an element `k` with `k⁻¹` in the coset `c` of `VH`.
#[derive(Clone, Debug)]
pub struct VSetBijection {
    group: Arc<FiniteGroup>,
    v: Subgroup,
    h_cosets: Cosets,
    vh_cosets: Cosets,
    /// Cosets of `H` inside `VH`, as ids in `G/H`.
    inner: Vec<usize>,
    section: Vec<usize>,
}

/// Exhaustive checks of [`VSetBijection::verify`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VSetReport {
    pub domain_size: usize,
    pub codomain_size: usize,
    pub psi_after_phi: bool,
    pub phi_after_psi: bool,
    pub v_equivariant: bool,
    /// Both maps give the same answer for every representative.
    pub well_defined: bool,
}

impl VSetReport {
    pub fn passed(&self) -> bool {
        self.domain_size == self.codomain_size && self.psi_after_phi && self.phi_after_psi && self.v_equivariant && self.well_defined
    }
}

impl VSetBijection {
    /// Uses the section picking the smallest element index in each fiber.
    pub fn new(group: Arc<FiniteGroup>, h: &[usize], v: &[usize]) -> Result<Self, FunctorError> {
        let mut b = Self::unsectioned(group, h, v)?;
        b.section = (0..b.vh_cosets.count())
            .map(|c| {
                b.group
                    .elements()
                    .find(|&k| b.vh_cosets.id[b.group.inv(k)] == c)
                    .expect("every coset is hit")
            })
            .collect();
        Ok(b)
    }

    /// Uses a section chosen uniformly at random from each fiber.
    pub fn with_random_section(group: Arc<FiniteGroup>, h: &[usize], v: &[usize], seed: u64) -> Result<Self, FunctorError> {
        let mut b = Self::unsectioned(group, h, v)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        b.section = (0..b.vh_cosets.count())
            .map(|c| {
                let fiber: Vec<usize> = b.group.elements().filter(|&k| b.vh_cosets.id[b.group.inv(k)] == c).collect();
                *fiber.choose(&mut rng).expect("fibers are nonempty")
            })
            .collect();
        Ok(b)
    }

    /// Uses the given section, one element per coset of `VH`.
    pub fn with_section(group: Arc<FiniteGroup>, h: &[usize], v: &[usize], section: Vec<usize>) -> Result<Self, FunctorError> {
        let mut b = Self::unsectioned(group, h, v)?;
        if section.len() != b.vh_cosets.count() {
            return Err(FunctorError::InvalidSection(format!(
                "{} values for {} cosets",
                section.len(),
                b.vh_cosets.count()
            )));
        }
        for (c, &k) in section.iter().enumerate() {
            if k >= b.group.order() || b.vh_cosets.id[b.group.inv(k)] != c {
                return Err(FunctorError::InvalidSection(format!("{k} does not lie over coset {c}")));
            }
        }
        b.section = section;
        Ok(b)
    }

    fn unsectioned(group: Arc<FiniteGroup>, h: &[usize], v: &[usize]) -> Result<Self, FunctorError> {
        let h = group.subgroup(h)?;
        if !group.is_normal(&h) {
            return Err(FunctorError::NotNormal);
        }
        let v = group.subgroup(v)?;
        let gens: Vec<usize> = v.iter().chain(h.iter()).collect();
        let vh = group.generate(&gens);
        let h_cosets = group.left_cosets(&h);
        let vh_cosets = group.left_cosets(&vh);
        let inner = (0..h_cosets.count()).filter(|&a| vh.contains(h_cosets.reps[a])).collect();
        Ok(Self {
            group,
            v,
            h_cosets,
            vh_cosets,
            inner,
            section: Vec::new(),
        })
    }

    pub fn section(&self) -> &[usize] {
        &self.section
    }

    /// Domain pairs `(a, c)`: `a` a coset of `H` inside `VH` (by its id in
    /// `G/H`) and `c` a coset of `VH`.
    pub fn domain(&self) -> Vec<(usize, usize)> {
        self.inner
            .iter()
            .flat_map(|&a| (0..self.vh_cosets.count()).map(move |c| (a, c)))
            .collect()
    }

    pub fn codomain_size(&self) -> usize {
        self.h_cosets.count()
    }

    fn phi_with(&self, v: usize, c: usize) -> usize {
        self.h_cosets.id[self.group.mul(v, self.section[c])]
    }

    fn psi_with(&self, g: usize) -> (usize, usize) {
        let group = &self.group;
        let c = self.vh_cosets.id[group.inv(g)];
        let a = self.h_cosets.id[group.mul(g, group.inv(self.section[c]))];
        (a, c)
    }

    pub fn phi(&self, a: usize, c: usize) -> usize {
        self.phi_with(self.h_cosets.reps[a], c)
    }

    pub fn psi(&self, b: usize) -> (usize, usize) {
        self.psi_with(self.h_cosets.reps[b])
    }

    /// Exhaustive over the domain, the codomain, all representatives and
    /// all elements of `V`.
    pub fn verify(&self) -> VSetReport {
        let group = &self.group;
        let domain = self.domain();
        let psi_after_phi = domain.iter().all(|&(a, c)| self.psi(self.phi(a, c)) == (a, c));
        let phi_after_psi = (0..self.codomain_size()).all(|b| {
            let (a, c) = self.psi(b);
            self.inner.contains(&a) && self.phi(a, c) == b
        });
        let well_defined = group.elements().all(|g| self.psi_with(g) == self.psi(self.h_cosets.id[g]))
            && self
                .inner
                .iter()
                .flat_map(|&a| group.elements().filter(move |&g| self.h_cosets.id[g] == a).map(move |g| (a, g)))
                .all(|(a, g)| (0..self.vh_cosets.count()).all(|c| self.phi_with(g, c) == self.phi(a, c)));
        let act_h = |u: usize, a: usize| self.h_cosets.id[group.mul(u, self.h_cosets.reps[a])];
        let v_equivariant = self.v.iter().all(|u| {
            domain.iter().all(|&(a, c)| self.phi(act_h(u, a), c) == act_h(u, self.phi(a, c)))
                && (0..self.codomain_size()).all(|b| {
                    let (a, c) = self.psi(b);
                    self.psi(act_h(u, b)) == (act_h(u, a), c)
                })
        });
        VSetReport {
            domain_size: domain.len(),
            codomain_size: self.codomain_size(),
            psi_after_phi,
            phi_after_psi,
            v_equivariant,
            well_defined,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn involution(g: &FiniteGroup) -> usize {
        g.elements().find(|&x| g.element_order(x) == 2).unwrap()
    }

    #[test]
    fn trivial_v_is_identity_like() {
        let g = Arc::new(FiniteGroup::cyclic(6));
        let b = VSetBijection::new(g.clone(), &[0, 3], &[0]).unwrap();
        assert!(b.verify().passed());
        for x in 0..b.codomain_size() {
            // H/H is the only inner coset
            assert_eq!(b.psi(x).0, 0);
        }
    }

    #[test]
    fn s3_over_a3() {
        let s3 = Arc::new(FiniteGroup::symmetric(3));
        let a3: Vec<usize> = s3.elements().filter(|&x| s3.element_order(x) != 2).collect();
        let v = [0, involution(&s3)];
        let b = VSetBijection::new(s3, &a3, &v).unwrap();
        let report = b.verify();
        assert_eq!(report.domain_size, 2);
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn s3_over_trivial() {
        let s3 = Arc::new(FiniteGroup::symmetric(3));
        let v = [0, involution(&s3)];
        let b = VSetBijection::new(s3, &[0], &v).unwrap();
        let report = b.verify();
        assert_eq!(report.domain_size, 6);
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn non_normal_rejected() {
        let s3 = Arc::new(FiniteGroup::symmetric(3));
        let t = involution(&s3);
        assert!(matches!(VSetBijection::new(s3, &[0, t], &[0]), Err(FunctorError::NotNormal)));
    }

    #[test]
    fn random_sections_work() {
        let s4 = Arc::new(FiniteGroup::symmetric(4));
        let v4: Vec<usize> = s4
            .elements()
            .filter(|&x| x == 0 || (s4.element_order(x) == 2 && is_double_transposition(&s4, x)))
            .collect();
        let v = [0, involution(&s4)];
        for seed in 0..5 {
            let b = VSetBijection::with_random_section(s4.clone(), &v4, &v, seed).unwrap();
            assert!(b.verify().passed());
        }
    }

    // double transpositions are the involutions whose conjugacy class has size 3
    fn is_double_transposition(g: &FiniteGroup, x: usize) -> bool {
        let mut class: Vec<usize> = g.elements().map(|k| g.mul(g.mul(k, x), g.inv(k))).collect();
        class.sort_unstable();
        class.dedup();
        class.len() == 3
    }

    #[test]
    fn bad_section_rejected() {
        let s3 = Arc::new(FiniteGroup::symmetric(3));
        let v = [0, involution(&s3)];
        let b = VSetBijection::new(s3.clone(), &[0], &v).unwrap();
        let mut section = b.section().to_vec();
        section.swap(0, 1);
        assert!(matches!(
            VSetBijection::with_section(s3, &[0], &v, section),
            Err(FunctorError::InvalidSection(_))
        ));
    }
}
