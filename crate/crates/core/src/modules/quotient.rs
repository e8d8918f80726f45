use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use super::karoubi::summand_maps;
use super::{ControlledMorphism, Decoration, Letter, ModuleError, Propagation, Support};
use crate::metric::Dist;

/// The subcategory a difference of morphisms must factor through.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Subcategory {
    /// Objects with all levels at most `bound`.
    BoundedLevels { bound: u32 },
    /// Objects whose points lie in `region`, a union of orbits.
    SupportedOn { region: Vec<u32> },
}

/// Outcome of [`quotient_equal`].
#[derive(Clone, Debug)]
pub enum QuotientVerdict {
    /// `φ - ψ = right ∘ left` through `factor`.
    Equal {
        factor: Arc<super::GeometricModule>,
        left: ControlledMorphism,
        right: ControlledMorphism,
    },
    /// No factorization with legs inside the budget: this nonzero entry
    /// of `φ - ψ` is too far from the subcategory.
    NotEqual { source: usize, target: usize },
    /// Neither the construction nor the obstruction applies.
    Undecided { unresolved: usize },
}

impl QuotientVerdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, QuotientVerdict::Equal { .. })
    }

    pub fn is_not_equal(&self) -> bool {
        matches!(self, QuotientVerdict::NotEqual { .. })
    }
}

/// Decides whether `φ - ψ` factors through an object of `sub` using
/// morphisms of propagation at most `budget` (default: the propagation of
/// `φ - ψ`).
///
/// Sufficient: every nonzero entry starts or ends inside the subcategory;
/// then `φ - ψ` factors through `A|_sub ⊕ B|_sub`. Necessary: every nonzero
/// entry starts and ends within `budget` of the subcategory, since it is a
/// composite through some index there.
pub fn quotient_equal(
    phi: &ControlledMorphism,
    psi: &ControlledMorphism,
    sub: &Subcategory,
    budget: Option<Propagation>,
) -> Result<QuotientVerdict, ModuleError> {
    let delta = phi.sub(psi)?;
    let budget = budget.unwrap_or_else(|| delta.propagation());
    if !delta.propagation().within(&budget) {
        return Err(ModuleError::Precondition(
            "budget is below the propagation of the difference".into(),
        ));
    }
    let (src, dst) = (delta.source().clone(), delta.target().clone());
    let space = src.space().clone();

    // distance of an index from the subcategory, in the relevant direction
    let (gap_src, gap_dst): (Vec<Dist>, Vec<Dist>) = match sub {
        Subcategory::BoundedLevels { bound } => {
            let gap = |l: u32| Dist::from_integer(l.saturating_sub(*bound) as i64);
            (
                (0..src.len()).map(|s| gap(src.level(s))).collect(),
                (0..dst.len()).map(|t| gap(dst.level(t))).collect(),
            )
        }
        Subcategory::SupportedOn { region } => {
            for &x in region {
                if x as usize >= space.len() {
                    return Err(ModuleError::OutOfRange(x as usize));
                }
            }
            let to_region = |x: usize| region.iter().map(|&k| space.dist(x, k as usize)).min();
            let mut cache: BTreeMap<usize, Dist> = BTreeMap::new();
            let mut gap = |x: usize| {
                *cache
                    .entry(x)
                    .or_insert_with(|| to_region(x).unwrap_or(Dist::from_integer(i64::MAX)))
            };
            (
                (0..src.len()).map(|s| gap(src.point(s))).collect(),
                (0..dst.len()).map(|t| gap(dst.point(t))).collect(),
            )
        }
    };
    let reach = match sub {
        Subcategory::BoundedLevels { .. } => Dist::from_integer(budget.levels as i64),
        Subcategory::SupportedOn { .. } => budget.space,
    };
    let zero = Dist::default();

    for &(s, t) in delta.entries().keys() {
        let (s, t) = (s as usize, t as usize);
        if gap_src[s] > reach || gap_dst[t] > reach {
            return Ok(QuotientVerdict::NotEqual { source: s, target: t });
        }
    }
    let unresolved = delta
        .entries()
        .keys()
        .filter(|&&(s, t)| gap_src[s as usize] > zero && gap_dst[t as usize] > zero)
        .count();
    if unresolved > 0 {
        return Ok(QuotientVerdict::Undecided { unresolved });
    }

    // entries leaving the subcategory's part of the source go through
    // the first block; the rest end in the target's part
    let mut from_source = BTreeMap::new();
    let mut into_target = BTreeMap::new();
    for (&(s, t), m) in delta.entries() {
        if gap_src[s as usize] == zero {
            from_source.insert((s, t), m.clone());
        } else {
            into_target.insert((s, t), m.clone());
        }
    }
    let decoration = match sub {
        Subcategory::BoundedLevels { bound } => Decoration::letter(Letter::T { bound: *bound }),
        Subcategory::SupportedOn { region } => Decoration {
            support: Support::Compact { region: region.clone() },
            ..Decoration::default()
        },
    };
    let pick = |gaps: &[Dist], used: bool| -> Vec<usize> {
        if used {
            (0..gaps.len()).filter(|&i| gaps[i] == zero).collect()
        } else {
            Vec::new()
        }
    };
    let (first, kept_src) = src.restrict(&pick(&gap_src, !from_source.is_empty()), decoration.clone())?;
    let (second, kept_dst) = dst.restrict(&pick(&gap_dst, !into_target.is_empty()), decoration.clone())?;
    let factor = Arc::new(first.direct_sum(&second, decoration)?);
    let offset = first.len() as u32;
    let first = Arc::new(first);
    let second = Arc::new(second);
    let (_, pr_src) = summand_maps(&first, &src, &kept_src);
    let (inc_dst, _) = summand_maps(&second, &dst, &kept_dst);

    let mut new_src = vec![u32::MAX; src.len()];
    for (i, &s) in kept_src.iter().enumerate() {
        new_src[s] = i as u32;
    }
    let mut new_dst = vec![u32::MAX; dst.len()];
    for (i, &t) in kept_dst.iter().enumerate() {
        new_dst[t] = i as u32;
    }
    // left: A → factor, projection onto the first block plus the
    // target-ending entries into the second block
    let mut left = BTreeMap::new();
    for (&(s, i), m) in pr_src.entries() {
        left.insert((s, i), m.clone());
    }
    for ((s, t), m) in into_target {
        left.insert((s, offset + new_dst[t as usize]), m);
    }
    // right: factor → B, source-starting entries from the first block
    // plus the inclusion of the second block
    let mut right = BTreeMap::new();
    for ((s, t), m) in from_source {
        right.insert((new_src[s as usize], t), m);
    }
    for (&(j, t), m) in inc_dst.entries() {
        right.insert((offset + j, t), m.clone());
    }
    let widen = |m: BTreeMap<(u32, u32), _>| m.into_iter().map(|((a, b), x)| ((a as usize, b as usize), x));
    let left = ControlledMorphism::new(src.clone(), factor.clone(), widen(left))?;
    let right = ControlledMorphism::new(factor.clone(), dst.clone(), widen(right))?;
    if right.compose(&left)? != delta {
        return Ok(QuotientVerdict::Undecided {
            unresolved: delta.nonzero_count(),
        });
    }
    Ok(QuotientVerdict::Equal { factor, left, right })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::FiniteMetricSpace;
    use crate::modules::{CoeffMatrix, GeometricModule, Ring};

    fn one() -> CoeffMatrix {
        CoeffMatrix::identity(1)
    }

    fn levels_module(levels: Vec<u32>) -> Arc<GeometricModule> {
        let space = Arc::new(FiniteMetricSpace::path(1));
        let n = levels.len();
        Arc::new(GeometricModule::plain(space, vec![0; n], levels, vec![1; n], Ring::Integers).unwrap())
    }

    #[test]
    fn equal_morphisms_factor_through_zero() {
        let m = levels_module(vec![0, 5]);
        let id = ControlledMorphism::identity(m);
        match quotient_equal(&id, &id, &Subcategory::BoundedLevels { bound: 0 }, None).unwrap() {
            QuotientVerdict::Equal { factor, .. } => assert!(factor.is_empty()),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn deep_difference_is_obstructed() {
        let m = levels_module((0..=64).collect());
        let id = ControlledMorphism::identity(m.clone());
        let zero = ControlledMorphism::zero(m.clone(), m).unwrap();
        for bound in [0, 10, 63] {
            let v = quotient_equal(&id, &zero, &Subcategory::BoundedLevels { bound }, None).unwrap();
            assert!(v.is_not_equal(), "{v:?}");
        }
    }

    #[test]
    fn shallow_difference_factors() {
        let m = levels_module(vec![0, 1, 2, 7]);
        let phi = ControlledMorphism::new(m.clone(), m.clone(), [((0, 1), one()), ((2, 0), one()), ((3, 3), one())]).unwrap();
        let psi = ControlledMorphism::new(m.clone(), m.clone(), [((3, 3), one())]).unwrap();
        let v = quotient_equal(&phi, &psi, &Subcategory::BoundedLevels { bound: 0 }, None).unwrap();
        let QuotientVerdict::Equal { factor, left, right } = v else {
            panic!("{v:?}")
        };
        assert_eq!(factor.len(), 2);
        assert_eq!(right.compose(&left).unwrap(), phi.sub(&psi).unwrap());
    }

    #[test]
    fn gap_case_is_undecided() {
        let m = levels_module(vec![0, 2, 3]);
        let phi = ControlledMorphism::new(m.clone(), m.clone(), [((1, 2), one())]).unwrap();
        let zero = ControlledMorphism::zero(m.clone(), m).unwrap();
        let budget = Propagation {
            space: Dist::default(),
            levels: 3,
        };
        let v = quotient_equal(&phi, &zero, &Subcategory::BoundedLevels { bound: 0 }, Some(budget)).unwrap();
        assert!(matches!(v, QuotientVerdict::Undecided { unresolved: 1 }));
    }

    #[test]
    fn box_component_support() {
        let parts = vec![Arc::new(FiniteMetricSpace::cycle(3)), Arc::new(FiniteMetricSpace::cycle(4))];
        let space = Arc::new(FiniteMetricSpace::box_space(parts));
        let n = space.len();
        let m = Arc::new(GeometricModule::plain(space, (0..n as u32).collect(), vec![0; n], vec![1; n], Ring::Integers).unwrap());
        // adjacency inside the first component only
        let entries = [((0, 1), one()), ((1, 2), one()), ((2, 0), one())];
        let phi = ControlledMorphism::new(m.clone(), m.clone(), entries).unwrap();
        let zero = ControlledMorphism::zero(m.clone(), m).unwrap();
        let v = quotient_equal(&phi, &zero, &Subcategory::SupportedOn { region: vec![0, 1, 2] }, None).unwrap();
        let QuotientVerdict::Equal { factor, .. } = v else {
            panic!("{v:?}")
        };
        assert_eq!(factor.points(), &[0, 1, 2]);
        let far = quotient_equal(&phi, &zero, &Subcategory::SupportedOn { region: vec![3, 4, 5, 6] }, None).unwrap();
        assert!(far.is_not_equal());
    }
}
