use serde::Serialize;

use super::{ControlledMorphism, Decoration, GeometricModule, Propagation, Support};
use crate::metric::Dist;

/// What failed a property check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// A nonzero entry `(s, s')`.
    Entry { source: usize, target: usize },
    /// An index of the source module.
    Source { index: usize },
    /// An index of the target module.
    Target { index: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyCheck {
    /// Position in the list of control properties, 1 to 9.
    pub property: u8,
    pub name: &'static str,
    pub passed: bool,
    pub witness: Option<Witness>,
}

impl PropertyCheck {
    fn new(property: u8, name: &'static str, witness: Option<Witness>) -> Self {
        Self {
            property,
            name,
            passed: witness.is_none(),
            witness,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecorationReport {
    pub checks: Vec<PropertyCheck>,
    pub propagation: Propagation,
    /// `(ε, t0)`: the smallest `t0 >= 0` such that every nonzero entry
    /// leaving level `> t0` moves less than `ε` in the space.
    pub control_profile: Vec<(Dist, u32)>,
}

impl DecorationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, property: u8) -> Option<&PropertyCheck> {
        self.checks.iter().find(|c| c.property == property)
    }

    /// Whether `t0` never decreases as `ε` shrinks along the grid.
    pub fn profile_monotone(&self) -> bool {
        self.control_profile.windows(2).all(|w| w[0].1 <= w[1].1)
    }
}

/// `1, 1/2, ..., 1/2^steps`.
pub fn epsilon_grid(steps: u32) -> Vec<Dist> {
    (0..=steps).map(|k| Dist::new(1, 1i64 << k.min(62))).collect()
}

/// Checks a morphism against the requested decoration. The structural
/// properties (finiteness, bounded propagation) always hold for finite
/// data and are reported as passed; the profile is computed on `grid`.
pub fn check_decoration(phi: &ControlledMorphism, flags: &Decoration, grid: &[Dist]) -> DecorationReport {
    let (src, dst) = (phi.source(), phi.target());
    let space = src.space();
    let mut checks = vec![
        PropertyCheck::new(1, "locally-finite", None),
        PropertyCheck::new(2, "finite-rows-and-columns", None),
        PropertyCheck::new(3, "bounded-level-propagation", None),
        PropertyCheck::new(4, "bounded-space-propagation", None),
        PropertyCheck::new(5, "asymptotic-space-control", None),
    ];
    let entries: Vec<(usize, usize)> = phi.entries().keys().map(|&(s, t)| (s as usize, t as usize)).collect();
    let entry_witness = |pred: &dyn Fn(usize, usize) -> bool| {
        entries
            .iter()
            .find(|&&(s, t)| pred(s, t))
            .map(|&(s, t)| Witness::Entry { source: s, target: t })
    };

    if flags.concentrated {
        let w = entry_witness(&|s, t| src.point(s) != dst.point(t));
        checks.push(PropertyCheck::new(6, "concentrated", w));
    }
    if let Support::Compact { region } = &flags.support {
        let mut inside = vec![false; space.len()];
        for &x in region {
            if let Some(slot) = inside.get_mut(x as usize) {
                *slot = true;
            }
        }
        let w = index_witness(src, dst, &|m, s| !inside[m.point(s)]);
        checks.push(PropertyCheck::new(7, "compact-support", w));
    }
    if let Some(bound) = flags.letter.max_level() {
        let w = entry_witness(&|s, t| src.level(s) > bound || dst.level(t) > bound)
            .or_else(|| index_witness(src, dst, &|m, s| m.level(s) > bound));
        let (property, name) = if flags.letter == super::Letter::C {
            (9, "levels-zero")
        } else {
            (8, "finite-level-image")
        };
        checks.push(PropertyCheck::new(property, name, w));
    }

    let control_profile = grid
        .iter()
        .map(|&eps| {
            let t0 = entries
                .iter()
                .filter(|&&(s, t)| space.dist(src.point(s), dst.point(t)) >= eps)
                .map(|&(s, _)| src.level(s))
                .max()
                .unwrap_or(0);
            (eps, t0)
        })
        .collect();
    DecorationReport {
        checks,
        propagation: phi.propagation(),
        control_profile,
    }
}

fn index_witness(src: &GeometricModule, dst: &GeometricModule, bad: &dyn Fn(&GeometricModule, usize) -> bool) -> Option<Witness> {
    (0..src.len())
        .find(|&s| bad(src, s))
        .map(|index| Witness::Source { index })
        .or_else(|| (0..dst.len()).find(|&t| bad(dst, t)).map(|index| Witness::Target { index }))
}

/// Object-level checks: compact support and level restrictions.
pub fn check_module_decoration(module: &GeometricModule, flags: &Decoration) -> DecorationReport {
    let id = ControlledMorphism::zero_endo(module);
    let mut report = check_decoration(&id, flags, &[]);
    report.checks.retain(|c| c.property == 1 || c.property >= 7);
    for c in &mut report.checks {
        if let Some(Witness::Target { index }) = c.witness {
            c.witness = Some(Witness::Source { index });
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::FiniteMetricSpace;
    use crate::modules::{CoeffMatrix, Letter, Ring};
    use num_traits::Signed;
    use std::sync::Arc;

    fn one() -> CoeffMatrix {
        CoeffMatrix::identity(1)
    }

    #[test]
    fn grid_halves() {
        assert_eq!(epsilon_grid(2), vec![Dist::new(1, 1), Dist::new(1, 2), Dist::new(1, 4)]);
    }

    #[test]
    fn level_moving_morphism_fails_levels_zero() {
        let space = Arc::new(FiniteMetricSpace::path(2));
        let m = Arc::new(GeometricModule::plain(space, vec![0, 1], vec![0, 1], vec![1, 1], Ring::Integers).unwrap());
        let phi = ControlledMorphism::new(m.clone(), m.clone(), [((0, 1), one())]).unwrap();
        let report = check_decoration(&phi, &Decoration::letter(Letter::C), &epsilon_grid(3));
        let c9 = report.check(9).unwrap();
        assert!(!c9.passed);
        assert_eq!(c9.witness, Some(Witness::Entry { source: 0, target: 1 }));
        let module_report = check_module_decoration(&m, &Decoration::letter(Letter::C));
        assert_eq!(module_report.check(9).unwrap().witness, Some(Witness::Source { index: 1 }));
    }

    #[test]
    fn concentrated_morphism_passes() {
        let space = Arc::new(FiniteMetricSpace::path(3));
        let m = Arc::new(GeometricModule::plain(space, vec![0, 0, 2], vec![0, 4, 1], vec![1, 1, 1], Ring::Integers).unwrap());
        let phi = ControlledMorphism::new(m.clone(), m.clone(), [((0, 1), one()), ((2, 2), one())]).unwrap();
        let flags = Decoration {
            concentrated: true,
            ..Decoration::default()
        };
        assert!(check_decoration(&phi, &flags, &[]).passed());
        let psi = ControlledMorphism::new(m.clone(), m, [((0, 2), one())]).unwrap();
        let r = check_decoration(&psi, &flags, &[]);
        assert_eq!(r.check(6).unwrap().witness, Some(Witness::Entry { source: 0, target: 2 }));
    }

    #[test]
    fn geometric_decay_profile() {
        // points at positions 0 and 1/2^k; the entry at level 2^k moves by 1/2^k
        let k = 5usize;
        let pos: Vec<Dist> = std::iter::once(Dist::from_integer(0))
            .chain((0..k).map(|j| Dist::new(1, 1 << j)))
            .collect();
        let n = pos.len();
        let matrix = (0..n * n).map(|i| (pos[i / n] - pos[i % n]).abs()).collect();
        let space = Arc::new(FiniteMetricSpace::from_matrix(n, matrix).unwrap());
        let mut points = Vec::new();
        let mut levels = Vec::new();
        for j in 0..k {
            points.extend([0, j as u32 + 1]);
            levels.extend([1u32 << j, 1 << j]);
        }
        let m = Arc::new(GeometricModule::plain(space, points, levels, vec![1; 2 * k], Ring::Integers).unwrap());
        let entries = (0..k).map(|j| ((2 * j, 2 * j + 1), one()));
        let phi = ControlledMorphism::new(m.clone(), m, entries).unwrap();
        let report = check_decoration(&phi, &Decoration::default(), &epsilon_grid(4));
        let t0: Vec<u32> = report.control_profile.iter().map(|p| p.1).collect();
        assert_eq!(t0, vec![1, 2, 4, 8, 16]);
        assert!(report.profile_monotone());
        assert!(report.passed());
    }

    #[test]
    fn compact_support_witness() {
        let space = Arc::new(FiniteMetricSpace::path(3));
        let m = Arc::new(GeometricModule::plain(space, vec![0, 2], vec![0, 0], vec![1, 1], Ring::Integers).unwrap());
        let id = ControlledMorphism::identity(m.clone());
        let r = check_decoration(&id, &Decoration::compact(vec![0, 1]), &[]);
        assert_eq!(r.check(7).unwrap().witness, Some(Witness::Source { index: 1 }));
    }
}
