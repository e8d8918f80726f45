use std::sync::Arc;

use super::{FiniteGroup, GroupError};

/// An action of a finite group on `0..degree`, stored as one permutation
/// per group element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAction {
    group: Arc<FiniteGroup>,
    degree: usize,
    images: Vec<u32>,
}

impl GroupAction {
    /// Checks that `act(g, x)` defines a left action.
    pub fn new(group: Arc<FiniteGroup>, degree: usize, act: impl Fn(usize, usize) -> usize) -> Result<Self, GroupError> {
        let mut images = Vec::with_capacity(group.order() * degree);
        for g in group.elements() {
            for x in 0..degree {
                let y = act(g, x);
                if y >= degree {
                    return Err(GroupError::InvalidAction(format!("{g}.{x} = {y} out of range")));
                }
                images.push(y as u32);
            }
        }
        let action = Self { group, degree, images };
        action.check()?;
        Ok(action)
    }

    /// The action of the trivial group.
    pub fn trivial(degree: usize) -> Self {
        Self {
            group: Arc::new(FiniteGroup::trivial()),
            degree,
            images: (0..degree as u32).collect(),
        }
    }

    /// Left multiplication of a group on itself.
    pub fn left_regular(group: Arc<FiniteGroup>) -> Self {
        let n = group.order();
        let images = (0..n * n).map(|i| group.mul(i / n, i % n) as u32).collect();
        Self { group, degree: n, images }
    }

    fn check(&self) -> Result<(), GroupError> {
        for x in 0..self.degree {
            if self.act(0, x) != x {
                return Err(GroupError::InvalidAction("identity moves a point".into()));
            }
        }
        for g in self.group.elements() {
            let mut seen = vec![false; self.degree];
            for x in 0..self.degree {
                let y = self.act(g, x);
                if std::mem::replace(&mut seen[y], true) {
                    return Err(GroupError::InvalidAction(format!("element {g} is not a bijection")));
                }
            }
            for h in self.group.elements() {
                for x in 0..self.degree {
                    if self.act(self.group.mul(g, h), x) != self.act(g, self.act(h, x)) {
                        return Err(GroupError::InvalidAction(format!("({g}*{h}).{x}")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    #[inline]
    pub fn act(&self, g: usize, x: usize) -> usize {
        self.images[g * self.degree + x] as usize
    }

    /// No non-identity element fixes a point.
    pub fn is_free(&self) -> bool {
        (1..self.group.order()).all(|g| (0..self.degree).all(|x| self.act(g, x) != x))
    }

    /// Orbits, each listed with its minimal point first, ordered by that point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for x in 0..self.degree {
            if seen[x] {
                continue;
            }
            let mut orbit: Vec<usize> = self.group.elements().map(|g| self.act(g, x)).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &y in &orbit {
                seen[y] = true;
            }
            out.push(orbit);
        }
        out
    }

    /// For each point, the index of its orbit in [`Self::orbits`].
    pub fn orbit_ids(&self) -> Vec<usize> {
        let mut ids = vec![0; self.degree];
        for (i, orbit) in self.orbits().iter().enumerate() {
            for &x in orbit {
                ids[x] = i;
            }
        }
        ids
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_action_is_free_and_transitive() {
        let g = Arc::new(FiniteGroup::symmetric(3));
        let a = GroupAction::left_regular(g);
        assert!(a.is_free());
        assert_eq!(a.orbits().len(), 1);
    }

    #[test]
    fn antipode_on_eight_cycle() {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let a = GroupAction::new(g, 8, |g, x| (x + 4 * g) % 8).unwrap();
        assert!(a.is_free());
        assert_eq!(a.orbits()[0], vec![0, 4]);
        assert_eq!(a.orbit_ids()[5], 1);
    }

    #[test]
    fn bad_action_rejected() {
        let g = Arc::new(FiniteGroup::cyclic(3));
        // x -> x + g on 4 points is not an action of Z/3
        assert!(GroupAction::new(g, 4, |g, x| (x + g) % 4).is_err());
    }
}
