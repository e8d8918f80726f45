use serde::{Deserialize, Serialize};

use super::element::{compose_permutations, invert_permutation, reduce_word, SquareMatrix};
use super::{GroupElement, GroupError};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GroupKind {
    FreeWord {
        rank: usize,
    },
    IntegerMatrix {
        dim: usize,
    },
    ModularMatrix {
        dim: usize,
        modulus: u64,
    },
    /// The lattice Z^rank under addition.
    Lattice {
        rank: usize,
    },
    /// (Z/modulus)^rank; rank 1 is the cyclic group.
    Cyclic {
        modulus: u64,
        rank: usize,
    },
    Permutation {
        degree: usize,
    },
}

impl GroupKind {
    pub fn is_finite(&self) -> bool {
        matches!(self, Self::ModularMatrix { .. } | Self::Cyclic { .. } | Self::Permutation { .. })
    }

    fn name(&self) -> &'static str {
        match self {
            Self::FreeWord { .. } => "free-word",
            Self::IntegerMatrix { .. } => "integer-matrix",
            Self::ModularMatrix { .. } => "modular-matrix",
            Self::Lattice { .. } => "lattice",
            Self::Cyclic { .. } => "cyclic",
            Self::Permutation { .. } => "permutation",
        }
    }
}

/// A group given by concrete element arithmetic and an ordered list of
/// generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinGenGroup {
    #[serde(flatten)]
    kind: GroupKind,
    generators: Vec<GroupElement>,
}

impl FinGenGroup {
    pub fn new(kind: GroupKind, generators: Vec<GroupElement>) -> Result<Self, GroupError> {
        let group = Self { kind, generators };
        for g in &group.generators {
            group.check_member(g)?;
            group.inverse(g)?;
        }
        Ok(group)
    }

    /// The free group on `rank` letters with its standard basis.
    pub fn free(rank: usize) -> Self {
        Self {
            kind: GroupKind::FreeWord { rank },
            generators: (1..=rank as i32).map(|l| GroupElement::Word(vec![l])).collect(),
        }
    }

    /// Z^rank with the standard basis.
    pub fn lattice(rank: usize) -> Self {
        let generators = (0..rank)
            .map(|i| {
                let mut v = vec![0; rank];
                v[i] = 1;
                GroupElement::Vector(v)
            })
            .collect();
        Self {
            kind: GroupKind::Lattice { rank },
            generators,
        }
    }

    /// Z/n generated by 1.
    pub fn cyclic(n: u64) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::InvalidModulus(n));
        }
        let one = if n == 1 { 0 } else { 1 };
        Ok(Self {
            kind: GroupKind::Cyclic { modulus: n, rank: 1 },
            generators: vec![GroupElement::Vector(vec![one])],
        })
    }

    /// The subgroup of SL2(Z) generated by `A = (1 2; 0 1)` and `B = (1 0; 2 1)`.
    pub fn sanov() -> Self {
        Self {
            kind: GroupKind::IntegerMatrix { dim: 2 },
            generators: vec![GroupElement::matrix([[1, 2], [0, 1]]), GroupElement::matrix([[1, 0], [2, 1]])],
        }
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn is_finite(&self) -> bool {
        self.kind.is_finite()
    }

    pub fn identity(&self) -> GroupElement {
        match &self.kind {
            GroupKind::FreeWord { .. } => GroupElement::Word(Vec::new()),
            GroupKind::IntegerMatrix { dim } | GroupKind::ModularMatrix { dim, .. } => GroupElement::Matrix(SquareMatrix::identity(*dim)),
            GroupKind::Lattice { rank } | GroupKind::Cyclic { rank, .. } => GroupElement::Vector(vec![0; *rank]),
            GroupKind::Permutation { degree } => GroupElement::Permutation((0..*degree as u32).collect()),
        }
    }

    pub fn is_identity(&self, g: &GroupElement) -> bool {
        *g == self.identity()
    }

    /// Checks that `g` is a well-formed element of this group's kind.
    pub fn check_member(&self, g: &GroupElement) -> Result<(), GroupError> {
        let ok = match (&self.kind, g) {
            (GroupKind::FreeWord { rank }, GroupElement::Word(w)) => {
                w.iter().all(|&l| l != 0 && l.unsigned_abs() as usize <= *rank) && reduce_word(w.iter().copied()) == *w
            }
            (GroupKind::IntegerMatrix { dim }, GroupElement::Matrix(m)) => m.dim() == *dim && matches!(m.det(), 1 | -1),
            (GroupKind::ModularMatrix { dim, modulus }, GroupElement::Matrix(m)) => {
                m.dim() == *dim && m.entries().iter().all(|&e| e >= 0 && (e as u64) < *modulus)
            }
            (GroupKind::Lattice { rank }, GroupElement::Vector(v)) => v.len() == *rank,
            (GroupKind::Cyclic { modulus, rank }, GroupElement::Vector(v)) => {
                v.len() == *rank && v.iter().all(|&e| e >= 0 && (e as u64) < *modulus)
            }
            (GroupKind::Permutation { degree }, GroupElement::Permutation(p)) => {
                let mut seen = vec![false; *degree];
                p.len() == *degree
                    && p.iter()
                        .all(|&x| (x as usize) < *degree && !std::mem::replace(&mut seen[x as usize], true))
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(GroupError::KindMismatch {
                kind: self.kind.name(),
                element: format!("{g:?}"),
            })
        }
    }

    pub fn multiply(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement, GroupError> {
        use GroupElement as E;
        let product = match (&self.kind, g, h) {
            (GroupKind::FreeWord { .. }, E::Word(a), E::Word(b)) => E::Word(reduce_word(a.iter().chain(b).copied())),
            (GroupKind::IntegerMatrix { .. }, E::Matrix(a), E::Matrix(b)) => E::Matrix(a.mul(b)?),
            (GroupKind::ModularMatrix { modulus, .. }, E::Matrix(a), E::Matrix(b)) => E::Matrix(a.mul_mod(b, *modulus)?),
            (GroupKind::Lattice { .. }, E::Vector(a), E::Vector(b)) if a.len() == b.len() => E::Vector(
                a.iter()
                    .zip(b)
                    .map(|(x, y)| x.checked_add(*y).ok_or(GroupError::Overflow))
                    .collect::<Result<_, _>>()?,
            ),
            (GroupKind::Cyclic { modulus, .. }, E::Vector(a), E::Vector(b)) if a.len() == b.len() => {
                let m = *modulus as i64;
                E::Vector(a.iter().zip(b).map(|(x, y)| (x + y).rem_euclid(m)).collect())
            }
            (GroupKind::Permutation { .. }, E::Permutation(a), E::Permutation(b)) if a.len() == b.len() => {
                E::Permutation(compose_permutations(a, b))
            }
            _ => {
                let bad = if self.check_member(g).is_err() { g } else { h };
                return Err(GroupError::KindMismatch {
                    kind: self.kind.name(),
                    element: format!("{bad:?}"),
                });
            }
        };
        Ok(product)
    }

    pub fn inverse(&self, g: &GroupElement) -> Result<GroupElement, GroupError> {
        use GroupElement as E;
        Ok(match (&self.kind, g) {
            (GroupKind::FreeWord { .. }, E::Word(w)) => E::Word(w.iter().rev().map(|l| -l).collect()),
            (GroupKind::IntegerMatrix { .. }, E::Matrix(m)) => E::Matrix(m.inverse()?),
            (GroupKind::ModularMatrix { modulus, .. }, E::Matrix(m)) => E::Matrix(m.inverse_mod(*modulus)?),
            (GroupKind::Lattice { .. }, E::Vector(v)) => E::Vector(v.iter().map(|x| -x).collect()),
            (GroupKind::Cyclic { modulus, .. }, E::Vector(v)) => {
                let m = *modulus as i64;
                E::Vector(v.iter().map(|x| (-x).rem_euclid(m)).collect())
            }
            (GroupKind::Permutation { .. }, E::Permutation(p)) => E::Permutation(invert_permutation(p)),
            _ => {
                return Err(GroupError::KindMismatch {
                    kind: self.kind.name(),
                    element: format!("{g:?}"),
                })
            }
        })
    }

    /// Generators followed by their inverses, with duplicates and the
    /// identity removed, in first-occurrence order.
    ///
    /// Word metrics in this crate are always taken with respect to this
    /// symmetric set.
    pub fn symmetric_generators(&self) -> Vec<GroupElement> {
        let id = self.identity();
        let mut out: Vec<GroupElement> = Vec::new();
        let inverses: Vec<GroupElement> = self
            .generators
            .iter()
            .map(|g| self.inverse(g).expect("generators are invertible"))
            .collect();
        for g in self.generators.iter().chain(&inverses) {
            if *g != id && !out.contains(g) {
                out.push(g.clone());
            }
        }
        out
    }

    /// Evaluates a word over the generators (`+k`/`-k` letters).
    pub fn evaluate_word(&self, word: &[i32]) -> Result<GroupElement, GroupError> {
        let mut acc = self.identity();
        for &l in word {
            let idx = l.unsigned_abs() as usize;
            if l == 0 || idx > self.generators.len() {
                return Err(GroupError::BadLetter(l));
            }
            let g = &self.generators[idx - 1];
            let factor = if l > 0 { g.clone() } else { self.inverse(g)? };
            acc = self.multiply(&acc, &factor)?;
        }
        Ok(acc)
    }

    pub fn power(&self, g: &GroupElement, exponent: u32) -> Result<GroupElement, GroupError> {
        let mut acc = self.identity();
        for _ in 0..exponent {
            acc = self.multiply(&acc, g)?;
        }
        Ok(acc)
    }
}

/// Reduces an integer matrix entrywise into `[0, modulus)`.
///
/// The input must be unimodular (determinant ±1); the residue then has
/// determinant congruent to the original one.
pub fn reduce_mod(g: &GroupElement, modulus: u64) -> Result<GroupElement, GroupError> {
    if modulus < 2 {
        return Err(GroupError::InvalidModulus(modulus));
    }
    let m = g.as_matrix().ok_or_else(|| GroupError::KindMismatch {
        kind: "integer-matrix",
        element: format!("{g:?}"),
    })?;
    let det = m.det();
    if det != 1 && det != -1 {
        return Err(GroupError::NotUnimodular(det));
    }
    Ok(GroupElement::Matrix(m.reduced(modulus)))
}
