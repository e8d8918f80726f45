use serde::{Deserialize, Serialize};

use super::GroupError;

/// A square integer matrix stored row-major.
///
/// The same type backs both integer-matrix elements and residue matrices;
/// the owning group's kind decides whether arithmetic is reduced.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SquareMatrix {
    dim: usize,
    entries: Vec<i64>,
}

impl SquareMatrix {
    pub fn new(dim: usize, entries: Vec<i64>) -> Result<Self, GroupError> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(GroupError::Shape {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Ok(Self { dim, entries })
    }

    /// Builds a matrix from nested rows; panics on ragged input.
    pub fn from_rows<const N: usize>(rows: [[i64; N]; N]) -> Self {
        Self {
            dim: N,
            entries: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1;
        }
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.entries[row * self.dim + col]
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim)
    }

    /// Exact integer product.
    pub fn mul(&self, other: &Self) -> Result<Self, GroupError> {
        self.check_dim(other)?;
        let n = self.dim;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc: i128 = 0;
                for k in 0..n {
                    acc += self.get(i, k) as i128 * other.get(k, j) as i128;
                }
                entries.push(i64::try_from(acc).map_err(|_| GroupError::Overflow)?);
            }
        }
        Ok(Self { dim: n, entries })
    }

    /// Product with every entry reduced into `[0, modulus)`.
    pub fn mul_mod(&self, other: &Self, modulus: u64) -> Result<Self, GroupError> {
        self.check_dim(other)?;
        let n = self.dim;
        let m = modulus as i128;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc: i128 = 0;
                for k in 0..n {
                    acc = (acc + self.get(i, k) as i128 * other.get(k, j) as i128).rem_euclid(m);
                }
                entries.push(acc as i64);
            }
        }
        Ok(Self { dim: n, entries })
    }

    pub fn reduced(&self, modulus: u64) -> Self {
        let m = modulus as i64;
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e.rem_euclid(m)).collect(),
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> i128 {
        bareiss_det(self.dim, self.entries.iter().map(|&e| e as i128).collect())
    }

    /// Classical adjugate, so that `self * adj = det * I`.
    pub fn adjugate(&self) -> Vec<i128> {
        let n = self.dim;
        if n == 1 {
            return vec![1];
        }
        let mut adj = vec![0i128; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut minor = Vec::with_capacity((n - 1) * (n - 1));
                for r in (0..n).filter(|&r| r != i) {
                    for c in (0..n).filter(|&c| c != j) {
                        minor.push(self.get(r, c) as i128);
                    }
                }
                let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                // transpose of the cofactor matrix
                adj[j * n + i] = sign * bareiss_det(n - 1, minor);
            }
        }
        adj
    }

    /// Inverse over the integers; requires determinant ±1.
    pub fn inverse(&self) -> Result<Self, GroupError> {
        let det = self.det();
        if det != 1 && det != -1 {
            return Err(GroupError::NotInvertible(format!("determinant {det}")));
        }
        let entries = self
            .adjugate()
            .into_iter()
            .map(|a| i64::try_from(a * det).map_err(|_| GroupError::Overflow))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { dim: self.dim, entries })
    }

    /// Inverse modulo `modulus`; requires the determinant to be a unit.
    pub fn inverse_mod(&self, modulus: u64) -> Result<Self, GroupError> {
        let m = modulus as i128;
        let det = self.det().rem_euclid(m);
        let det_inv = mod_inverse(det, m).ok_or_else(|| GroupError::NotInvertible(format!("determinant {det} mod {modulus}")))?;
        let entries = self
            .adjugate()
            .into_iter()
            .map(|a| ((a.rem_euclid(m) * det_inv).rem_euclid(m)) as i64)
            .collect();
        Ok(Self { dim: self.dim, entries })
    }

    fn check_dim(&self, other: &Self) -> Result<(), GroupError> {
        if self.dim != other.dim {
            return Err(GroupError::Shape {
                expected: self.dim * self.dim,
                found: other.dim * other.dim,
            });
        }
        Ok(())
    }
}

fn bareiss_det(n: usize, mut a: Vec<i128>) -> i128 {
    if n == 0 {
        return 1;
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k * n + k] == 0 {
            let Some(swap) = (k + 1..n).find(|&r| a[r * n + k] != 0) else {
                return 0;
            };
            for c in 0..n {
                a.swap(k * n + c, swap * n + c);
            }
            sign = -sign;
        }
        let pivot = a[k * n + k];
        for i in k + 1..n {
            for j in k + 1..n {
                a[i * n + j] = (a[i * n + j] * pivot - a[i * n + k] * a[k * n + j]) / prev;
            }
        }
        prev = pivot;
    }
    sign * a[n * n - 1]
}

pub(crate) fn mod_inverse(a: i128, m: i128) -> Option<i128> {
    let (mut old_r, mut r) = (a.rem_euclid(m), m);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m))
}

/// Element payloads. Which variant is valid, and how it multiplies, is
/// fixed by the owning [`super::GroupKind`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupElement {
    /// Freely reduced word; letter `+k` is generator `k-1`, `-k` its inverse.
    Word(Vec<i32>),
    Matrix(SquareMatrix),
    /// Lattice vector, or residue vector for the cyclic kind.
    Vector(Vec<i64>),
    /// Permutation as an image array, composed right-to-left.
    Permutation(Vec<u32>),
}

impl GroupElement {
    pub fn matrix<const N: usize>(rows: [[i64; N]; N]) -> Self {
        Self::Matrix(SquareMatrix::from_rows(rows))
    }

    pub fn as_matrix(&self) -> Option<&SquareMatrix> {
        match self {
            Self::Matrix(m) => Some(m),
            _ => None,
        }
    }
}

pub(crate) fn reduce_word(letters: impl IntoIterator<Item = i32>) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::new();
    for l in letters {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub(crate) fn compose_permutations(g: &[u32], h: &[u32]) -> Vec<u32> {
    h.iter().map(|&x| g[x as usize]).collect()
}

pub(crate) fn invert_permutation(g: &[u32]) -> Vec<u32> {
    let mut inv = vec![0u32; g.len()];
    for (i, &x) in g.iter().enumerate() {
        inv[x as usize] = i as u32;
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_and_inverse_of_unimodular() {
        let a = SquareMatrix::from_rows([[1, 2], [0, 1]]);
        assert_eq!(a.det(), 1);
        let inv = a.inverse().unwrap();
        assert_eq!(inv, SquareMatrix::from_rows([[1, -2], [0, 1]]));
        assert!(a.mul(&inv).unwrap().is_identity());
    }

    #[test]
    fn det_three_by_three() {
        let m = SquareMatrix::from_rows([[2, 0, 1], [1, 3, 2], [1, 1, 1]]);
        // 2*(3-2) - 0 + 1*(1-3) = 0
        assert_eq!(m.det(), 0);
        let m = SquareMatrix::from_rows([[0, 1, 0], [1, 0, 0], [0, 0, 1]]);
        assert_eq!(m.det(), -1);
        assert!(m.mul(&m.inverse().unwrap()).unwrap().is_identity());
    }

    #[test]
    fn modular_inverse_of_matrix() {
        let b = SquareMatrix::from_rows([[1, 0], [2, 1]]);
        let inv = b.inverse_mod(7).unwrap();
        assert_eq!(inv, SquareMatrix::from_rows([[1, 0], [5, 1]]));
        assert!(b.mul_mod(&inv, 7).unwrap().is_identity());
        let singular = SquareMatrix::from_rows([[2, 0], [0, 3]]);
        assert!(singular.inverse_mod(6).is_err());
    }

    #[test]
    fn word_reduction_cancels() {
        assert_eq!(reduce_word([1, 2, -2, -1, 3]), vec![3]);
        assert!(reduce_word([1, -1]).is_empty());
    }

    #[test]
    fn mod_inverse_small() {
        assert_eq!(mod_inverse(3, 7), Some(5));
        assert_eq!(mod_inverse(2, 4), None);
    }
}
