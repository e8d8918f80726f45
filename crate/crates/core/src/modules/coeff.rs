use serde::{Deserialize, Serialize};

use super::ModuleError;

/// Base ring of the free coefficient modules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ring {
    Integers,
    /// `Z/m` with representatives in `[0, m)`.
    Mod(u64),
}

impl Ring {
    pub fn reduce(self, x: i128) -> Result<i64, ModuleError> {
        match self {
            Ring::Integers => i64::try_from(x).map_err(|_| ModuleError::Overflow),
            Ring::Mod(m) => Ok(x.rem_euclid(m as i128) as i64),
        }
    }

    /// Number of ring elements, if finite.
    pub fn size(self) -> Option<u64> {
        match self {
            Ring::Integers => None,
            Ring::Mod(m) => Some(m),
        }
    }
}

/// A `rows x cols` matrix over a [`Ring`], mapping a rank-`cols` free
/// module to a rank-`rows` one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CoeffMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl CoeffMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(rank: usize) -> Self {
        let mut m = Self::zeros(rank, rank);
        for i in 0..rank {
            m.data[i * rank + i] = 1;
        }
        m
    }

    /// Builds from row-major data, reducing into the ring.
    pub fn new(rows: usize, cols: usize, data: Vec<i64>, ring: Ring) -> Result<Self, ModuleError> {
        if data.len() != rows * cols {
            return Err(ModuleError::Shape {
                expected: (rows, cols),
                found: (data.len(), 1),
            });
        }
        let data = data.into_iter().map(|x| ring.reduce(x as i128)).collect::<Result<_, _>>()?;
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<i64>], ring: Ring) -> Result<Self, ModuleError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(ModuleError::Shape {
                expected: (rows.len(), cols),
                found: (rows.len(), 0),
            });
        }
        Self::new(rows.len(), cols, rows.concat(), ring)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    pub fn data(&self) -> &[i64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows)
            .map(|r| self.data[r * self.cols..(r + 1) * self.cols].to_vec())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    fn same_shape(&self, other: &Self) -> Result<(), ModuleError> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(ModuleError::Shape {
                expected: (self.rows, self.cols),
                found: (other.rows, other.cols),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self, ring: Ring) -> Result<Self, ModuleError> {
        self.same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| ring.reduce(a as i128 + b as i128))
            .collect::<Result<_, _>>()?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn neg(&self, ring: Ring) -> Result<Self, ModuleError> {
        let data = self.data.iter().map(|&a| ring.reduce(-(a as i128))).collect::<Result<_, _>>()?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn sub(&self, other: &Self, ring: Ring) -> Result<Self, ModuleError> {
        self.add(&other.neg(ring)?, ring)
    }

    /// The composite `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self, ring: Ring) -> Result<Self, ModuleError> {
        if self.cols != other.rows {
            return Err(ModuleError::Shape {
                expected: (self.cols, other.cols),
                found: (other.rows, other.cols),
            });
        }
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc: i128 = 0;
                for k in 0..self.cols {
                    acc += self.get(i, k) as i128 * other.get(k, j) as i128;
                }
                data.push(ring.reduce(acc)?);
            }
        }
        Ok(Self {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_mod_m() {
        let m = CoeffMatrix::new(1, 2, vec![-1, 7], Ring::Mod(5)).unwrap();
        assert_eq!(m.data(), &[4, 2]);
    }

    #[test]
    fn compose_is_matrix_product() {
        let a = CoeffMatrix::from_rows(&[vec![1, 2], vec![0, 1]], Ring::Integers).unwrap();
        let b = CoeffMatrix::from_rows(&[vec![3], vec![4]], Ring::Integers).unwrap();
        assert_eq!(a.compose(&b, Ring::Integers).unwrap().to_rows(), vec![vec![11], vec![4]]);
        assert!(b.compose(&a, Ring::Integers).is_err());
    }

    #[test]
    fn cancelling_rank_one_products() {
        let row = CoeffMatrix::from_rows(&[vec![1, 1]], Ring::Integers).unwrap();
        let col = CoeffMatrix::from_rows(&[vec![1], vec![-1]], Ring::Integers).unwrap();
        assert!(row.compose(&col, Ring::Integers).unwrap().is_zero());
    }

    #[test]
    fn integer_overflow_is_reported() {
        let big = CoeffMatrix::new(1, 1, vec![i64::MAX], Ring::Integers).unwrap();
        assert!(matches!(big.add(&big, Ring::Integers), Err(ModuleError::Overflow)));
    }

    #[test]
    fn zero_width_rows() {
        let z = CoeffMatrix::zeros(2, 0);
        assert_eq!(z.to_rows(), vec![Vec::<i64>::new(), Vec::new()]);
    }
}
