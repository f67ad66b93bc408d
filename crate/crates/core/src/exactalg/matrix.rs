use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{AlgError, Scalar};

/// Dense row-major matrix over the rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.set(i, i, Scalar::one());
        }
        m
    }

    /// Builds a matrix from explicit rows. An empty row list gives a `0 x cols`
    /// matrix with `cols = 0`.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self, AlgError> {
        let cols = rows.first().map_or(0, Vec::len);
        let n_rows = rows.len();
        let mut data = Vec::with_capacity(n_rows * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(AlgError::RaggedRows {
                    row: i,
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(RatMatrix {
            rows: n_rows,
            cols,
            data,
        })
    }

    /// Like [`RatMatrix::from_rows`] but keeps the column count when there are
    /// no rows.
    pub fn from_rows_with_cols(rows: Vec<Vec<Scalar>>, cols: usize) -> Result<Self, AlgError> {
        if rows.is_empty() {
            return Ok(Self::zeros(0, cols));
        }
        let m = Self::from_rows(rows)?;
        if m.cols != cols {
            return Err(AlgError::RaggedRows {
                row: 0,
                expected: cols,
                found: m.cols,
            });
        }
        Ok(m)
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self, AlgError> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| super::scalar(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Scalar) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &RatMatrix) -> Result<Self, AlgError> {
        if self.cols != other.cols {
            return Err(self.mismatch(other));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(RatMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// `a * self + b * other`, entrywise.
    pub fn combine(&self, a: &Scalar, other: &RatMatrix, b: &Scalar) -> Result<Self, AlgError> {
        if self.shape() != other.shape() {
            return Err(self.mismatch(other));
        }
        Ok(RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        })
    }

    pub(crate) fn mismatch(&self, other: &RatMatrix) -> AlgError {
        AlgError::DimensionMismatch {
            left_rows: self.rows,
            left_cols: self.cols,
            right_rows: other.rows,
            right_cols: other.cols,
        }
    }

    /// Exact rank by fraction-free (Bareiss) elimination. Rows are first
    /// cleared of denominators so that every intermediate value is an
    /// integer and every division is exact.
    pub fn rank(&self) -> usize {
        let mut a: Vec<Vec<BigInt>> = (0..self.rows).map(|r| integer_row(self.row(r))).collect();
        let (rows, cols) = (self.rows, self.cols);
        let mut prev = BigInt::one();
        let mut rank = 0;
        for col in 0..cols {
            if rank == rows {
                break;
            }
            let Some(p) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            for r in rank + 1..rows {
                for c in col + 1..cols {
                    let v = &a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c];
                    a[r][c] = v / &prev;
                }
                a[r][col] = BigInt::zero();
            }
            prev = a[rank][col].clone();
            rank += 1;
        }
        rank
    }

    /// Reduced row echelon form by Gauss-Jordan over the rationals, with the
    /// list of pivot columns. Zero rows are dropped.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut a = self.to_rows();
        let mut pivots = Vec::new();
        let mut pr = 0;
        for col in 0..self.cols {
            if pr == self.rows {
                break;
            }
            let Some(p) = (pr..self.rows).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(pr, p);
            let inv = a[pr][col].recip();
            for x in a[pr].iter_mut() {
                *x = &*x * &inv;
            }
            let pivot = a[pr].clone();
            for (r, row) in a.iter_mut().enumerate() {
                if r == pr || row[col].is_zero() {
                    continue;
                }
                let factor = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x -= &factor * p;
                }
            }
            pivots.push(col);
            pr += 1;
        }
        a.truncate(pr);
        let m = RatMatrix::from_rows_with_cols(a, self.cols).expect("rows keep their width");
        (m, pivots)
    }

    /// Dimension of the right kernel `{v : self * v = 0}`.
    pub fn kernel_dim(&self) -> usize {
        self.cols - self.rank()
    }
}

/// Clears denominators of a rational row, giving a proportional integer row.
fn integer_row(row: &[Scalar]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                let x = self.get(r, c);
                if x.is_negative() {
                    write!(f, "-{}", -x)?;
                } else {
                    write!(f, "{x}")?;
                }
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::ratio;

    #[test]
    fn rank_examples() {
        assert_eq!(RatMatrix::identity(2).rank(), 2);
        assert_eq!(RatMatrix::zeros(3, 4).rank(), 0);
        assert_eq!(RatMatrix::from_i64(&[&[1, 2], &[2, 4]]).unwrap().rank(), 1);
    }

    #[test]
    fn rank_with_fractions() {
        let m = RatMatrix::from_rows(vec![
            vec![ratio(1, 2), ratio(1, 3)],
            vec![ratio(3, 2), ratio(1, 1)],
        ])
        .unwrap();
        assert_eq!(m.rank(), 1);
        assert_eq!(m.rref().1, vec![0]);
    }

    #[test]
    fn rref_is_canonical() {
        let a = RatMatrix::from_i64(&[&[2, 4, 0], &[0, 0, 3]]).unwrap();
        let b = RatMatrix::from_i64(&[&[1, 2, 3], &[1, 2, -3]]).unwrap();
        assert_eq!(a.rref().0, b.rref().0);
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = RatMatrix::from_rows(vec![vec![ratio(1, 1)], vec![]]).unwrap_err();
        assert!(matches!(err, AlgError::RaggedRows { row: 1, .. }));
    }

    #[test]
    fn vstack_mismatch() {
        let a = RatMatrix::zeros(1, 2);
        let b = RatMatrix::zeros(1, 3);
        assert!(matches!(
            a.vstack(&b),
            Err(AlgError::DimensionMismatch { .. })
        ));
    }
}
