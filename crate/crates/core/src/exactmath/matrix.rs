use std::fmt;

use super::PrimeField;
use crate::error::{Error, Result};

/// Dense row-major matrix over a prime field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self { rows: rows.len(), cols, data: rows.concat() }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn select_rows(&self, range: std::ops::Range<usize>) -> Matrix {
        assert!(range.end <= self.rows);
        Matrix {
            rows: range.len(),
            cols: self.cols,
            data: self.data[range.start * self.cols..range.end * self.cols].to_vec(),
        }
    }

    pub fn mul_vec(&self, f: &PrimeField, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    pub fn mul(&self, f: &PrimeField, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(l, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Reduce in place to reduced row echelon form; returns pivot columns.
    pub fn rref_in_place(&mut self, f: &PrimeField) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            if pr != row {
                for c in 0..self.cols {
                    self.data.swap(pr * self.cols + c, row * self.cols + c);
                }
            }
            let inv = f.inv(self.get(row, col)).expect("pivot is nonzero");
            for c in col..self.cols {
                let v = f.mul(self.get(row, c), inv);
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let factor = self.get(r, col);
                if factor == 0 {
                    continue;
                }
                for c in col..self.cols {
                    let v = f.sub(self.get(r, c), f.mul(factor, self.get(row, c)));
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rref(&self, f: &PrimeField) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let piv = m.rref_in_place(f);
        (m, piv)
    }

    /// Exact rank by Gaussian elimination.
    pub fn rank(&self, f: &PrimeField) -> usize {
        // forward elimination only
        let mut m = self.clone();
        for v in m.data.iter_mut() {
            *v = f.reduce(*v);
        }
        let mut rank = 0;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(pr) = (rank..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            if pr != rank {
                for c in 0..m.cols {
                    m.data.swap(pr * m.cols + c, rank * m.cols + c);
                }
            }
            let inv = f.inv(m.get(rank, col)).expect("pivot is nonzero");
            for r in rank + 1..m.rows {
                let factor = f.mul(m.get(r, col), inv);
                if factor == 0 {
                    continue;
                }
                for c in col..m.cols {
                    let v = f.sub(m.get(r, c), f.mul(factor, m.get(rank, c)));
                    m.set(r, c, v);
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn inverse(&self, f: &PrimeField) -> Result<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, 1);
        }
        let piv = aug.rref_in_place(f);
        if piv.len() < n || piv[n - 1] >= n {
            return Err(Error::RankDeficient { rank: self.rank(f), expected: n });
        }
        let mut out = Matrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                out.set(r, c, aug.get(r, n + c));
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_examples() {
        let f = PrimeField::new(1009).unwrap();
        assert_eq!(Matrix::identity(4).rank(&f), 4);
        assert_eq!(Matrix::zeros(3, 5).rank(&f), 0);
        let m = Matrix::from_rows(&[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]);
        assert_eq!(m.rank(&f), 2);
    }

    #[test]
    fn rank_depends_on_characteristic() {
        // det = 2, singular over F_2 only
        let m = Matrix::from_rows(&[vec![1, 1], vec![1, 3]]);
        assert_eq!(m.rank(&PrimeField::new(2).unwrap()), 1);
        assert_eq!(m.rank(&PrimeField::new(3).unwrap()), 2);
    }

    #[test]
    fn rref_is_canonical() {
        let f = PrimeField::new(7).unwrap();
        let a = Matrix::from_rows(&[vec![2, 4, 1, 0], vec![1, 2, 0, 3]]);
        // same row space, different basis
        let b = Matrix::from_rows(&[vec![3, 6, 1, 3], vec![1, 2, 4, 0]]);
        let (ra, pa) = a.rref(&f);
        let (rb, pb) = b.rref(&f);
        assert_eq!(ra, rb);
        assert_eq!(pa, vec![0, 2]);
        assert_eq!(pa, pb);
    }

    #[test]
    fn inverse_round_trip() {
        let f = PrimeField::new(11).unwrap();
        let m = Matrix::from_rows(&[vec![1, 2, 0], vec![0, 1, 5], vec![3, 0, 1]]);
        let inv = m.inverse(&f).unwrap();
        assert_eq!(m.mul(&f, &inv), Matrix::identity(3));
        let sing = Matrix::from_rows(&[vec![1, 2], vec![2, 4]]);
        assert!(sing.inverse(&f).is_err());
    }
}
