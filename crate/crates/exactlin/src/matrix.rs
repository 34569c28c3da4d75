use crate::{FpScalar, LinError, PrimeField};
use std::fmt;

/// Dense row-major matrix of residues. Acts on column vectors.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FpScalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{:?}", self.row(r))?;
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

    /// Builds a matrix from integer rows, reducing mod `p`.
    pub fn from_rows_i64(f: PrimeField, cols: usize, rows: &[Vec<i64>]) -> Result<Self, LinError> {
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(LinError::DimensionMismatch(format!(
                    "row {r} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (c, &x) in row.iter().enumerate() {
                m.set(r, c, f.reduce(x));
            }
        }
        Ok(m)
    }

    /// Builds a matrix from residue rows; all rows must have `cols` entries.
    pub fn from_rows(cols: usize, rows: &[Vec<FpScalar>]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged row {r}");
            m.data[r * cols..(r + 1) * cols].copy_from_slice(row);
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, cols: &[Vec<FpScalar>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (c, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "ragged column {c}");
            for (r, &x) in col.iter().enumerate() {
                m.set(r, c, x);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> FpScalar {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: FpScalar) {
        self.data[r * self.cols + c] = x;
    }

    pub fn row(&self, r: usize) -> &[FpScalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<FpScalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<FpScalar> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, f: PrimeField, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let p = f.p() as u64;
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            let mut acc = vec![0u64; other.cols];
            for k in 0..self.cols {
                let a = self.get(r, k) as u64;
                if a == 0 {
                    continue;
                }
                for (c, slot) in acc.iter_mut().enumerate() {
                    *slot = (*slot + a * other.get(k, c) as u64) % p;
                }
            }
            for (c, v) in acc.into_iter().enumerate() {
                out.set(r, c, v as u32);
            }
        }
        out
    }

    pub fn apply(&self, f: PrimeField, v: &[FpScalar]) -> Vec<FpScalar> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        let p = f.p() as u64;
        (0..self.rows)
            .map(|r| {
                let s = self
                    .row(r)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % p);
                s as u32
            })
            .collect()
    }

    pub fn add(&self, f: PrimeField, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, f: PrimeField, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, f: PrimeField, s: FpScalar) -> Matrix {
        let data = self.data.iter().map(|&a| f.mul(a, s)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    /// Stacks `self` above `other`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Places `self` left of `other`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let mut m = Matrix::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c));
            }
            for c in 0..other.cols {
                m.set(r, self.cols + c, other.get(r, c));
            }
        }
        m
    }

    /// Block-diagonal sum.
    pub fn block_diag(blocks: &[Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    m.set(r0 + r, c0 + c, b.get(r, c));
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self, f: PrimeField) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(piv) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            if piv != row {
                for c in 0..m.cols {
                    m.data.swap(piv * m.cols + c, row * m.cols + c);
                }
            }
            let inv = f.inv(m.get(row, col));
            for c in col..m.cols {
                let v = f.mul(m.get(row, c), inv);
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col);
                if factor == 0 {
                    continue;
                }
                for c in col..m.cols {
                    let v = f.sub(m.get(r, c), f.mul(factor, m.get(row, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        m.data.truncate(row * m.cols);
        m.rows = row;
        (m, pivots)
    }

    pub fn rank(&self, f: PrimeField) -> usize {
        self.rref(f).1.len()
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self, f: PrimeField) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(Matrix::zeros(0, 0));
        }
        let aug = self.hstack(&Matrix::identity(n));
        let (r, piv) = aug.rref(f);
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j));
            }
        }
        Some(inv)
    }

    /// Signed representatives of every entry, row by row.
    pub fn to_signed_rows(&self, f: PrimeField) -> Vec<Vec<i64>> {
        (0..self.rows).map(|r| self.row(r).iter().map(|&x| f.signed(x)).collect()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        self.row_vecs()
    }
}
