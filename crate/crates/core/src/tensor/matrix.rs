use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;

/// Dense matrix over a field, row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(|x| self.field.format(x)).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Matrix { field: field.clone(), rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: &F, rows: Vec<Vec<F::Elem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix { field: field.clone(), rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Builds a matrix from small integers. Panics on ragged input.
    pub fn from_i64(field: &F, rows: &[&[i64]]) -> Self {
        let rows = rows.iter().map(|r| r.iter().map(|&x| field.from_i64(x)).collect()).collect();
        Self::from_rows(field, rows).expect("rectangular integer matrix")
    }

    pub fn diagonal(field: &F, diag: &[F::Elem]) -> Self {
        let mut m = Self::zeros(field, diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m.set(i, i, d.clone());
        }
        m
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F::Elem {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F::Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F::Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<F::Elem>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if f.is_zero(a) {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if f.is_zero(b) {
                        continue;
                    }
                    let v = f.add(out.get(r, c), &f.mul(a, b));
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        let f = &self.field;
        Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| f.mul(x, s)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("matrix sum".into()));
        }
        let f = &self.field;
        Ok(Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f.add(a, b)).collect(),
        })
    }

    pub fn trace(&self) -> F::Elem {
        let f = &self.field;
        (0..self.rows.min(self.cols)).fold(f.zero(), |acc, i| f.add(&acc, self.get(i, i)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(&self.field, self.rows) && self.is_square()
    }

    /// Matrix-vector product `M v`.
    pub fn apply(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b))))
            .collect()
    }

    /// Reduced row echelon form with the list of pivot columns. Zero rows are dropped.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let f = &self.field;
        let mut rows = self.to_rows();
        let pivots = rref_rows(f, &mut rows, self.cols);
        let m =
            Matrix { field: f.clone(), rows: rows.len(), cols: self.cols, data: rows.into_iter().flatten().collect() };
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn invert(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let f = &self.field;
        let mut rows: Vec<Vec<F::Elem>> = (0..n)
            .map(|r| {
                let mut row = self.row(r).to_vec();
                row.extend((0..n).map(|c| if c == r { f.one() } else { f.zero() }));
                row
            })
            .collect();
        let pivots = rref_rows(f, &mut rows, 2 * n);
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::Singular);
        }
        let data = rows.into_iter().flat_map(|r| r.into_iter().skip(n)).collect();
        Ok(Matrix { field: f.clone(), rows: n, cols: n, data })
    }

    /// Basis of the right kernel `{x : M x = 0}`, as rows of the returned matrix.
    pub fn kernel(&self) -> Self {
        let f = &self.field;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Self::zeros(f, free.len(), self.cols);
        for (k, &fc) in free.iter().enumerate() {
            out.set(k, fc, f.one());
            for (pr, &pc) in pivots.iter().enumerate() {
                out.set(k, pc, f.neg(r.get(pr, fc)));
            }
        }
        out
    }

    pub fn kron(&self, other: &Self) -> Self {
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if f.is_zero(a) {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, f.mul(a, other.get(k, l)));
                    }
                }
            }
        }
        out
    }

    /// `n`-fold Kronecker power in the lexicographic multi-index basis.
    pub fn kron_power(&self, n: usize) -> Result<Self> {
        if !self.is_square() || n == 0 {
            return Err(Error::DimensionMismatch("kron_power needs a square matrix and n >= 1".into()));
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.kron(self);
        }
        Ok(acc)
    }
}

/// In-place Gauss-Jordan on a list of rows; returns pivot columns and truncates zero rows.
pub(crate) fn rref_rows<F: Field>(f: &F, rows: &mut Vec<Vec<F::Elem>>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut next = 0;
    for c in 0..cols {
        if next == rows.len() {
            break;
        }
        let Some(p) = (next..rows.len()).find(|&r| !f.is_zero(&rows[r][c])) else {
            continue;
        };
        rows.swap(next, p);
        let inv = f.inv(&rows[next][c]).expect("nonzero pivot");
        if !f.is_one(&inv) {
            for x in rows[next][c..].iter_mut() {
                *x = f.mul(x, &inv);
            }
        }
        let pivot_row = rows[next].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == next || f.is_zero(&row[c]) {
                continue;
            }
            let factor = row[c].clone();
            for (x, p) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                if !f.is_zero(p) {
                    *x = f.sub(x, &f.mul(&factor, p));
                }
            }
        }
        pivots.push(c);
        next += 1;
    }
    rows.truncate(next);
    pivots
}
