use crate::error::{Error, Result};
use crate::field::Field;

use super::matrix::{rref_rows, Matrix};

/// A subspace of `k^n` stored as an RREF basis.
///
/// Two subspaces are equal iff their RREF bases are equal, so the derived
/// `PartialEq` is subspace equality.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace<F: Field> {
    ambient_dim: usize,
    basis: Matrix<F>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    pub fn zero(field: &F, ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: Matrix::zeros(field, 0, ambient_dim), pivots: Vec::new() }
    }

    pub fn full(field: &F, ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: Matrix::identity(field, ambient_dim), pivots: (0..ambient_dim).collect() }
    }

    /// Span of the given vectors.
    pub fn span(field: &F, ambient_dim: usize, mut vectors: Vec<Vec<F::Elem>>) -> Result<Self> {
        if vectors.iter().any(|v| v.len() != ambient_dim) {
            return Err(Error::DimensionMismatch(format!("vectors must have length {ambient_dim}")));
        }
        let pivots = rref_rows(field, &mut vectors, ambient_dim);
        let basis =
            if vectors.is_empty() { Matrix::zeros(field, 0, ambient_dim) } else { Matrix::from_rows(field, vectors)? };
        Ok(Subspace { ambient_dim, basis, pivots })
    }

    /// Row space of a matrix.
    pub fn row_space(m: &Matrix<F>) -> Self {
        let (basis, pivots) = m.rref();
        Subspace { ambient_dim: m.cols(), basis, pivots }
    }

    /// Wraps rows already known to be in RREF. Callers guarantee the invariant.
    pub(crate) fn from_rref_unchecked(
        field: &F,
        ambient_dim: usize,
        rows: Vec<Vec<F::Elem>>,
        pivots: Vec<usize>,
    ) -> Self {
        let basis = if rows.is_empty() {
            Matrix::zeros(field, 0, ambient_dim)
        } else {
            Matrix::from_rows(field, rows).expect("rectangular rows")
        };
        Subspace { ambient_dim, basis, pivots }
    }

    pub fn field(&self) -> &F {
        self.basis.field()
    }
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }
    pub fn dim(&self) -> usize {
        self.pivots.len()
    }
    pub fn basis(&self) -> &Matrix<F> {
        &self.basis
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
    pub fn is_zero(&self) -> bool {
        self.pivots.is_empty()
    }

    /// Coordinates of `v` in the RREF basis, or `None` if `v` is not in the subspace.
    pub fn coordinates(&self, v: &[F::Elem]) -> Option<Vec<F::Elem>> {
        let f = self.field();
        let coords: Vec<F::Elem> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut rebuilt = vec![f.zero(); self.ambient_dim];
        for (c, r) in coords.iter().zip(0..self.dim()) {
            if f.is_zero(c) {
                continue;
            }
            for (x, b) in rebuilt.iter_mut().zip(self.basis.row(r)) {
                if !f.is_zero(b) {
                    *x = f.add(x, &f.mul(c, b));
                }
            }
        }
        (rebuilt.as_slice() == v).then_some(coords)
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Self) -> bool {
        (0..other.dim()).all(|r| self.contains(other.basis.row(r)))
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        let mut rows = self.basis.to_rows();
        rows.extend(other.basis.to_rows());
        Self::span(self.field(), self.ambient_dim, rows)
    }

    /// Intersection via the Zassenhaus construction: RREF of `[[A, A], [B, 0]]`;
    /// rows whose left half vanishes span `A ∩ B` in their right half.
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        let f = self.field();
        let n = self.ambient_dim;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(f, n));
        }
        let mut rows: Vec<Vec<F::Elem>> = Vec::with_capacity(self.dim() + other.dim());
        for r in 0..self.dim() {
            let row = self.basis.row(r);
            let mut v = row.to_vec();
            v.extend_from_slice(row);
            rows.push(v);
        }
        for r in 0..other.dim() {
            let mut v = other.basis.row(r).to_vec();
            v.extend(std::iter::repeat_n(f.zero(), n));
            rows.push(v);
        }
        let pivots = rref_rows(f, &mut rows, 2 * n);
        let inter: Vec<Vec<F::Elem>> =
            rows.into_iter().zip(pivots).filter(|(_, p)| *p >= n).map(|(r, _)| r[n..].to_vec()).collect();
        Self::span(f, n, inter)
    }

    fn check_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::AmbientMismatch { left: self.ambient_dim, right: other.ambient_dim });
        }
        Ok(())
    }
}
