//! Exact multilinear algebra on `V^{⊗m}`.
//!
//! Coordinates on `V^{⊗n}` are ordered lexicographically by multi-index: the
//! index `(i_1, …, i_n)` (0-based in code, 1-based in JSON) sits at position
//! `Σ i_k q^{n-k}`. Matrices act on tensor factors by the column convention
//! `v_i ↦ Σ_j M_{ji} v_j`.

mod json;
mod matrix;
mod subspace;

use std::collections::BTreeMap;

pub use json::{TensorEntryJson, TensorJson};
pub use matrix::Matrix;
pub use subspace::Subspace;

use crate::error::{Error, Result};
use crate::field::Field;

/// Multi-index `(i_1, …, i_m)`, 0-based. Ordering is lexicographic, matching the
/// coordinate order on `V^{⊗m}`.
pub type MultiIndex = Vec<usize>;

/// Sparse element of `V^{⊗m}` with `dim V = q`. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor<F: Field> {
    field: F,
    arity: usize,
    dim: usize,
    coeffs: BTreeMap<MultiIndex, F::Elem>,
}

pub fn checked_pow(q: usize, n: usize) -> Option<usize> {
    q.checked_pow(u32::try_from(n).ok()?)
}

impl<F: Field> Tensor<F> {
    pub fn zero(field: &F, arity: usize, dim: usize) -> Self {
        assert!(arity >= 1 && dim >= 1, "tensor needs arity >= 1 and dim >= 1");
        Tensor { field: field.clone(), arity, dim, coeffs: BTreeMap::new() }
    }

    /// The pure tensor `v_{i_1} ⊗ ⋯ ⊗ v_{i_m}` (0-based indices).
    pub fn basis(field: &F, dim: usize, idx: &[usize]) -> Result<Self> {
        let mut t = Self::zero(field, idx.len(), dim);
        t.add_term(idx.to_vec(), field.one())?;
        Ok(t)
    }

    pub fn from_entries(
        field: &F,
        arity: usize,
        dim: usize,
        entries: impl IntoIterator<Item = (MultiIndex, F::Elem)>,
    ) -> Result<Self> {
        let mut t = Self::zero(field, arity, dim);
        for (idx, c) in entries {
            t.add_term(idx, c)?;
        }
        Ok(t)
    }

    /// Reads a length-`q^m` coordinate vector.
    pub fn from_vector(field: &F, arity: usize, dim: usize, v: &[F::Elem]) -> Result<Self> {
        let n = checked_pow(dim, arity).ok_or(Error::SizeLimit { ambient: usize::MAX, limit: usize::MAX })?;
        if v.len() != n {
            return Err(Error::DimensionMismatch(format!("vector length {} != {n}", v.len())));
        }
        let mut t = Self::zero(field, arity, dim);
        for (pos, c) in v.iter().enumerate() {
            if !field.is_zero(c) {
                t.coeffs.insert(unflatten_index(pos, arity, dim), c.clone());
            }
        }
        Ok(t)
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn arity(&self) -> usize {
        self.arity
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &F::Elem)> {
        self.coeffs.iter()
    }
    pub fn nnz(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, idx: &[usize]) -> F::Elem {
        self.coeffs.get(idx).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Adds `c` to the coefficient at `idx`.
    pub fn add_term(&mut self, idx: MultiIndex, c: F::Elem) -> Result<()> {
        if idx.len() != self.arity {
            return Err(Error::DimensionMismatch(format!(
                "index of length {} in arity-{} tensor",
                idx.len(),
                self.arity
            )));
        }
        if let Some(&bad) = idx.iter().find(|&&i| i >= self.dim) {
            return Err(Error::IndexOutOfRange { index: bad + 1, dim: self.dim });
        }
        let f = &self.field;
        let new = match self.coeffs.get(&idx) {
            Some(old) => f.add(old, &c),
            None => c,
        };
        if f.is_zero(&new) {
            self.coeffs.remove(&idx);
        } else {
            self.coeffs.insert(idx, new);
        }
        Ok(())
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.arity != other.arity || self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!(
                "tensor shapes ({}, {}) vs ({}, {})",
                self.arity, self.dim, other.arity, other.dim
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (idx, c) in &other.coeffs {
            out.add_term(idx.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&self.field.from_i64(-1)))
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        let f = &self.field;
        let mut out = Self::zero(f, self.arity, self.dim);
        if f.is_zero(s) {
            return out;
        }
        out.coeffs = self.coeffs.iter().map(|(k, v)| (k.clone(), f.mul(v, s))).collect();
        out
    }

    /// Dense coordinate vector in lexicographic order.
    pub fn to_vector(&self) -> Vec<F::Elem> {
        let n = self.dim.pow(self.arity as u32);
        let mut v = vec![self.field.zero(); n];
        for (idx, c) in &self.coeffs {
            v[flatten_index(idx, self.dim)] = c.clone();
        }
        v
    }

    /// `φ(v_1 ⊗ ⋯ ⊗ v_m) = v_m ⊗ v_1 ⊗ ⋯ ⊗ v_{m-1}`.
    pub fn cyclic_shift(&self) -> Self {
        let mut out = Self::zero(&self.field, self.arity, self.dim);
        for (idx, c) in &self.coeffs {
            let mut j = Vec::with_capacity(self.arity);
            j.push(idx[self.arity - 1]);
            j.extend_from_slice(&idx[..self.arity - 1]);
            out.coeffs.insert(j, c.clone());
        }
        out
    }

    /// Reorders tensor factors: the factor in slot `k` of the input lands in slot
    /// `perm[k]` of the output.
    pub fn permute_slots(&self, perm: &[usize]) -> Self {
        debug_assert_eq!(perm.len(), self.arity);
        let mut out = Self::zero(&self.field, self.arity, self.dim);
        for (idx, c) in &self.coeffs {
            let mut j = vec![0; self.arity];
            for (k, &p) in perm.iter().enumerate() {
                j[p] = idx[k];
            }
            out.coeffs.insert(j, c.clone());
        }
        out
    }

    /// Acts by `M` on tensor factor `slot` (0-based).
    pub fn apply_on_factor(&self, m: &Matrix<F>, slot: usize) -> Result<Self> {
        if m.rows() != self.dim || m.cols() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix on dimension {}",
                m.rows(),
                m.cols(),
                self.dim
            )));
        }
        if slot >= self.arity {
            return Err(Error::IndexOutOfRange { index: slot + 1, dim: self.arity });
        }
        let f = &self.field;
        let mut out = Self::zero(f, self.arity, self.dim);
        for (idx, c) in &self.coeffs {
            let i = idx[slot];
            for j in 0..self.dim {
                let mji = m.get(j, i);
                if f.is_zero(mji) {
                    continue;
                }
                let mut k = idx.clone();
                k[slot] = j;
                out.add_term(k, f.mul(mji, c))?;
            }
        }
        Ok(out)
    }

    /// `M^{⊗m}` applied to the whole tensor.
    pub fn apply_on_all(&self, m: &Matrix<F>) -> Result<Self> {
        (0..self.arity).try_fold(self.clone(), |t, slot| t.apply_on_factor(m, slot))
    }

    /// The `q × q^{m-1}` matrix with entry `(i, (i_2…i_m))` equal to `coeff(i, i_2, …, i_m)`.
    pub fn flatten_first(&self) -> Matrix<F> {
        let f = &self.field;
        let cols = self.dim.pow(self.arity as u32 - 1);
        let mut m = Matrix::zeros(f, self.dim, cols);
        for (idx, c) in &self.coeffs {
            m.set(idx[0], flatten_index(&idx[1..], self.dim), c.clone());
        }
        m
    }

    /// Pairs the first slot with the dual basis vector `v^{dual_index}` (0-based).
    pub fn contract_first(&self, dual_index: usize) -> Result<Self> {
        if self.arity < 2 {
            return Err(Error::DimensionMismatch("contraction needs arity >= 2".into()));
        }
        if dual_index >= self.dim {
            return Err(Error::IndexOutOfRange { index: dual_index + 1, dim: self.dim });
        }
        let mut out = Self::zero(&self.field, self.arity - 1, self.dim);
        for (idx, c) in &self.coeffs {
            if idx[0] == dual_index {
                out.coeffs.insert(idx[1..].to_vec(), c.clone());
            }
        }
        Ok(out)
    }

    /// The line `k·t` as a subspace of `V^{⊗m}`.
    pub fn span(&self) -> Subspace<F> {
        let n = self.dim.pow(self.arity as u32);
        let rows = if self.is_zero() { vec![] } else { vec![self.to_vector()] };
        Subspace::span(&self.field, n, rows).expect("vector has ambient length")
    }
}

pub fn flatten_index(idx: &[usize], dim: usize) -> usize {
    idx.iter().fold(0, |acc, &i| acc * dim + i)
}

pub fn unflatten_index(mut pos: usize, arity: usize, dim: usize) -> MultiIndex {
    let mut idx = vec![0; arity];
    for k in (0..arity).rev() {
        idx[k] = pos % dim;
        pos /= dim;
    }
    idx
}

/// Infers the tensor degree `n` from an ambient dimension `q^n`.
fn tensor_degree(ambient: usize, dim: usize) -> Result<usize> {
    let mut n = 0;
    let mut acc = 1usize;
    while acc < ambient {
        acc = acc.checked_mul(dim).ok_or(Error::SizeLimit { ambient, limit: usize::MAX })?;
        n += 1;
    }
    if acc != ambient {
        return Err(Error::DimensionMismatch(format!("{ambient} is not a power of {dim}")));
    }
    Ok(n)
}

/// `∂(W) ⊂ V^{⊗(n-1)}`: span of all first-slot contractions of the elements of `W ⊂ V^{⊗n}`.
pub fn derivative_space<F: Field>(w: &Subspace<F>, dim: usize) -> Result<Subspace<F>> {
    let n = tensor_degree(w.ambient_dim(), dim)?;
    if n < 1 {
        return Err(Error::DimensionMismatch("derivative of degree-0 space".into()));
    }
    let block = w.ambient_dim() / dim;
    let mut rows = Vec::with_capacity(w.dim() * dim);
    for r in 0..w.dim() {
        let row = w.basis().row(r);
        for i in 0..dim {
            let piece = &row[i * block..(i + 1) * block];
            if piece.iter().any(|x| !w.field().is_zero(x)) {
                rows.push(piece.to_vec());
            }
        }
    }
    Subspace::span(w.field(), block, rows)
}

/// `V^{⊗left} ⊗ W ⊗ V^{⊗right}` with an RREF basis.
pub fn embed_padded<F: Field>(w: &Subspace<F>, dim: usize, left: usize, right: usize) -> Result<Subspace<F>> {
    let f = w.field();
    let lq = checked_pow(dim, left).ok_or(Error::SizeLimit { ambient: usize::MAX, limit: usize::MAX })?;
    let rq = checked_pow(dim, right).ok_or(Error::SizeLimit { ambient: usize::MAX, limit: usize::MAX })?;
    let k = w.ambient_dim();
    let ambient = lq
        .checked_mul(k)
        .and_then(|x| x.checked_mul(rq))
        .ok_or(Error::SizeLimit { ambient: usize::MAX, limit: usize::MAX })?;
    // Rows (a, w, b) ↦ e_a ⊗ w ⊗ e_b are already RREF once sorted by pivot.
    let mut keyed: Vec<(usize, usize, usize, usize)> = Vec::with_capacity(lq * w.dim() * rq);
    for a in 0..lq {
        for (r, &p) in w.pivots().iter().enumerate() {
            for b in 0..rq {
                keyed.push((a * k * rq + p * rq + b, a, r, b));
            }
        }
    }
    keyed.sort_unstable();
    let mut rows = Vec::with_capacity(keyed.len());
    let mut pivots = Vec::with_capacity(keyed.len());
    for (pivot, a, r, b) in keyed {
        let mut v = vec![f.zero(); ambient];
        for (c, x) in w.basis().row(r).iter().enumerate() {
            if !f.is_zero(x) {
                v[a * k * rq + c * rq + b] = x.clone();
            }
        }
        rows.push(v);
        pivots.push(pivot);
    }
    Ok(Subspace::from_rref_unchecked(f, ambient, rows, pivots))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    type Q = Rationals;

    pub(crate) fn antisymmetrizer3() -> Tensor<Q> {
        let perms: [([usize; 3], i64); 6] =
            [([0, 1, 2], 1), ([1, 2, 0], 1), ([2, 0, 1], 1), ([0, 2, 1], -1), ([2, 1, 0], -1), ([1, 0, 2], -1)];
        Tensor::from_entries(&Q::default(), 3, 3, perms.iter().map(|(p, s)| (p.to_vec(), Q::default().from_i64(*s))))
            .unwrap()
    }

    fn t(entries: &[(&[usize], i64)], arity: usize, dim: usize) -> Tensor<Q> {
        Tensor::from_entries(&Rationals, arity, dim, entries.iter().map(|(i, c)| (i.to_vec(), Rationals.from_i64(*c))))
            .unwrap()
    }

    #[test]
    fn cyclic_shift_examples() {
        assert_eq!(t(&[(&[0, 1, 2], 1)], 3, 3).cyclic_shift(), t(&[(&[2, 0, 1], 1)], 3, 3));
        assert_eq!(t(&[(&[0, 0], 1)], 2, 2).cyclic_shift(), t(&[(&[0, 0], 1)], 2, 2));
        let a = antisymmetrizer3().add(&t(&[(&[0, 0, 1], 5), (&[2, 1, 1], -3)], 3, 3)).unwrap();
        assert_eq!(a.cyclic_shift().cyclic_shift().cyclic_shift(), a);
    }

    #[test]
    fn apply_on_factor_examples() {
        let x = t(&[(&[0, 1], 1)], 2, 2);
        assert_eq!(x.apply_on_factor(&Matrix::identity(&Rationals, 2), 0).unwrap(), x);
        let d = Matrix::from_i64(&Rationals, &[&[2, 0], &[0, 3]]);
        assert_eq!(x.apply_on_factor(&d, 0).unwrap(), t(&[(&[0, 1], 2)], 2, 2));
        let s = Matrix::from_i64(&Rationals, &[&[0, 1], &[1, 0]]);
        assert_eq!(x.apply_on_factor(&s, 1).unwrap(), t(&[(&[0, 0], 1)], 2, 2));
        assert!(x.apply_on_factor(&Matrix::identity(&Rationals, 3), 0).is_err());
    }

    #[test]
    fn flatten_first_examples() {
        let x = t(&[(&[0, 0], 1)], 2, 2);
        assert_eq!(x.flatten_first(), Matrix::from_i64(&Rationals, &[&[1, 0], &[0, 0]]));
        assert_eq!(antisymmetrizer3().flatten_first().rank(), 3);
        let e = t(&[(&[0, 1], 1), (&[1, 0], 7), (&[1, 1], -2)], 2, 2);
        assert_eq!(e.flatten_first(), Matrix::from_i64(&Rationals, &[&[0, 1], &[7, -2]]));
    }

    #[test]
    fn contract_first_examples() {
        let x = t(&[(&[0, 1], 1), (&[1, 0], 1)], 2, 2);
        assert_eq!(x.contract_first(0).unwrap(), t(&[(&[1], 1)], 1, 2));
        assert!(t(&[(&[0, 1, 2], 1)], 3, 3).contract_first(1).unwrap().is_zero());
        assert_eq!(antisymmetrizer3().contract_first(0).unwrap(), t(&[(&[1, 2], 1), (&[2, 1], -1)], 2, 3));
        assert!(matches!(x.contract_first(2), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn derivative_space_examples() {
        let d = derivative_space(&antisymmetrizer3().span(), 3).unwrap();
        let comm = Subspace::span(
            &Rationals,
            9,
            vec![
                t(&[(&[0, 1], 1), (&[1, 0], -1)], 2, 3).to_vector(),
                t(&[(&[0, 2], 1), (&[2, 0], -1)], 2, 3).to_vector(),
                t(&[(&[1, 2], 1), (&[2, 1], -1)], 2, 3).to_vector(),
            ],
        )
        .unwrap();
        assert_eq!(d, comm);
        assert!(derivative_space(&Subspace::zero(&Rationals, 9), 3).unwrap().is_zero());
        assert_eq!(derivative_space(&Subspace::full(&Rationals, 4), 2).unwrap(), Subspace::full(&Rationals, 2));
    }

    #[test]
    fn embed_padded_examples() {
        let q = Rationals;
        let w = Subspace::span(&q, 2, vec![vec![q.one(), q.zero()]]).unwrap();
        assert_eq!(embed_padded(&w, 2, 0, 0).unwrap(), w);
        let left = embed_padded(&w, 2, 1, 0).unwrap();
        let expect =
            Subspace::span(&q, 4, vec![t(&[(&[0, 0], 1)], 2, 2).to_vector(), t(&[(&[1, 0], 1)], 2, 2).to_vector()])
                .unwrap();
        assert_eq!(left, expect);
        let r = derivative_space(&antisymmetrizer3().span(), 3).unwrap();
        let padded = embed_padded(&r, 3, 1, 1).unwrap();
        assert_eq!(padded.dim(), 3 * 3 * 3);
        // the fast construction agrees with an honest RREF of the same rows
        assert_eq!(Subspace::row_space(padded.basis()), padded);
    }

    #[test]
    fn prime_field_tensors() {
        let f = PrimeField::new(7).unwrap();
        let x = Tensor::from_entries(&f, 2, 2, [(vec![0, 1], 3), (vec![0, 1], 4)]).unwrap();
        assert!(x.is_zero());
    }
}
