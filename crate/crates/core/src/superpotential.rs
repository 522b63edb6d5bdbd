//! Twisted superpotentials and the data of their superpotential algebras:
//! nondegeneracy, twist recovery, relation spaces, traceability, Nakayama data,
//! quantum dimensions and the quantum Hilbert series.
//!
//! Twist convention: `P` satisfies `(P ⊗ id^{⊗(m-1)}) φ(s) = s` with matrices
//! acting on factors by the column rule (see [`crate::tensor`]). Iterating this
//! `m` times gives `P^{⊗m} s = s`, so every derivative space of `s` is stable
//! under tensor powers of `P`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::tensor::{checked_pow, derivative_space, embed_padded, Matrix, Subspace, Tensor};

/// Largest ambient dimension `q^n` the subspace routines will touch.
pub const DEFAULT_SIZE_LIMIT: usize = 1 << 20;

/// A nondegenerate twisted superpotential `s` with its (unique) twist `P`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistedSuperpotential<F: Field> {
    tensor: Tensor<F>,
    twist: Matrix<F>,
}

impl<F: Field> TwistedSuperpotential<F> {
    /// Checks nondegeneracy and recovers the twist.
    pub fn new(tensor: Tensor<F>) -> Result<Self> {
        let rank = tensor.flatten_first().rank();
        if tensor.arity() < 2 || rank < tensor.dim() {
            return Err(Error::Degenerate { rank, dim: tensor.dim() });
        }
        let twist = find_twist(&tensor)?;
        Ok(TwistedSuperpotential { tensor, twist })
    }

    pub fn tensor(&self) -> &Tensor<F> {
        &self.tensor
    }
    pub fn twist(&self) -> &Matrix<F> {
        &self.twist
    }
    pub fn field(&self) -> &F {
        self.tensor.field()
    }
    pub fn arity(&self) -> usize {
        self.tensor.arity()
    }
    pub fn dim(&self) -> usize {
        self.tensor.dim()
    }
    /// Always true: construction fails on degenerate input.
    pub fn is_nondegenerate(&self) -> bool {
        true
    }
}

/// First-slot nondegeneracy: the pairing `ν_1 ↦ (ν_1 ⊗ ⋯)(s)` is injective.
pub fn is_nondegenerate<F: Field>(s: &Tensor<F>) -> bool {
    s.arity() >= 2 && s.flatten_first().rank() == s.dim()
}

/// Nondegeneracy in every slot (all cyclic flattenings have full rank).
pub fn is_nondegenerate_strict<F: Field>(s: &Tensor<F>) -> bool {
    let mut t = s.clone();
    for _ in 0..s.arity() {
        if !is_nondegenerate(&t) {
            return false;
        }
        t = t.cyclic_shift();
    }
    true
}

/// Solves `P · flat(φ(s)) = flat(s)` and verifies `(P ⊗ id)φ(s) = s` exactly.
pub fn find_twist<F: Field>(s: &Tensor<F>) -> Result<Matrix<F>> {
    let target = s.flatten_first();
    let rank = target.rank();
    if s.arity() < 2 || rank < s.dim() {
        return Err(Error::Degenerate { rank, dim: s.dim() });
    }
    let shifted = s.cyclic_shift();
    let phi = shifted.flatten_first();
    // Pivot columns of flat(φ(s)) are linearly independent.
    let (_, pivots) = phi.rref();
    if pivots.len() < s.dim() {
        return Err(Error::NotTwisted);
    }
    let q = s.dim();
    let f = s.field();
    let mut phi_c = Matrix::zeros(f, q, q);
    let mut tgt_c = Matrix::zeros(f, q, q);
    for (k, &c) in pivots.iter().enumerate() {
        for r in 0..q {
            phi_c.set(r, k, phi.get(r, c).clone());
            tgt_c.set(r, k, target.get(r, c).clone());
        }
    }
    let p = tgt_c.mul(&phi_c.invert().map_err(|_| Error::NotTwisted)?)?;
    if p.invert().is_err() || shifted.apply_on_factor(&p, 0)? != *s {
        return Err(Error::NotTwisted);
    }
    Ok(p)
}

/// `∂^{m-N}(k s) ⊂ V^{⊗N}`.
pub fn relations<F: Field>(sp: &TwistedSuperpotential<F>, n: usize) -> Result<Subspace<F>> {
    let m = sp.arity();
    if n < 2 || n > m {
        return Err(Error::Invalid(format!("relation degree {n} outside 2..={m}")));
    }
    let mut w = sp.tensor().span();
    for _ in 0..m - n {
        w = derivative_space(&w, sp.dim())?;
    }
    Ok(w)
}

/// `span{s} = ⋂_{i+j=m-L} V^{⊗i} ⊗ ∂^{m-L}(k s) ⊗ V^{⊗j}`.
pub fn is_l_traceable<F: Field>(sp: &TwistedSuperpotential<F>, l: usize) -> Result<bool> {
    let m = sp.arity();
    let r = relations(sp, l)?;
    let q = sp.dim();
    let mut acc: Option<Subspace<F>> = None;
    for i in 0..=m - l {
        let padded = embed_padded(&r, q, i, m - l - i)?;
        acc = Some(match acc {
            None => padded,
            Some(a) => a.intersect(&padded)?,
        });
    }
    Ok(acc.expect("at least one padding") == sp.tensor().span())
}

fn sign_pow<F: Field>(f: &F, d: usize) -> F::Elem {
    // (-1)^{d+1}
    if d % 2 == 1 {
        f.one()
    } else {
        f.from_i64(-1)
    }
}

/// `φ(s) = (-1)^{d+1} s`.
pub fn is_cy_shape<F: Field>(s: &Tensor<F>, d: usize) -> bool {
    s.cyclic_shift() == s.scale(&sign_pow(s.field(), d))
}

/// `(-1)^{d+1} (P^T)^{-1}`, the degree-one part of the Nakayama automorphism.
pub fn nakayama_matrix<F: Field>(sp: &TwistedSuperpotential<F>, d: usize) -> Result<Matrix<F>> {
    let pt_inv = sp.twist().transpose().invert()?;
    Ok(pt_inv.scale(&sign_pow(sp.field(), d)))
}

/// The operator whose tensor powers compute quantum dimensions: the inverse twist.
pub fn pivotal_matrix<F: Field>(twist: &Matrix<F>) -> Result<Matrix<F>> {
    twist.invert()
}

/// Trace of `(P^{-1})^{⊗n}` restricted to `W ⊂ V^{⊗n}`; fails with
/// [`Error::NotStable`] if `W` is not invariant.
pub fn qdim_subspace<F: Field>(w: &Subspace<F>, twist: &Matrix<F>) -> Result<F::Elem> {
    let f = w.field();
    let q = twist.rows();
    let n = ambient_degree(w.ambient_dim(), q)?;
    if w.is_zero() {
        return Ok(f.zero());
    }
    if n == 0 {
        return Ok(f.one());
    }
    let op = pivotal_matrix(twist)?;
    let mut trace = f.zero();
    for r in 0..w.dim() {
        let t = Tensor::from_vector(f, n, q, w.basis().row(r))?;
        let image = t.apply_on_all(&op)?.to_vector();
        let coords = w.coordinates(&image).ok_or(Error::NotStable)?;
        trace = f.add(&trace, &coords[r]);
    }
    Ok(trace)
}

fn ambient_degree(ambient: usize, q: usize) -> Result<usize> {
    let mut n = 0;
    let mut acc = 1usize;
    while acc < ambient {
        acc = acc.saturating_mul(q);
        n += 1;
    }
    if acc != ambient {
        return Err(Error::DimensionMismatch(format!("{ambient} is not a power of {q}")));
    }
    Ok(n)
}

/// A superpotential algebra `A(s, N) = TV / ∂^{m-N}(k s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraData<F: Field> {
    superpotential: TwistedSuperpotential<F>,
    degree: usize,
    relations: Subspace<F>,
}

impl<F: Field> AlgebraData<F> {
    pub fn new(superpotential: TwistedSuperpotential<F>, degree: usize) -> Result<Self> {
        let relations = relations(&superpotential, degree)?;
        Ok(AlgebraData { superpotential, degree, relations })
    }
    pub fn superpotential(&self) -> &TwistedSuperpotential<F> {
        &self.superpotential
    }
    /// Relation degree `N`.
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn relations(&self) -> &Subspace<F> {
        &self.relations
    }
    pub fn dim(&self) -> usize {
        self.superpotential.dim()
    }
}

/// `W_0, …, W_bound`: `W_i = V^{⊗i}` below `N`, and
/// `W_i = ⋂_{s+t=i-N} V^{⊗s} ⊗ R ⊗ V^{⊗t}` from `N` on.
#[derive(Debug, Clone, PartialEq)]
pub struct WSequence<F: Field> {
    pub spaces: Vec<Subspace<F>>,
}

impl<F: Field> WSequence<F> {
    pub fn dims(&self) -> Vec<usize> {
        self.spaces.iter().map(Subspace::dim).collect()
    }
}

pub fn w_sequence<F: Field>(alg: &AlgebraData<F>, bound: usize, size_limit: usize) -> Result<WSequence<F>> {
    let q = alg.dim();
    let f = alg.superpotential().field();
    let n = alg.degree();
    let mut spaces = Vec::with_capacity(bound + 1);
    for i in 0..=bound {
        let ambient = checked_pow(q, i)
            .filter(|&a| a <= size_limit)
            .ok_or(Error::SizeLimit { ambient: checked_pow(q, i).unwrap_or(usize::MAX), limit: size_limit })?;
        if i < n {
            spaces.push(Subspace::full(f, ambient));
            continue;
        }
        let mut acc: Option<Subspace<F>> = None;
        for s in 0..=i - n {
            let padded = embed_padded(alg.relations(), q, s, i - n - s)?;
            acc = Some(match acc {
                None => padded,
                Some(a) => a.intersect(&padded)?,
            });
        }
        spaces.push(acc.expect("nonempty range"));
    }
    Ok(WSequence { spaces })
}

/// `ρ(2j) = jN`, `ρ(2j+1) = jN + 1`.
pub fn rho(i: usize, n: usize) -> usize {
    (i / 2) * n + i % 2
}

/// Truncated power series with exact coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct QSeries<F: Field> {
    pub field: F,
    pub coeffs: Vec<F::Elem>,
    pub trunc: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QSeriesJson {
    pub coeffs: Vec<String>,
    pub trunc: usize,
}

impl<F: Field> QSeries<F> {
    pub fn to_json(&self) -> QSeriesJson {
        QSeriesJson { coeffs: self.coeffs.iter().map(|c| self.field.format(c)).collect(), trunc: self.trunc }
    }

    /// `1 / denom` expanded through degree `trunc`. The constant term must be invertible.
    pub fn invert(field: &F, denom: &[F::Elem], trunc: usize) -> Result<Self> {
        let c0 = denom.first().ok_or(Error::Invalid("empty denominator".into()))?;
        let c0_inv = field.inv(c0).ok_or(Error::Invalid("denominator has zero constant term".into()))?;
        let mut out: Vec<F::Elem> = Vec::with_capacity(trunc + 1);
        for k in 0..=trunc {
            let mut acc = if k == 0 { field.one() } else { field.zero() };
            for j in 1..=k.min(denom.len() - 1) {
                acc = field.sub(&acc, &field.mul(&denom[j], &out[k - j]));
            }
            out.push(field.mul(&acc, &c0_inv));
        }
        Ok(QSeries { field: field.clone(), coeffs: out, trunc })
    }
}

/// Denominator coefficients `Σ_{0≤i≤d} (-1)^i d_e(W_{ρ(i)}) t^{ρ(i)}`.
pub fn hilbert_denominator<F: Field>(alg: &AlgebraData<F>, d: usize, size_limit: usize) -> Result<Vec<F::Elem>> {
    let f = alg.superpotential().field().clone();
    let n = alg.degree();
    let top = rho(d, n);
    let ws = w_sequence(alg, top, size_limit)?;
    let mut denom = vec![f.zero(); top + 1];
    for i in 0..=d {
        let deg = rho(i, n);
        let qd = qdim_subspace(&ws.spaces[deg], alg.superpotential().twist())?;
        let term = if i % 2 == 0 { qd } else { f.neg(&qd) };
        denom[deg] = f.add(&denom[deg], &term);
    }
    Ok(denom)
}

/// The formal quantum Hilbert series `1 / Σ (-1)^i d_e(W_{ρ(i)}) t^{ρ(i)}`. Only
/// meaningful when `A(e, N)` is `N`-Koszul AS-regular of dimension `d`, which
/// the caller asserts.
pub fn quantum_hilbert_series<F: Field>(
    alg: &AlgebraData<F>,
    d: usize,
    trunc: usize,
    size_limit: usize,
) -> Result<QSeries<F>> {
    let denom = hilbert_denominator(alg, d, size_limit)?;
    QSeries::invert(alg.superpotential().field(), &denom, trunc)
}

/// `s = Σ E_ij v_i ⊗ v_j` for an invertible `E`.
pub fn m2_pack<F: Field>(e: &Matrix<F>) -> Result<TwistedSuperpotential<F>> {
    if !e.is_square() {
        return Err(Error::DimensionMismatch("E must be square".into()));
    }
    e.invert()?;
    let f = e.field();
    let q = e.rows();
    let mut t = Tensor::zero(f, 2, q);
    for i in 0..q {
        for j in 0..q {
            t.add_term(vec![i, j], e.get(i, j).clone())?;
        }
    }
    TwistedSuperpotential::new(t)
}

pub fn m2_unpack<F: Field>(sp: &TwistedSuperpotential<F>) -> Result<Matrix<F>> {
    if sp.arity() != 2 {
        return Err(Error::ArityMismatch { left: sp.arity(), right: 2 });
    }
    Ok(sp.tensor().flatten_first())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, Rationals};

    type Q = Rationals;

    fn antisym3() -> Tensor<Q> {
        let mut t = Tensor::zero(&Q::default(), 3, 3);
        for (p, s) in
            [([0, 1, 2], 1), ([1, 2, 0], 1), ([2, 0, 1], 1), ([0, 2, 1], -1), ([2, 1, 0], -1), ([1, 0, 2], -1)]
        {
            t.add_term(p.to_vec(), Q::default().from_i64(s)).unwrap();
        }
        t
    }

    fn quantum_plane(qv: i64) -> Matrix<Q> {
        Matrix::from_i64(&Q::default(), &[&[0, 1], &[qv, 0]])
    }

    #[test]
    fn nondegeneracy_examples() {
        let x = Tensor::basis(&Q::default(), 2, &[0, 0]).unwrap();
        assert!(!is_nondegenerate(&x));
        assert!(is_nondegenerate(&antisym3()));
        let e = Matrix::from_i64(&Q::default(), &[&[1, 2], &[2, 4]]);
        assert!(m2_pack(&e).is_err());
        assert!(is_nondegenerate(m2_pack(&quantum_plane(3)).unwrap().tensor()));
        assert!(is_nondegenerate_strict(&antisym3()));
    }

    #[test]
    fn twist_examples() {
        let q = Q::default();
        let sp = TwistedSuperpotential::new(antisym3()).unwrap();
        assert!(sp.twist().is_identity());
        // E = [[0,1],[3,0]]: twist is E E^{-T} = diag(1/3, 3)
        let sp = m2_pack(&quantum_plane(3)).unwrap();
        assert_eq!(*sp.twist(), Matrix::diagonal(&q, &[rat(1, 3), rat(3, 1)]));
        let e = Matrix::from_i64(&q, &[&[1, 2], &[-1, 3]]);
        let sp = m2_pack(&e).unwrap();
        let expect = e.mul(&e.transpose().invert().unwrap()).unwrap();
        assert_eq!(*sp.twist(), expect);
        assert_eq!(m2_unpack(&sp).unwrap(), e);
        // v1⊗v2 + v2⊗v2 + v1⊗v1 is nondegenerate; v1v2 ↦ φ ↦ v2v1 needs P swapping,
        // but then v2v2 must map to v1v2: not twisted.
        let t = Tensor::from_entries(
            &q,
            3,
            2,
            [(vec![0, 0, 1], q.one()), (vec![1, 1, 0], q.one()), (vec![1, 0, 0], q.one())],
        )
        .unwrap();
        assert!(matches!(find_twist(&t), Err(Error::NotTwisted) | Err(Error::Degenerate { .. })));
    }

    #[test]
    fn relations_examples() {
        let sp = TwistedSuperpotential::new(antisym3()).unwrap();
        assert_eq!(relations(&sp, 3).unwrap(), sp.tensor().span());
        assert_eq!(relations(&sp, 2).unwrap().dim(), 3);
        let e = m2_pack(&quantum_plane(2)).unwrap();
        assert_eq!(relations(&e, 2).unwrap(), e.tensor().span());
    }

    #[test]
    fn traceability_examples() {
        let sp = TwistedSuperpotential::new(antisym3()).unwrap();
        assert!(is_l_traceable(&sp, 2).unwrap());
        assert!(is_l_traceable(&sp, 3).unwrap());
        let r = relations(&sp, 2).unwrap();
        let inter = embed_padded(&r, 3, 1, 0).unwrap().intersect(&embed_padded(&r, 3, 0, 1).unwrap()).unwrap();
        assert_eq!(inter.dim(), 1);
        assert!(is_l_traceable(&m2_pack(&quantum_plane(5)).unwrap(), 2).unwrap());
    }

    #[test]
    fn cy_shape_and_nakayama() {
        let q = Q::default();
        assert!(is_cy_shape(&antisym3(), 3));
        let e = m2_pack(&Matrix::from_i64(&q, &[&[1, 2], &[0, 1]])).unwrap();
        assert!(!is_cy_shape(e.tensor(), 2));
        let sym = m2_pack(&Matrix::from_i64(&q, &[&[0, 1], &[-1, 0]])).unwrap();
        assert!(is_cy_shape(sym.tensor(), 2));
        let sp = TwistedSuperpotential::new(antisym3()).unwrap();
        assert!(nakayama_matrix(&sp, 3).unwrap().is_identity());
        assert_eq!(nakayama_matrix(&sp, 2).unwrap(), Matrix::identity(&q, 3).scale(&q.from_i64(-1)));
        // twist diag(1/q, q) ⇒ -(P^T)^{-1} = -diag(q, 1/q)
        let qp = m2_pack(&quantum_plane(2)).unwrap();
        assert_eq!(nakayama_matrix(&qp, 2).unwrap(), Matrix::diagonal(&q, &[rat(-2, 1), rat(-1, 2)]));
    }

    #[test]
    fn qdim_examples() {
        let q = Q::default();
        let sp = TwistedSuperpotential::new(antisym3()).unwrap();
        let r = relations(&sp, 2).unwrap();
        assert_eq!(qdim_subspace(&r, sp.twist()).unwrap(), q.from_i64(3));
        for qv in [2, 3, 5] {
            let qp = m2_pack(&quantum_plane(qv)).unwrap();
            let v = Subspace::full(&q, 2);
            assert_eq!(qdim_subspace(&v, qp.twist()).unwrap(), rat(qv * qv + 1, qv));
        }
        let qp = m2_pack(&quantum_plane(2)).unwrap();
        let bad = Subspace::span(&q, 2, vec![vec![q.one(), q.one()]]).unwrap();
        assert_eq!(qdim_subspace(&bad, qp.twist()), Err(Error::NotStable));
    }

    #[test]
    fn w_sequence_of_polynomial_ring() {
        let sp = TwistedSuperpotential::new(antisym3()).unwrap();
        let alg = AlgebraData::new(sp, 2).unwrap();
        let ws = w_sequence(&alg, 4, DEFAULT_SIZE_LIMIT).unwrap();
        assert_eq!(ws.dims(), vec![1, 3, 3, 1, 0]);
        assert_eq!(ws.spaces[2], *alg.relations());
        assert!(matches!(w_sequence(&alg, 4, 50), Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn hilbert_series_examples() {
        let q = Q::default();
        let sp = TwistedSuperpotential::new(antisym3()).unwrap();
        let alg = AlgebraData::new(sp, 2).unwrap();
        let s = quantum_hilbert_series(&alg, 3, 6, DEFAULT_SIZE_LIMIT).unwrap();
        let want: Vec<_> = [1, 3, 6, 10, 15, 21, 28].iter().map(|&x| q.from_i64(x)).collect();
        assert_eq!(s.coeffs, want);
        let id = AlgebraData::new(m2_pack(&Matrix::identity(&q, 2)).unwrap(), 2).unwrap();
        let s = quantum_hilbert_series(&id, 2, 4, DEFAULT_SIZE_LIMIT).unwrap();
        assert_eq!(s.to_json().coeffs, vec!["1", "2", "3", "4", "5"]);
        // quantum plane q=2: 1/(1 - 5/2 t + t^2) = 1, 5/2, 21/4, ...
        let qp = AlgebraData::new(m2_pack(&quantum_plane(2)).unwrap(), 2).unwrap();
        let s = quantum_hilbert_series(&qp, 2, 2, DEFAULT_SIZE_LIMIT).unwrap();
        assert_eq!(s.coeffs, vec![rat(1, 1), rat(5, 2), rat(21, 4)]);
    }

    #[test]
    fn rho_values() {
        assert_eq!((0..6).map(|i| rho(i, 2)).collect::<Vec<_>>(), vec![0, 1, 2, 3, 4, 5]);
        assert_eq!((0..6).map(|i| rho(i, 3)).collect::<Vec<_>>(), vec![0, 1, 3, 4, 6, 7]);
    }
}
