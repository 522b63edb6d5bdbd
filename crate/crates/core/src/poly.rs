//! Words and polynomials in the free algebra `k⟨x_0, …, x_{n-1}⟩`.
//!
//! Letters are generator indices. [`Word`]'s `Ord` is degree-lexicographic with
//! letter `0` the *largest* letter, so a presentation that lists generators in
//! precedence order gets the intended monomial order for free.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use crate::field::Field;

pub type Letter = u16;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub SmallVec<[Letter; 12]>);

impl Word {
    pub fn empty() -> Self {
        Word(SmallVec::new())
    }
    pub fn from_letters(letters: &[Letter]) -> Self {
        Word(SmallVec::from_slice(letters))
    }
    pub fn len(&self) -> usize {
        self.0.len()
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
    pub fn letters(&self) -> &[Letter] {
        &self.0
    }
    /// `left · self · right`.
    pub fn wrap(&self, left: &[Letter], right: &[Letter]) -> Word {
        let mut w = SmallVec::with_capacity(left.len() + self.len() + right.len());
        w.extend_from_slice(left);
        w.extend_from_slice(&self.0);
        w.extend_from_slice(right);
        Word(w)
    }
    pub fn concat(&self, other: &Word) -> Word {
        self.wrap(&[], &other.0)
    }
    /// First position where `sub` occurs as a factor.
    pub fn find(&self, sub: &[Letter]) -> Option<usize> {
        if sub.len() > self.len() {
            return None;
        }
        (0..=self.len() - sub.len()).find(|&i| &self.0[i..i + sub.len()] == sub)
    }
    pub fn map_letters(&self, f: impl Fn(Letter) -> Letter) -> Word {
        Word(self.0.iter().map(|&l| f(l)).collect())
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

/// A noncommutative polynomial: terms sorted by [`Word`] order, descending, no
/// zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NcPoly<F: Field> {
    terms: Vec<(Word, F::Elem)>,
}

impl<F: Field> fmt::Debug for NcPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.terms.iter()).finish()
    }
}

impl<F: Field> Default for NcPoly<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<F: Field> NcPoly<F> {
    pub fn zero() -> Self {
        NcPoly { terms: Vec::new() }
    }

    pub fn constant(f: &F, c: F::Elem) -> Self {
        Self::from_terms(f, vec![(Word::empty(), c)])
    }

    pub fn monomial(f: &F, w: Word, c: F::Elem) -> Self {
        Self::from_terms(f, vec![(w, c)])
    }

    /// Canonicalizes: sorts, merges equal words, drops zeros.
    pub fn from_terms(f: &F, mut terms: Vec<(Word, F::Elem)>) -> Self {
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Word, F::Elem)> = Vec::with_capacity(terms.len());
        for (w, c) in terms {
            match out.last_mut() {
                Some((lw, lc)) if *lw == w => *lc = f.add(lc, &c),
                _ => out.push((w, c)),
            }
        }
        out.retain(|(_, c)| !f.is_zero(c));
        NcPoly { terms: out }
    }

    /// Trusts the caller that `terms` are already canonical.
    pub(crate) fn from_sorted_unchecked(terms: Vec<(Word, F::Elem)>) -> Self {
        NcPoly { terms }
    }

    pub fn terms(&self) -> &[(Word, F::Elem)] {
        &self.terms
    }
    pub fn into_terms(self) -> Vec<(Word, F::Elem)> {
        self.terms
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn leading_word(&self) -> Option<&Word> {
        self.terms.first().map(|(w, _)| w)
    }
    pub fn leading_coeff(&self) -> Option<&F::Elem> {
        self.terms.first().map(|(_, c)| c)
    }
    /// Nonzero constant.
    pub fn is_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_empty()
    }
    pub fn degree(&self) -> Option<usize> {
        self.leading_word().map(Word::len)
    }
    pub fn min_degree(&self) -> Option<usize> {
        self.terms.iter().map(|(w, _)| w.len()).min()
    }
    pub fn is_homogeneous(&self) -> bool {
        self.terms.windows(2).all(|p| p[0].0.len() == p[1].0.len())
    }

    pub fn make_monic(&self, f: &F) -> Self {
        match self.leading_coeff() {
            None => Self::zero(),
            Some(lc) if f.is_one(lc) => self.clone(),
            Some(lc) => {
                let inv = f.inv(lc).expect("nonzero leading coefficient");
                self.scale(f, &inv)
            }
        }
    }

    pub fn scale(&self, f: &F, s: &F::Elem) -> Self {
        if f.is_zero(s) {
            return Self::zero();
        }
        NcPoly { terms: self.terms.iter().map(|(w, c)| (w.clone(), f.mul(c, s))).collect() }
    }

    pub fn add(&self, f: &F, other: &Self) -> Self {
        let mut t = self.terms.clone();
        t.extend(other.terms.iter().cloned());
        Self::from_terms(f, t)
    }

    pub fn sub(&self, f: &F, other: &Self) -> Self {
        self.add(f, &other.scale(f, &f.from_i64(-1)))
    }

    pub fn mul(&self, f: &F, other: &Self) -> Self {
        let mut t = Vec::with_capacity(self.len() * other.len());
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                t.push((a.concat(b), f.mul(ca, cb)));
            }
        }
        Self::from_terms(f, t)
    }

    /// `left · self · right` for words `left`, `right`; order is preserved.
    pub fn wrap(&self, left: &[Letter], right: &[Letter]) -> Self {
        NcPoly { terms: self.terms.iter().map(|(w, c)| (w.wrap(left, right), c.clone())).collect() }
    }

    /// Renames letters; re-sorts since the order may change.
    pub fn map_letters(&self, f: &F, map: impl Fn(Letter) -> Letter) -> Self {
        Self::from_terms(f, self.terms.iter().map(|(w, c)| (w.map_letters(&map), c.clone())).collect())
    }

    /// Maps coefficients into another field.
    pub fn try_map_field<G: Field>(
        &self,
        g: &G,
        conv: impl Fn(&F::Elem) -> crate::Result<G::Elem>,
    ) -> crate::Result<NcPoly<G>> {
        let mut t = Vec::with_capacity(self.len());
        for (w, c) in &self.terms {
            t.push((w.clone(), conv(c)?));
        }
        Ok(NcPoly::from_terms(g, t))
    }

    /// Substitutes a polynomial for every letter.
    pub fn substitute(&self, f: &F, images: &[NcPoly<F>]) -> Self {
        let mut acc = Self::zero();
        for (w, c) in &self.terms {
            let mut m = Self::constant(f, c.clone());
            for &l in w.letters() {
                m = m.mul(f, &images[l as usize]);
            }
            acc = acc.add(f, &m);
        }
        acc
    }

    /// Evaluates under a ring homomorphism to `k` given by letter values.
    pub fn evaluate(&self, f: &F, values: &[F::Elem]) -> F::Elem {
        self.terms.iter().fold(f.zero(), |acc, (w, c)| {
            let v = w.letters().iter().fold(c.clone(), |p, &l| f.mul(&p, &values[l as usize]));
            f.add(&acc, &v)
        })
    }
}
