//! Commutative polynomials in `x0 … x3` and a small template parser for the
//! catalog (`+ - * ^`, parentheses, integers, named parameters).

use std::collections::BTreeMap;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::tensor::Tensor;

pub const NVARS: usize = 4;

pub type Exponents = [u8; NVARS];

/// A commutative polynomial in `x0 … x3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommPoly<F: Field> {
    field: F,
    terms: BTreeMap<Exponents, F::Elem>,
}

impl<F: Field> CommPoly<F> {
    pub fn zero(field: &F) -> Self {
        CommPoly { field: field.clone(), terms: BTreeMap::new() }
    }
    pub fn constant(field: &F, c: F::Elem) -> Self {
        let mut p = Self::zero(field);
        p.add_term([0; NVARS], c);
        p
    }
    pub fn var(field: &F, i: usize) -> Self {
        let mut e = [0; NVARS];
        e[i] = 1;
        let mut p = Self::zero(field);
        p.add_term(e, field.one());
        p
    }
    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &F::Elem)> {
        self.terms.iter()
    }
    pub fn coeff(&self, e: &Exponents) -> F::Elem {
        self.terms.get(e).cloned().unwrap_or_else(|| self.field.zero())
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn add_term(&mut self, e: Exponents, c: F::Elem) {
        let f = &self.field;
        let s = match self.terms.get(&e) {
            Some(old) => f.add(old, &c),
            None => c,
        };
        if f.is_zero(&s) {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, s);
        }
    }
    pub fn add(&self, other: &Self) -> Self {
        let mut p = self.clone();
        for (e, c) in &other.terms {
            p.add_term(*e, c.clone());
        }
        p
    }
    pub fn scale(&self, s: &F::Elem) -> Self {
        let mut p = Self::zero(&self.field);
        for (e, c) in &self.terms {
            p.add_term(*e, self.field.mul(c, s));
        }
        p
    }
    pub fn neg(&self) -> Self {
        self.scale(&self.field.from_i64(-1))
    }
    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    pub fn mul(&self, other: &Self) -> Self {
        let mut p = Self::zero(&self.field);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let mut e = [0; NVARS];
                for k in 0..NVARS {
                    e[k] = a[k] + b[k];
                }
                p.add_term(e, self.field.mul(ca, cb));
            }
        }
        p
    }
    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::constant(&self.field, self.field.one()), |acc, _| acc.mul(self))
    }
    /// Total degree of every term, if homogeneous and nonzero.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut degs = self.terms.keys().map(|e| e.iter().map(|&x| x as usize).sum::<usize>());
        let d = degs.next()?;
        degs.all(|x| x == d).then_some(d)
    }
    /// Lowest-priority variable that occurs, used to test whether a form involves `x_i`.
    pub fn uses_var(&self, i: usize) -> bool {
        self.terms.keys().any(|e| e[i] > 0)
    }
}

/// A homogeneous cubic form in `x0 … x3` (the zero form is allowed).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicForm<F: Field>(CommPoly<F>);

impl<F: Field> CubicForm<F> {
    pub fn new(p: CommPoly<F>) -> Result<Self> {
        match p.homogeneous_degree() {
            None if p.is_zero() => Ok(CubicForm(p)),
            Some(3) => Ok(CubicForm(p)),
            _ => Err(Error::Invalid("not a homogeneous cubic form".into())),
        }
    }
    pub fn poly(&self) -> &CommPoly<F> {
        &self.0
    }
    pub fn field(&self) -> &F {
        self.0.field()
    }

    /// `x_i x_j x_k` as a form.
    pub fn monomial(field: &F, idx: [usize; 3]) -> Self {
        let mut e = [0; NVARS];
        for i in idx {
            e[i] += 1;
        }
        let mut p = CommPoly::zero(field);
        p.add_term(e, field.one());
        CubicForm(p)
    }
}

/// The symmetric tensor mapping to `form` under `V^{⊗3} → S^3 V`.
pub fn symmetrize<F: Field>(form: &CubicForm<F>) -> Result<Tensor<F>> {
    let f = form.field();
    f.spec().require_char_not_2_3()?;
    let mut t = Tensor::zero(f, 3, NVARS);
    for (e, c) in form.poly().terms() {
        let mut letters = Vec::with_capacity(3);
        for (i, &k) in e.iter().enumerate() {
            letters.extend(std::iter::repeat_n(i, k as usize));
        }
        let perms = distinct_permutations(&letters);
        let share = f.div(c, &f.from_i64(perms.len() as i64)).expect("char not 2, 3");
        for p in perms {
            t.add_term(p, share.clone())?;
        }
    }
    Ok(t)
}

/// Image of `t` in `S^3 V`.
pub fn overline<F: Field>(t: &Tensor<F>) -> Result<CubicForm<F>> {
    if t.arity() != 3 || t.dim() != NVARS {
        return Err(Error::DimensionMismatch(format!("expected arity 3 over dimension {NVARS}")));
    }
    let mut p = CommPoly::zero(t.field());
    for (idx, c) in t.terms() {
        let mut e = [0; NVARS];
        for &i in idx {
            e[i] += 1;
        }
        p.add_term(e, c.clone());
    }
    CubicForm::new(p)
}

fn distinct_permutations(letters: &[usize]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for p in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
        let w: Vec<usize> = p.iter().map(|&k| letters[k]).collect();
        if !out.contains(&w) {
            out.push(w);
        }
    }
    out.sort();
    out
}

/// Parses a template such as `(x0 - alpha*x1)*x2^2`, substituting `params`.
pub fn parse_poly<F: Field>(field: &F, text: &str, params: &BTreeMap<String, BigRational>) -> Result<CommPoly<F>> {
    let tokens = tokenize(text)?;
    let mut p = Parser { field, tokens, pos: 0, params };
    let out = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(Error::Parse(format!("unexpected `{:?}` in `{text}`", p.tokens[p.pos])));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(i64),
    Ident(String),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Tok::Num(s.parse().map_err(|_| Error::Parse(format!("bad number `{s}`")))?));
        } else if ch.is_alphabetic() || ch == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*^()".contains(ch) {
            out.push(Tok::Op(ch));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character `{ch}`")));
        }
    }
    Ok(out)
}

struct Parser<'a, F: Field> {
    field: &'a F,
    tokens: Vec<Tok>,
    pos: usize,
    params: &'a BTreeMap<String, BigRational>,
}

impl<F: Field> Parser<'_, F> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<CommPoly<F>> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<CommPoly<F>> {
        let mut acc = self.unary()?;
        while self.eat('*') {
            acc = acc.mul(&self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<CommPoly<F>> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        let base = self.atom()?;
        if self.eat('^') {
            match self.tokens.get(self.pos).cloned() {
                Some(Tok::Num(n)) if (0..=12).contains(&n) => {
                    self.pos += 1;
                    Ok(base.pow(n as u32))
                }
                other => Err(Error::Parse(format!("bad exponent {other:?}"))),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<CommPoly<F>> {
        let tok =
            self.tokens.get(self.pos).cloned().ok_or_else(|| Error::Parse("unexpected end of template".into()))?;
        self.pos += 1;
        match tok {
            Tok::Num(n) => Ok(CommPoly::constant(self.field, self.field.from_i64(n))),
            Tok::Op('(') => {
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing `)`".into()));
                }
                Ok(e)
            }
            Tok::Ident(name) => {
                if let Some(i) = name.strip_prefix('x').and_then(|s| s.parse::<usize>().ok()) {
                    if i < NVARS {
                        return Ok(CommPoly::var(self.field, i));
                    }
                }
                let v = self.params.get(&name).ok_or_else(|| Error::Parse(format!("unknown parameter `{name}`")))?;
                Ok(CommPoly::constant(self.field, self.field.from_rational(v)?))
            }
            Tok::Op(c) => Err(Error::Parse(format!("unexpected `{c}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, Rationals};

    #[test]
    fn parses_templates() {
        let q = Rationals;
        let mut params = BTreeMap::new();
        params.insert("alpha".to_string(), rat(2, 1));
        let p = parse_poly(&q, "(x0 - alpha*x1)*x2^2", &params).unwrap();
        assert_eq!(p.coeff(&[1, 0, 2, 0]), rat(1, 1));
        assert_eq!(p.coeff(&[0, 1, 2, 0]), rat(-2, 1));
        assert_eq!(p.homogeneous_degree(), Some(3));
        assert!(parse_poly(&q, "x0 + beta", &params).is_err());
        assert!(parse_poly(&q, "(x0", &params).is_err());
        assert!(parse_poly(&q, "x0 $ x1", &params).is_err());
        let p = parse_poly(&q, "-x1^2 + x0*x2", &params).unwrap();
        assert_eq!(p.coeff(&[0, 2, 0, 0]), rat(-1, 1));
    }

    #[test]
    fn symmetrize_examples() {
        let q = Rationals;
        let t = symmetrize(&CubicForm::monomial(&q, [0, 0, 0])).unwrap();
        assert_eq!(t.nnz(), 1);
        assert_eq!(t.coeff(&[0, 0, 0]), rat(1, 1));
        let t = symmetrize(&CubicForm::monomial(&q, [0, 1, 2])).unwrap();
        assert_eq!(t.nnz(), 6);
        assert_eq!(t.coeff(&[2, 1, 0]), rat(1, 6));
        let t = symmetrize(&CubicForm::monomial(&q, [0, 0, 1])).unwrap();
        assert_eq!(t.nnz(), 3);
        assert_eq!(t.coeff(&[0, 1, 0]), rat(1, 3));
        assert_eq!(overline(&t).unwrap(), CubicForm::monomial(&q, [0, 1, 0]));
    }
}
