//! Generators-and-relations presentations: `GL_m(e,f)`, `SL_m(e,f)`, the
//! reduced `m = 2` form, superpotential algebras `A(s,N)`, and generator-level
//! structure maps (counit, antipode, change of basis).
//!
//! Relations are stored as `LHS − RHS`. Generators are listed in precedence
//! order (first = largest letter): `a` row-major, then `b`, then `D`, `Dinv`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::ncgb::MonomialOrder;
use crate::poly::{Letter, NcPoly, Word};
use crate::superpotential::AlgebraData;
use crate::superpotential::TwistedSuperpotential;
use crate::tensor::{Matrix, Tensor, TensorJson};

#[derive(Debug, Clone, PartialEq)]
pub struct Presentation<F: Field> {
    field: F,
    gens: Vec<String>,
    rels: Vec<NcPoly<F>>,
    meta: Map<String, Value>,
}

impl<F: Field> Presentation<F> {
    pub fn new(field: &F, gens: Vec<String>, rels: Vec<NcPoly<F>>, meta: Map<String, Value>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for g in &gens {
            if !seen.insert(g.as_str()) {
                return Err(Error::Invalid(format!("duplicate generator `{g}`")));
            }
        }
        if gens.len() > Letter::MAX as usize {
            return Err(Error::Invalid("too many generators".into()));
        }
        for r in &rels {
            if r.terms().iter().any(|(w, _)| w.letters().iter().any(|&l| l as usize >= gens.len())) {
                return Err(Error::Invalid("relation uses an undeclared generator".into()));
            }
        }
        Ok(Presentation { field: field.clone(), gens, rels, meta })
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn gens(&self) -> &[String] {
        &self.gens
    }
    pub fn rels(&self) -> &[NcPoly<F>] {
        &self.rels
    }
    pub fn meta(&self) -> &Map<String, Value> {
        &self.meta
    }
    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g == name)
    }
    pub fn max_relation_degree(&self) -> usize {
        self.rels.iter().filter_map(NcPoly::degree).max().unwrap_or(0)
    }
    pub fn is_homogeneous(&self) -> bool {
        self.rels.iter().all(NcPoly::is_homogeneous)
    }

    /// Same presentation with coefficients mapped into another field.
    pub fn map_field<G: Field>(&self, g: &G, conv: impl Fn(&F::Elem) -> Result<G::Elem>) -> Result<Presentation<G>> {
        let rels = self.rels.iter().map(|r| r.try_map_field(g, &conv)).collect::<Result<Vec<_>>>()?;
        let mut meta = self.meta.clone();
        meta.insert("field".into(), json!(g.spec().to_string()));
        Presentation::new(g, self.gens.clone(), rels, meta)
    }

    /// Canonical text: one relation per line, `*` for concatenation.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "gens: {}", self.gens.join(", "));
        for r in &self.rels {
            let _ = writeln!(s, "{}", self.format_poly(r));
        }
        s
    }

    pub fn format_poly(&self, p: &NcPoly<F>) -> String {
        format_poly(&self.field, &self.gens, p)
    }

    /// A Magma script declaring the free algebra and the relation ideal.
    pub fn to_magma(&self, bound: usize) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "// Generated presentation; construction: {}",
            self.meta.get("construction").and_then(Value::as_str).unwrap_or("custom")
        );
        let _ = writeln!(s, "// {} generators, {} relations", self.gens.len(), self.rels.len());
        let field = match self.field.spec() {
            crate::field::FieldSpec::Rationals => "Rationals()".to_string(),
            crate::field::FieldSpec::Prime(p) => format!("GF({p})"),
        };
        let _ = writeln!(s, "K := {field};");
        let _ = writeln!(s, "F<{}> := FreeAlgebra(K, {});", self.gens.join(", "), self.gens.len());
        let _ = writeln!(s, "rels := [");
        for (i, r) in self.rels.iter().enumerate() {
            let sep = if i + 1 == self.rels.len() { "" } else { "," };
            let _ = writeln!(s, "    {}{}", self.format_poly(r), sep);
        }
        let _ = writeln!(s, "];");
        let _ = writeln!(s, "I := ideal<F | rels>;");
        let _ = writeln!(s, "G := GroebnerBasis(I, {bound});");
        let _ = writeln!(s, "print #G, 1 in I;");
        s
    }

    pub fn to_json(&self) -> PresentationJson {
        let rels = self
            .rels
            .iter()
            .map(|r| {
                r.terms()
                    .iter()
                    .map(|(w, c)| {
                        let (num, den) = self.field.to_parts(c);
                        TermJson {
                            word: w.letters().iter().map(|&l| self.gens[l as usize].clone()).collect(),
                            num,
                            den,
                        }
                    })
                    .collect()
            })
            .collect();
        PresentationJson { gens: self.gens.clone(), rels, meta: self.meta.clone() }
    }

    pub fn from_json(field: &F, j: &PresentationJson) -> Result<Self> {
        let index: BTreeMap<&str, Letter> = j.gens.iter().enumerate().map(|(i, g)| (g.as_str(), i as Letter)).collect();
        let mut rels = Vec::with_capacity(j.rels.len());
        for r in &j.rels {
            let mut terms = Vec::with_capacity(r.len());
            for t in r {
                let letters = t
                    .word
                    .iter()
                    .map(|g| {
                        index.get(g.as_str()).copied().ok_or_else(|| Error::Parse(format!("unknown generator `{g}`")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                terms.push((Word::from_letters(&letters), field.parse_parts(&t.num, &t.den)?));
            }
            rels.push(NcPoly::from_terms(field, terms));
        }
        Presentation::new(field, j.gens.clone(), rels, j.meta.clone())
    }
}

pub fn format_poly<F: Field>(f: &F, gens: &[String], p: &NcPoly<F>) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut s = String::new();
    for (k, (w, c)) in p.terms().iter().enumerate() {
        let text = f.format(c);
        let (neg, mag) = match text.strip_prefix('-') {
            Some(m) => (true, m.to_string()),
            None => (false, text),
        };
        if k == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let word: Vec<&str> = w.letters().iter().map(|&l| gens[l as usize].as_str()).collect();
        if word.is_empty() {
            s.push_str(&mag);
        } else if mag == "1" {
            s.push_str(&word.join("*"));
        } else {
            let _ = write!(s, "{}*{}", mag, word.join("*"));
        }
    }
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PresentationJson {
    pub gens: Vec<String>,
    pub rels: Vec<Vec<TermJson>>,
    pub meta: Map<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub word: Vec<String>,
    pub num: String,
    pub den: String,
}

impl PresentationJson {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("presentation json serializes")
    }
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Which universal quantum group a presentation encodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Gl,
    Sl,
}

impl Variant {
    pub fn name(&self) -> &'static str {
        match self {
            Variant::Gl => "GL",
            Variant::Sl => "SL",
        }
    }
}

/// Generator layout of `GL_m(e,f)` / `SL_m(e,f)` with `dim U = p`, `dim V = q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GlLayout {
    pub p: usize,
    pub q: usize,
    pub variant: Variant,
}

impl GlLayout {
    /// `a_{ij}`, `i < p`, `j < q` (0-based).
    pub fn a(&self, i: usize, j: usize) -> Letter {
        (i * self.q + j) as Letter
    }
    /// `b_{ij}`, `i < q`, `j < p` (0-based).
    pub fn b(&self, i: usize, j: usize) -> Letter {
        (self.p * self.q + i * self.p + j) as Letter
    }
    pub fn d(&self) -> Option<Letter> {
        (self.variant == Variant::Gl).then_some((2 * self.p * self.q) as Letter)
    }
    pub fn dinv(&self) -> Option<Letter> {
        (self.variant == Variant::Gl).then_some((2 * self.p * self.q + 1) as Letter)
    }
    pub fn num_gens(&self) -> usize {
        2 * self.p * self.q + if self.variant == Variant::Gl { 2 } else { 0 }
    }
    pub fn names(&self) -> Vec<String> {
        let mut g = Vec::with_capacity(self.num_gens());
        for i in 0..self.p {
            for j in 0..self.q {
                g.push(format!("a_{}_{}", i + 1, j + 1));
            }
        }
        for i in 0..self.q {
            for j in 0..self.p {
                g.push(format!("b_{}_{}", i + 1, j + 1));
            }
        }
        if self.variant == Variant::Gl {
            g.push("D".into());
            g.push("Dinv".into());
        }
        g
    }
}

fn all_indices(dim: usize, m: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = dim.pow(m as u32);
    (0..total).map(move |pos| crate::tensor::unflatten_index(pos, m, dim))
}

fn quantum_group_meta<F: Field>(variant: Variant, e: &Tensor<F>, f: &Tensor<F>) -> Map<String, Value> {
    let mut meta = Map::new();
    meta.insert("construction".into(), json!(format!("{}_{}(e,f)", variant.name(), e.arity())));
    meta.insert("variant".into(), json!(variant));
    meta.insert("m".into(), json!(e.arity()));
    meta.insert("p".into(), json!(e.dim()));
    meta.insert("q".into(), json!(f.dim()));
    meta.insert("field".into(), json!(e.field().spec().to_string()));
    meta.insert("diagonal".into(), json!(e == f));
    meta.insert("e".into(), serde_json::to_value(TensorJson::from_tensor(e)).expect("tensor json"));
    meta.insert("f".into(), serde_json::to_value(TensorJson::from_tensor(f)).expect("tensor json"));
    meta
}

/// The relations of `GL_m(e,f)` (or `SL_m` with `D = 1`) for raw tensors.
/// Nondegeneracy is the caller's business; [`build_gl`] checks it.
pub fn quantum_group_from_tensors<F: Field>(e: &Tensor<F>, f: &Tensor<F>, variant: Variant) -> Result<Presentation<F>> {
    if e.arity() != f.arity() {
        return Err(Error::ArityMismatch { left: e.arity(), right: f.arity() });
    }
    let fld = e.field();
    let m = e.arity();
    let lay = GlLayout { p: e.dim(), q: f.dim(), variant };
    let mut rels = Vec::new();

    // Σ_i f_i a_{j1 i1} ⋯ a_{jm im} − e_j D^{-1}
    for j in all_indices(lay.p, m) {
        let mut terms: Vec<(Word, F::Elem)> = f
            .terms()
            .map(|(i, c)| {
                let letters: Vec<Letter> = j.iter().zip(i).map(|(&jk, &ik)| lay.a(jk, ik)).collect();
                (Word::from_letters(&letters), c.clone())
            })
            .collect();
        let ej = e.coeff(&j);
        if !fld.is_zero(&ej) {
            let w = lay.dinv().map(|d| Word::from_letters(&[d])).unwrap_or_default();
            terms.push((w, fld.neg(&ej)));
        }
        rels.push(NcPoly::from_terms(fld, terms));
    }
    // Σ_i e_i b_{jm im} ⋯ b_{j1 i1} − f_j D
    for j in all_indices(lay.q, m) {
        let mut terms: Vec<(Word, F::Elem)> = e
            .terms()
            .map(|(i, c)| {
                let letters: Vec<Letter> = j.iter().zip(i).rev().map(|(&jk, &ik)| lay.b(jk, ik)).collect();
                (Word::from_letters(&letters), c.clone())
            })
            .collect();
        let fj = f.coeff(&j);
        if !fld.is_zero(&fj) {
            let w = lay.d().map(|d| Word::from_letters(&[d])).unwrap_or_default();
            terms.push((w, fld.neg(&fj)));
        }
        rels.push(NcPoly::from_terms(fld, terms));
    }
    if let (Some(d), Some(di)) = (lay.d(), lay.dinv()) {
        let minus_one = fld.from_i64(-1);
        rels.push(NcPoly::from_terms(
            fld,
            vec![(Word::from_letters(&[d, di]), fld.one()), (Word::empty(), minus_one.clone())],
        ));
        rels.push(NcPoly::from_terms(fld, vec![(Word::from_letters(&[di, d]), fld.one()), (Word::empty(), minus_one)]));
    }
    // B A − I
    for i in 0..lay.q {
        for j in 0..lay.q {
            let mut terms: Vec<(Word, F::Elem)> =
                (0..lay.p).map(|k| (Word::from_letters(&[lay.b(i, k), lay.a(k, j)]), fld.one())).collect();
            if i == j {
                terms.push((Word::empty(), fld.from_i64(-1)));
            }
            rels.push(NcPoly::from_terms(fld, terms));
        }
    }
    Presentation::new(fld, lay.names(), rels, quantum_group_meta(variant, e, f))
}

pub fn build_gl<F: Field>(e: &TwistedSuperpotential<F>, f: &TwistedSuperpotential<F>) -> Result<Presentation<F>> {
    quantum_group_from_tensors(e.tensor(), f.tensor(), Variant::Gl)
}

pub fn build_sl<F: Field>(e: &TwistedSuperpotential<F>, f: &TwistedSuperpotential<F>) -> Result<Presentation<F>> {
    quantum_group_from_tensors(e.tensor(), f.tensor(), Variant::Sl)
}

pub fn build_quantum_group<F: Field>(
    e: &TwistedSuperpotential<F>,
    f: &TwistedSuperpotential<F>,
    variant: Variant,
) -> Result<Presentation<F>> {
    quantum_group_from_tensors(e.tensor(), f.tensor(), variant)
}

fn matrix_to_json<F: Field>(m: &Matrix<F>) -> Value {
    let f = m.field();
    Value::Array((0..m.rows()).map(|r| Value::Array(m.row(r).iter().map(|x| json!(f.format(x))).collect())).collect())
}

/// `SL_2(e,f)` on the `a` generators only: `A F A^T E^{-1} = I_p`, `F A^T E^{-1} A = I_q`.
/// Identical relations are kept once.
pub fn build_sl2_reduced<F: Field>(e: &Matrix<F>, f: &Matrix<F>) -> Result<Presentation<F>> {
    if !e.is_square() || !f.is_square() {
        return Err(Error::DimensionMismatch("E and F must be square".into()));
    }
    let fld = e.field();
    let einv = e.invert()?;
    f.invert()?;
    let (p, q) = (e.rows(), f.rows());
    let a = |i: usize, j: usize| (i * q + j) as Letter;
    let mut rels: Vec<NcPoly<F>> = Vec::new();
    // (A F A^T E^{-1})_{ij} = Σ a_{ik} F_{kl} a_{rl} Einv_{rj}
    for i in 0..p {
        for j in 0..p {
            let mut terms = Vec::new();
            for k in 0..q {
                for l in 0..q {
                    for r in 0..p {
                        let c = fld.mul(f.get(k, l), einv.get(r, j));
                        if !fld.is_zero(&c) {
                            terms.push((Word::from_letters(&[a(i, k), a(r, l)]), c));
                        }
                    }
                }
            }
            if i == j {
                terms.push((Word::empty(), fld.from_i64(-1)));
            }
            rels.push(NcPoly::from_terms(fld, terms));
        }
    }
    // (F A^T E^{-1} A)_{ij} = Σ F_{ik} a_{lk} Einv_{lr} a_{rj}
    for i in 0..q {
        for j in 0..q {
            let mut terms = Vec::new();
            for k in 0..q {
                for l in 0..p {
                    for r in 0..p {
                        let c = fld.mul(f.get(i, k), einv.get(l, r));
                        if !fld.is_zero(&c) {
                            terms.push((Word::from_letters(&[a(l, k), a(r, j)]), c));
                        }
                    }
                }
            }
            if i == j {
                terms.push((Word::empty(), fld.from_i64(-1)));
            }
            rels.push(NcPoly::from_terms(fld, terms));
        }
    }
    let mut unique: Vec<NcPoly<F>> = Vec::with_capacity(rels.len());
    for r in rels {
        if !r.is_zero() && !unique.contains(&r) {
            unique.push(r);
        }
    }
    let gens = if p * q == 1 {
        vec!["a".to_string()]
    } else {
        (0..p).flat_map(|i| (0..q).map(move |j| format!("a_{}_{}", i + 1, j + 1))).collect()
    };
    let mut meta = Map::new();
    meta.insert("construction".into(), json!("SL_2 reduced"));
    meta.insert("variant".into(), json!(Variant::Sl));
    meta.insert("m".into(), json!(2));
    meta.insert("p".into(), json!(p));
    meta.insert("q".into(), json!(q));
    meta.insert("field".into(), json!(fld.spec().to_string()));
    meta.insert("E".into(), matrix_to_json(e));
    meta.insert("F".into(), matrix_to_json(f));
    Presentation::new(fld, gens, unique, meta)
}

/// `A(s, N)`: generators `x_1 … x_q`, one relation per RREF basis vector of `∂^{m-N}(k s)`.
pub fn build_algebra<F: Field>(alg: &AlgebraData<F>) -> Result<Presentation<F>> {
    let fld = alg.superpotential().field();
    let q = alg.dim();
    let n = alg.degree();
    let basis = alg.relations().basis();
    let mut rels = Vec::with_capacity(basis.rows());
    for r in 0..basis.rows() {
        let terms = basis
            .row(r)
            .iter()
            .enumerate()
            .filter(|(_, c)| !fld.is_zero(c))
            .map(|(pos, c)| {
                let idx = crate::tensor::unflatten_index(pos, n, q);
                let letters: Vec<Letter> = idx.iter().map(|&i| i as Letter).collect();
                (Word::from_letters(&letters), c.clone())
            })
            .collect();
        rels.push(NcPoly::from_terms(fld, terms));
    }
    let gens = (1..=q).map(|i| format!("x{i}")).collect();
    let mut meta = Map::new();
    meta.insert("construction".into(), json!(format!("A(s,{n})")));
    meta.insert("N".into(), json!(n));
    meta.insert("field".into(), json!(fld.spec().to_string()));
    meta.insert("s".into(), serde_json::to_value(TensorJson::from_tensor(alg.superpotential().tensor()))?);
    Presentation::new(fld, gens, rels, meta)
}

fn layout_from_meta<F: Field>(pres: &Presentation<F>) -> Result<GlLayout> {
    let get = |k: &str| pres.meta().get(k).and_then(Value::as_u64).map(|x| x as usize);
    let variant: Variant = pres
        .meta()
        .get("variant")
        .cloned()
        .map(serde_json::from_value)
        .transpose()?
        .ok_or_else(|| Error::Invalid("presentation is not a GL/SL construction".into()))?;
    match (get("p"), get("q")) {
        (Some(p), Some(q)) => Ok(GlLayout { p, q, variant }),
        _ => Err(Error::Invalid("presentation lacks p/q metadata".into())),
    }
}

/// Default precedence: for `GL_m`/`SL_m` presentations the `a` block row-major, then the
/// `b` block in reverse row-major order, then `D`, `Dinv`; reversed generator order for
/// reduced `SL_2`; generator order otherwise.
pub fn preferred_order<F: Field>(pres: &Presentation<F>) -> MonomialOrder {
    let n = pres.gens().len();
    let construction = pres.meta().get("construction").and_then(Value::as_str).unwrap_or("");
    if construction == "SL_2 reduced" {
        return MonomialOrder::from_precedence((0..n).rev().collect()).expect("permutation");
    }
    let quantum_group =
        (construction.starts_with("GL_") || construction.starts_with("SL_")) && construction.ends_with("(e,f)");
    let lay = match layout_from_meta(pres) {
        Ok(lay) if quantum_group && lay.num_gens() == n => lay,
        _ => return MonomialOrder::identity(n),
    };
    let pq = lay.p * lay.q;
    let prec: Vec<usize> = (0..pq).chain((pq..2 * pq).rev()).chain(2 * pq..n).collect();
    MonomialOrder::from_precedence(prec).expect("permutation")
}

/// Every relation evaluated at `a_ij, b_ij ↦ δ_ij`, `D^{±1} ↦ 1`, without checking
/// that the presentation is diagonal.
pub fn evaluate_counit<F: Field>(pres: &Presentation<F>) -> Result<Vec<F::Elem>> {
    let lay = layout_from_meta(pres)?;
    let f = pres.field();
    let mut values = vec![f.zero(); lay.num_gens()];
    for i in 0..lay.p.min(lay.q) {
        values[lay.a(i, i) as usize] = f.one();
        values[lay.b(i, i) as usize] = f.one();
    }
    for d in [lay.d(), lay.dinv()].into_iter().flatten() {
        values[d as usize] = f.one();
    }
    Ok(pres.rels().iter().map(|r| r.evaluate(f, &values)).collect())
}

/// Counit residuals of `GL_m(e,e)`; all zero when the counit is an algebra map.
pub fn counit_residual<F: Field>(pres: &Presentation<F>) -> Result<Vec<F::Elem>> {
    if pres.meta().get("diagonal").and_then(Value::as_bool) != Some(true) {
        return Err(Error::NotDiagonal);
    }
    evaluate_counit(pres)
}

fn letter_poly<F: Field>(f: &F, l: Letter) -> NcPoly<F> {
    NcPoly::monomial(f, Word::from_letters(&[l]), f.one())
}

/// Images of the generators of `GL_m(e,f)` under the antipode, as polynomials in the
/// generators of `GL_m(f,e)`:
/// `S(A) = B^{f,e}`, `S(B) = (D^{f,e})^{-1} Q^{-T} A^{f,e} P^T D^{f,e}`, `S(D^{±1}) = D^{∓1}`.
/// For `SL` the `D` factors are `1`.
pub fn antipode_images<F: Field>(
    e: &TwistedSuperpotential<F>,
    f: &TwistedSuperpotential<F>,
    variant: Variant,
) -> Result<Vec<NcPoly<F>>> {
    let fld = e.field();
    let (p, q) = (e.dim(), f.dim());
    let src = GlLayout { p, q, variant };
    let dst = GlLayout { p: q, q: p, variant };
    let pt = e.twist().transpose();
    let qinvt = f.twist().invert()?.transpose();
    let mut images = vec![NcPoly::zero(); src.num_gens()];
    for i in 0..p {
        for j in 0..q {
            // B^{f,e} is p × q
            images[src.a(i, j) as usize] = letter_poly(fld, dst.b(i, j));
        }
    }
    for i in 0..q {
        for j in 0..p {
            let mut terms = Vec::new();
            for k in 0..q {
                for l in 0..p {
                    let c = fld.mul(qinvt.get(i, k), pt.get(l, j));
                    if fld.is_zero(&c) {
                        continue;
                    }
                    let core = [dst.a(k, l)];
                    let w = match (dst.d(), dst.dinv()) {
                        (Some(d), Some(di)) => Word::from_letters(&[di, core[0], d]),
                        _ => Word::from_letters(&core),
                    };
                    terms.push((w, c));
                }
            }
            images[src.b(i, j) as usize] = NcPoly::from_terms(fld, terms);
        }
    }
    if let (Some(d), Some(di)) = (src.d(), src.dinv()) {
        images[d as usize] = letter_poly(fld, dst.dinv().expect("GL layout"));
        images[di as usize] = letter_poly(fld, dst.d().expect("GL layout"));
    }
    Ok(images)
}

/// Antipode of the reduced `SL_2` presentation: `S(A^{e,f}) = E (A^{f,e})^T F^{-1}`,
/// i.e. `B^{f,e}` written in the `a` generators of `SL_2(f,e)`.
pub fn antipode_images_sl2_reduced<F: Field>(e: &Matrix<F>, f: &Matrix<F>) -> Result<Vec<NcPoly<F>>> {
    let fld = e.field();
    let (p, q) = (e.rows(), f.rows());
    let finv = f.invert()?;
    // generators of SL_2(f,e) form a q × p matrix
    let a_fe = |i: usize, j: usize| (i * p + j) as Letter;
    let mut images = Vec::with_capacity(p * q);
    for i in 0..p {
        for j in 0..q {
            let mut terms = Vec::new();
            for k in 0..p {
                for l in 0..q {
                    let c = fld.mul(e.get(i, k), finv.get(l, j));
                    if !fld.is_zero(&c) {
                        terms.push((Word::from_letters(&[a_fe(l, k)]), c));
                    }
                }
            }
            images.push(NcPoly::from_terms(fld, terms));
        }
    }
    Ok(images)
}

/// Result of [`basis_change`]: the transformed superpotentials, the scalars with
/// `φ^{⊗m}(e) = α e'`, `ψ^{⊗m}(f) = β f'`, and the substitution
/// `GL_m(e,f) → GL_m(e',f')` on generators.
#[derive(Debug, Clone)]
pub struct BasisChange<F: Field> {
    pub e_new: TwistedSuperpotential<F>,
    pub f_new: TwistedSuperpotential<F>,
    pub alpha: F::Elem,
    pub beta: F::Elem,
    pub substitution: Vec<NcPoly<F>>,
}

/// `x = α y` for a nonzero scalar `α`, if one exists.
pub fn scalar_ratio<F: Field>(x: &Tensor<F>, y: &Tensor<F>) -> Option<F::Elem> {
    let f = x.field();
    let (idx, yc) = y.terms().next()?;
    let alpha = f.div(&x.coeff(idx), yc)?;
    if f.is_zero(&alpha) || *x != y.scale(&alpha) {
        return None;
    }
    Some(alpha)
}

/// Transforms `e`, `f` by `φ ∈ GL(U)`, `ψ ∈ GL(V)`. `e'` is `φ^{⊗m}(e)` rescaled so its
/// first coefficient matches that of `e` (likewise `f'`).
pub fn basis_change<F: Field>(
    e: &TwistedSuperpotential<F>,
    f: &TwistedSuperpotential<F>,
    phi: &Matrix<F>,
    psi: &Matrix<F>,
) -> Result<BasisChange<F>> {
    let normalize = |t: &Tensor<F>, m: &Matrix<F>| -> Result<(Tensor<F>, F::Elem)> {
        let image = t.apply_on_all(m)?;
        let fld = t.field();
        let (idx, c) = image.terms().next().ok_or(Error::Singular)?;
        let orig = t.coeff(idx);
        let alpha = if fld.is_zero(&orig) { c.clone() } else { fld.div(c, &orig).expect("nonzero") };
        let inv = fld.inv(&alpha).expect("nonzero");
        Ok((image.scale(&inv), alpha))
    };
    phi.invert()?;
    psi.invert()?;
    let (e_new, _) = normalize(e.tensor(), phi)?;
    let (f_new, _) = normalize(f.tensor(), psi)?;
    let e_new = TwistedSuperpotential::new(e_new)?;
    let f_new = TwistedSuperpotential::new(f_new)?;
    basis_change_to(e, f, &e_new, &f_new, phi, psi)
}

/// Substitution `A ↦ φ^{-1} A' ψ`, `B ↦ ψ^{-1} B' φ`, `D ↦ (α/β) D'`,
/// `D^{-1} ↦ (β/α) D'^{-1}` for given `e'`, `f'`; the scalars are checked exactly.
pub fn basis_change_to<F: Field>(
    e: &TwistedSuperpotential<F>,
    f: &TwistedSuperpotential<F>,
    e_new: &TwistedSuperpotential<F>,
    f_new: &TwistedSuperpotential<F>,
    phi: &Matrix<F>,
    psi: &Matrix<F>,
) -> Result<BasisChange<F>> {
    let fld = e.field();
    let phi_inv = phi.invert()?;
    let psi_inv = psi.invert()?;
    let not_multiple = || Error::Invalid("transformed superpotential is not a multiple of the target".into());
    let alpha = scalar_ratio(&e.tensor().apply_on_all(phi)?, e_new.tensor()).ok_or_else(not_multiple)?;
    let beta = scalar_ratio(&f.tensor().apply_on_all(psi)?, f_new.tensor()).ok_or_else(not_multiple)?;
    let (p, q) = (e.dim(), f.dim());
    let lay = GlLayout { p, q, variant: Variant::Gl };
    let mut subst = vec![NcPoly::zero(); lay.num_gens()];
    for i in 0..p {
        for j in 0..q {
            let mut terms = Vec::new();
            for k in 0..p {
                for l in 0..q {
                    let c = fld.mul(phi_inv.get(i, k), psi.get(l, j));
                    if !fld.is_zero(&c) {
                        terms.push((Word::from_letters(&[lay.a(k, l)]), c));
                    }
                }
            }
            subst[lay.a(i, j) as usize] = NcPoly::from_terms(fld, terms);
        }
    }
    for i in 0..q {
        for j in 0..p {
            let mut terms = Vec::new();
            for k in 0..q {
                for l in 0..p {
                    let c = fld.mul(psi_inv.get(i, k), phi.get(l, j));
                    if !fld.is_zero(&c) {
                        terms.push((Word::from_letters(&[lay.b(k, l)]), c));
                    }
                }
            }
            subst[lay.b(i, j) as usize] = NcPoly::from_terms(fld, terms);
        }
    }
    let ratio = fld.div(&alpha, &beta).expect("beta nonzero");
    let d = lay.d().expect("GL layout");
    let di = lay.dinv().expect("GL layout");
    subst[d as usize] = NcPoly::monomial(fld, Word::from_letters(&[d]), ratio.clone());
    subst[di as usize] = NcPoly::monomial(fld, Word::from_letters(&[di]), fld.inv(&ratio).expect("nonzero"));
    Ok(BasisChange { e_new: e_new.clone(), f_new: f_new.clone(), alpha, beta, substitution: subst })
}
