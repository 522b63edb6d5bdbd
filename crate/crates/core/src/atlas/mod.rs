//! Cubic-surface superpotentials on a 4-dimensional space: symmetric-group
//! idempotents on `V^{⊗3}`, alternating tensors `w^(ijk)`, symmetrized cubic
//! forms, the singular-surface family catalog, and pairwise classification.

mod classify;
pub mod cubic;

use std::collections::BTreeMap;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec};
use crate::superpotential::TwistedSuperpotential;
use crate::tensor::Tensor;

pub use classify::{
    cache_key, classify_pair, classify_presentation, component_report, content_hash, strip_timing, ClassifyConfig,
    Component, ComponentReport, Item, PairResult, TableComparison,
};
pub use cubic::{overline, parse_poly, symmetrize, CommPoly, CubicForm, NVARS};

const BUILTIN_CATALOG: &str = include_str!("../../data/families.json");

/// Elements of `k S_3` acting on `V^{⊗3}` by permuting tensor slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Idempotent {
    /// `1/3 (1 + (123) + (321))`
    C,
    /// projection onto symmetric tensors
    S,
    /// projection onto alternating tensors
    CMinusS,
    /// the complement of `c`
    OneMinusC,
}

fn all_perms() -> [([usize; 3], i64); 6] {
    [([0, 1, 2], 1), ([1, 2, 0], 1), ([2, 0, 1], 1), ([1, 0, 2], -1), ([0, 2, 1], -1), ([2, 1, 0], -1)]
}

pub fn idempotent_apply<F: Field>(which: Idempotent, t: &Tensor<F>) -> Result<Tensor<F>> {
    let f = t.field();
    f.spec().require_char_not_2_3()?;
    if t.arity() != 3 {
        return Err(Error::ArityMismatch { left: t.arity(), right: 3 });
    }
    let third = f.inv(&f.from_i64(3)).expect("char not 3");
    let sixth = f.inv(&f.from_i64(6)).expect("char not 2, 3");
    let mut acc = Tensor::zero(f, 3, t.dim());
    let add = |acc: &mut Tensor<F>, perm: &[usize], c: &F::Elem| -> Result<()> {
        *acc = acc.add(&t.permute_slots(perm).scale(c))?;
        Ok(())
    };
    for (perm, sign) in all_perms() {
        let even = sign == 1;
        let c = match which {
            Idempotent::C if even => third.clone(),
            Idempotent::C => continue,
            Idempotent::S => sixth.clone(),
            Idempotent::CMinusS => f.mul(&sixth, &f.from_i64(sign)),
            Idempotent::OneMinusC if perm == [0, 1, 2] => f.sub(&f.one(), &third),
            Idempotent::OneMinusC if even => f.neg(&third),
            Idempotent::OneMinusC => continue,
        };
        add(&mut acc, &perm, &c)?;
    }
    Ok(acc)
}

/// `1/3 (x_i x_j x_k + x_k x_i x_j + x_j x_k x_i) − 1/3 (x_k x_j x_i + x_i x_k x_j + x_j x_i x_k)`.
pub fn w_ijk<F: Field>(field: &F, i: usize, j: usize, k: usize) -> Result<Tensor<F>> {
    field.spec().require_char_not_2_3()?;
    if i == j || j == k || i == k {
        return Err(Error::RepeatedIndex(i, j, k));
    }
    for x in [i, j, k] {
        if x >= NVARS {
            return Err(Error::IndexOutOfRange { index: x, dim: NVARS });
        }
    }
    let third = field.inv(&field.from_i64(3)).expect("char not 3");
    let neg = field.neg(&third);
    let mut t = Tensor::zero(field, 3, NVARS);
    for (idx, c) in [
        ([i, j, k], &third),
        ([k, i, j], &third),
        ([j, k, i], &third),
        ([k, j, i], &neg),
        ([i, k, j], &neg),
        ([j, i, k], &neg),
    ] {
        t.add_term(idx.to_vec(), c.clone())?;
    }
    Ok(t)
}

/// `a0 w^(012) + a1 w^(023) + a2 w^(013) + a3 w^(123)`.
pub fn w0<F: Field>(field: &F, a: &[F::Elem; 4]) -> Result<Tensor<F>> {
    let mut t = Tensor::zero(field, 3, NVARS);
    for (c, (i, j, k)) in a.iter().zip([(0, 1, 2), (0, 2, 3), (0, 1, 3), (1, 2, 3)]) {
        if !field.is_zero(c) {
            t = t.add(&w_ijk(field, i, j, k)?.scale(c))?;
        }
    }
    Ok(t)
}

/// `Σ_σ sgn(σ) x_σ(1) ⊗ x_σ(2) ⊗ x_σ(3)` on a 3-dimensional space: the polynomial ring.
pub fn poly_superpotential<F: Field>(field: &F) -> Result<TwistedSuperpotential<F>> {
    let mut t = Tensor::zero(field, 3, 3);
    for (perm, sign) in all_perms() {
        t.add_term(perm.to_vec(), field.from_i64(sign))?;
    }
    TwistedSuperpotential::new(t)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Constraint {
    Distinct { distinct: Vec<String> },
    Exclude { exclude: Vec<String>, values: Vec<String> },
}

/// One row of the catalog: either `F = x3 f2 − f3` or an explicit `form`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceFamily {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f2: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f3: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<String>,
    pub params: Vec<String>,
    pub constraints: Vec<Constraint>,
    /// Conjectured component label, or `degenerate`.
    pub expected: String,
    pub in_table: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Catalog {
    pub defaults: BTreeMap<String, String>,
    pub families: Vec<SurfaceFamily>,
}

pub type Params = BTreeMap<String, BigRational>;

fn parse_rational(s: &str) -> Result<BigRational> {
    s.trim().parse::<BigRational>().map_err(|_| Error::Parse(format!("bad rational `{s}`")))
}

impl Catalog {
    pub fn builtin() -> Self {
        Self::parse(BUILTIN_CATALOG).expect("builtin catalog parses")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let c: Catalog = serde_json::from_str(text)?;
        for fam in &c.families {
            match (&fam.f2, &fam.f3, &fam.form) {
                (Some(_), Some(_), None) | (None, None, Some(_)) => {}
                _ => return Err(Error::Parse(format!("family {} needs f2 and f3, or form", fam.name))),
            }
        }
        Ok(c)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("catalog serializes")
    }

    pub fn family(&self, name: &str) -> Result<&SurfaceFamily> {
        self.families.iter().find(|f| f.name == name).ok_or_else(|| Error::Invalid(format!("no family named `{name}`")))
    }

    pub fn default_params(&self) -> Result<Params> {
        self.defaults.iter().map(|(k, v)| Ok((k.clone(), parse_rational(v)?))).collect()
    }
}

impl SurfaceFamily {
    pub fn check_params(&self, params: &Params) -> Result<()> {
        for p in &self.params {
            if !params.contains_key(p) {
                return Err(Error::ConstraintViolated(format!("{}: parameter {p} missing", self.name)));
            }
        }
        for c in &self.constraints {
            match c {
                Constraint::Distinct { distinct } => {
                    for (i, a) in distinct.iter().enumerate() {
                        for b in &distinct[i + 1..] {
                            if params.get(a) == params.get(b) {
                                return Err(Error::ConstraintViolated(format!(
                                    "{}: {a} and {b} must differ",
                                    self.name
                                )));
                            }
                        }
                    }
                }
                Constraint::Exclude { exclude, values } => {
                    for v in values {
                        let bad = parse_rational(v)?;
                        for p in exclude {
                            if params.get(p) == Some(&bad) {
                                return Err(Error::ConstraintViolated(format!("{}: {p} must not be {v}", self.name)));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Small random integer parameters satisfying the constraints.
    pub fn random_params(&self, seed: u64) -> Params {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let p: Params = self
                .params
                .iter()
                .map(|name| (name.clone(), BigRational::from_integer(rng.gen_range(-9i64..=9).into())))
                .collect();
            if self.check_params(&p).is_ok() {
                return p;
            }
        }
    }

    /// The cubic form `F`.
    pub fn cubic_form<F: Field>(&self, field: &F, params: &Params) -> Result<CubicForm<F>> {
        self.check_params(params)?;
        let poly = match (&self.f2, &self.f3, &self.form) {
            (Some(f2), Some(f3), _) => {
                let x3 = CommPoly::var(field, 3);
                x3.mul(&parse_poly(field, f2, params)?).sub(&parse_poly(field, f3, params)?)
            }
            (_, _, Some(form)) => parse_poly(field, form, params)?,
            _ => return Err(Error::Parse(format!("family {} has no form", self.name))),
        };
        CubicForm::new(poly)
    }
}

/// `e = w0(a) + λ·symmetrize(F)`, or the rank defect if `e` is degenerate.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilyOutcome<F: Field> {
    Nondegenerate(TwistedSuperpotential<F>),
    Degenerate { rank: usize, dim: usize },
}

impl<F: Field> FamilyOutcome<F> {
    pub fn is_degenerate(&self) -> bool {
        matches!(self, FamilyOutcome::Degenerate { .. })
    }
    pub fn superpotential(&self) -> Option<&TwistedSuperpotential<F>> {
        match self {
            FamilyOutcome::Nondegenerate(s) => Some(s),
            FamilyOutcome::Degenerate { .. } => None,
        }
    }
}

pub fn family_tensor<F: Field>(
    fam: &SurfaceFamily,
    field: &F,
    params: &Params,
    a: &[F::Elem; 4],
    lambda: &F::Elem,
) -> Result<Tensor<F>> {
    let form = fam.cubic_form(field, params)?;
    w0(field, a)?.add(&symmetrize(&form)?.scale(lambda))
}

pub fn build_family_superpotential<F: Field>(
    fam: &SurfaceFamily,
    field: &F,
    params: &Params,
    a: &[F::Elem; 4],
    lambda: &F::Elem,
) -> Result<FamilyOutcome<F>> {
    let t = family_tensor(fam, field, params, a, lambda)?;
    match TwistedSuperpotential::new(t) {
        Ok(s) => Ok(FamilyOutcome::Nondegenerate(s)),
        Err(Error::Degenerate { rank, dim }) => Ok(FamilyOutcome::Degenerate { rank, dim }),
        Err(e) => Err(e),
    }
}

/// The `a`-tuple presets.
pub fn a_zero<F: Field>(f: &F) -> [F::Elem; 4] {
    [f.zero(), f.zero(), f.zero(), f.zero()]
}
pub fn a_generic<F: Field>(f: &F) -> [F::Elem; 4] {
    [f.from_i64(1), f.from_i64(2), f.from_i64(3), f.from_i64(5)]
}
pub fn a_first<F: Field>(f: &F) -> [F::Elem; 4] {
    [f.one(), f.zero(), f.zero(), f.zero()]
}
pub fn a_second<F: Field>(f: &F) -> [F::Elem; 4] {
    [f.zero(), f.one(), f.zero(), f.zero()]
}

/// Parses `zero`, `generic`, `first`, `second` or four comma-separated rationals.
pub fn parse_a<F: Field>(f: &F, text: &str) -> Result<[F::Elem; 4]> {
    match text.trim() {
        "zero" | "0" => Ok(a_zero(f)),
        "generic" => Ok(a_generic(f)),
        "first" => Ok(a_first(f)),
        "second" => Ok(a_second(f)),
        other => {
            let parts = other.split(',').map(|s| f.from_rational(&parse_rational(s)?)).collect::<Result<Vec<_>>>()?;
            parts.try_into().map_err(|_| Error::Parse(format!("expected four values for a, got `{other}`")))
        }
    }
}

/// Field spec recorded for catalog runs.
pub fn default_field() -> FieldSpec {
    FieldSpec::Rationals
}
