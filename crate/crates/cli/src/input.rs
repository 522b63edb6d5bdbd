use std::path::Path;

use qsequiv::atlas::{build_family_superpotential, parse_a, poly_superpotential, Catalog, FamilyOutcome, Params};
use qsequiv::superpotential::{m2_pack, TwistedSuperpotential};
use qsequiv::tensor::{Matrix, Tensor, TensorJson};
use qsequiv::{Error, Field, Result};

/// A superpotential argument: a tensor JSON path, `poly`, `m2:[[..],[..]]`,
/// or `family:NAME[:a=..][:lambda=..]`.
#[derive(Debug, Clone)]
pub struct Loaded<F: Field> {
    pub label: String,
    /// Canonical text hashed into reports.
    pub source: String,
    pub tensor: Tensor<F>,
    /// `E` when given as `m2:`.
    pub matrix: Option<Matrix<F>>,
}

pub fn load<F: Field>(field: &F, arg: &str, catalog: &Catalog, seed: Option<u64>) -> Result<Loaded<F>> {
    if arg == "poly" {
        let s = poly_superpotential(field)?;
        return Ok(Loaded {
            label: "f_poly".into(),
            source: tensor_text(s.tensor()),
            tensor: s.tensor().clone(),
            matrix: None,
        });
    }
    if let Some(rest) = arg.strip_prefix("m2:") {
        let m = parse_matrix(field, rest)?;
        let s = m2_pack(&m)?;
        return Ok(Loaded {
            label: arg.into(),
            source: tensor_text(s.tensor()),
            tensor: s.tensor().clone(),
            matrix: Some(m),
        });
    }
    if let Some(rest) = arg.strip_prefix("family:") {
        let mut parts = rest.split(':');
        let name = parts.next().unwrap_or_default();
        let fam = catalog.family(name)?;
        let mut a = parse_a(field, "zero")?;
        let mut lambda = field.one();
        for kv in parts {
            match kv.split_once('=') {
                Some(("a", v)) => a = parse_a(field, v)?,
                Some(("lambda", v)) => {
                    lambda = field.from_rational(&v.parse().map_err(|_| Error::Parse(format!("bad lambda `{v}`")))?)?
                }
                _ => return Err(Error::Parse(format!("unknown family option `{kv}`"))),
            }
        }
        let params = family_params(catalog, fam, seed)?;
        let t = qsequiv::atlas::family_tensor(fam, field, &params, &a, &lambda)?;
        return Ok(Loaded { label: arg.into(), source: tensor_text(&t), tensor: t, matrix: None });
    }
    let text = std::fs::read_to_string(Path::new(arg)).map_err(|e| Error::Io(format!("{arg}: {e}")))?;
    let tensor = TensorJson::parse(&text)?.to_tensor(field)?;
    let matrix = (tensor.arity() == 2).then(|| square_from_tensor(&tensor));
    Ok(Loaded { label: arg.into(), source: tensor_text(&tensor), tensor, matrix })
}

pub fn family_params(catalog: &Catalog, fam: &qsequiv::atlas::SurfaceFamily, seed: Option<u64>) -> Result<Params> {
    match seed {
        Some(s) => Ok(fam.random_params(s)),
        None => catalog.default_params(),
    }
}

pub fn superpotential<F: Field>(l: &Loaded<F>) -> Result<TwistedSuperpotential<F>> {
    TwistedSuperpotential::new(l.tensor.clone())
}

/// Family superpotential or the degeneracy witness.
pub fn family_outcome<F: Field>(
    field: &F,
    catalog: &Catalog,
    name: &str,
    a: &[F::Elem; 4],
    seed: Option<u64>,
) -> Result<FamilyOutcome<F>> {
    let fam = catalog.family(name)?;
    let params = family_params(catalog, fam, seed)?;
    build_family_superpotential(fam, field, &params, a, &field.one())
}

fn tensor_text<F: Field>(t: &Tensor<F>) -> String {
    serde_json::to_string(&TensorJson::from_tensor(t)).expect("tensor json serializes")
}

fn square_from_tensor<F: Field>(t: &Tensor<F>) -> Matrix<F> {
    let f = t.field();
    let n = t.dim();
    let rows = (0..n).map(|i| (0..n).map(|j| t.coeff(&[i, j])).collect()).collect();
    Matrix::from_rows(f, rows).expect("square")
}

/// `[[0,1],[2,0]]`, entries integers or `p/q`.
pub fn parse_matrix<F: Field>(field: &F, text: &str) -> Result<Matrix<F>> {
    let rows: Vec<Vec<serde_json::Value>> =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("bad matrix `{text}`: {e}")))?;
    let rows = rows
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|v| {
                    let s = match v {
                        serde_json::Value::String(s) => s,
                        other => other.to_string(),
                    };
                    let q = s.parse().map_err(|_| Error::Parse(format!("bad entry `{s}`")))?;
                    field.from_rational(&q)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(field, rows)
}
