use serde::{Deserialize, Serialize};

use super::Tensor;
use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec};

/// On-disk tensor: indices 1-based, coefficients as decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorJson {
    pub m: usize,
    pub dim: usize,
    pub field: FieldSpec,
    pub entries: Vec<TensorEntryJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorEntryJson {
    pub idx: Vec<usize>,
    pub num: String,
    pub den: String,
}

impl TensorJson {
    pub fn from_tensor<F: Field>(t: &Tensor<F>) -> Self {
        let entries = t
            .terms()
            .map(|(idx, c)| {
                let (num, den) = t.field().to_parts(c);
                TensorEntryJson { idx: idx.iter().map(|i| i + 1).collect(), num, den }
            })
            .collect();
        TensorJson { m: t.arity(), dim: t.dim(), field: t.field().spec(), entries }
    }

    /// Loads the coefficients into `field`. Rational coefficients may be reduced
    /// into a prime field; the reverse direction is refused.
    pub fn to_tensor<F: Field>(&self, field: &F) -> Result<Tensor<F>> {
        if self.m == 0 || self.dim == 0 {
            return Err(Error::Parse("tensor needs m >= 1 and dim >= 1".into()));
        }
        match (self.field, field.spec()) {
            (a, b) if a == b => {}
            (FieldSpec::Rationals, FieldSpec::Prime(_)) => {}
            (a, b) => return Err(Error::Parse(format!("tensor over {a} cannot be read over {b}"))),
        }
        let mut t = Tensor::zero(field, self.m, self.dim);
        for e in &self.entries {
            if e.idx.len() != self.m {
                return Err(Error::Parse(format!("index {:?} has wrong length", e.idx)));
            }
            if e.idx.iter().any(|&i| i == 0 || i > self.dim) {
                return Err(Error::Parse(format!("index {:?} out of range 1..={}", e.idx, self.dim)));
            }
            let c = field.parse_parts(&e.num, &e.den)?;
            t.add_term(e.idx.iter().map(|i| i - 1).collect(), c)?;
        }
        Ok(t)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("tensor json serializes")
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}
