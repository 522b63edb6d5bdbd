//! Exact toolkit for twisted superpotentials and the universal quantum groups
//! `GL_m(e,f)` / `SL_m(e,f)` built from them, with a degree-truncated
//! noncommutative Gröbner engine deciding (or semi-deciding) their vanishing.

pub mod atlas;
pub mod error;
pub mod field;
pub mod ncgb;
pub mod poly;
pub mod presentation;
pub mod superpotential;
pub mod tensor;

pub use error::{Error, Result};
pub use field::{Field, FieldSpec, PrimeField, Rationals};
