//! Exact scalar fields: the rationals, cyclotomic fields `Q(zeta_N)` and
//! finite fields `F_{l^k}`, plus the residue maps between them.
//!
//! Every field implements [`Field`]; matrices and tuples are generic over it.
//! Runtime selection (JSON documents, the CLI) goes through [`FieldHandle`].

mod cyclotomic;
mod finite;
pub mod numtheory;
mod rational;
mod residue;

use std::fmt;
use std::hash::Hash;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

pub use cyclotomic::{CycElem, CyclotomicField};
pub use finite::{FieldEmbedding, FiniteField, MAX_FINITE_FIELD_ORDER};
pub use rational::Rationals;
pub use residue::ResidueMap;

/// Arithmetic on an exact field whose elements are plain values of type
/// [`Field::Elem`]. The field object carries whatever context (modulus,
/// tables) the element operations need.
pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Hash + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    /// Image of a rational number; fails in characteristic `l` when the
    /// denominator is divisible by `l`.
    fn from_rational(&self, q: &BigRational) -> Result<Self::Elem>;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// 0 for fields of characteristic zero.
    fn characteristic(&self) -> u64;
    /// Degree over the prime field.
    fn degree(&self) -> usize;
    fn descriptor(&self) -> FieldDescriptor;
    fn encode(&self, a: &Self::Elem) -> Value;
    fn decode(&self, v: &Value) -> std::result::Result<Self::Elem, String>;

    /// `zeta_order^exponent` for the field's fixed compatible system of roots
    /// of unity.
    fn root_of_unity(&self, order: u64, exponent: i64) -> Result<Self::Elem>;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    /// `a - f * b`, the row-operation kernel.
    fn sub_mul(&self, a: &Self::Elem, f: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.sub(a, &self.mul(f, b))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Signed power; `None` for a negative power of zero.
    fn pow_i64(&self, a: &Self::Elem, e: i64) -> Option<Self::Elem> {
        if e >= 0 {
            Some(self.pow(a, e as u64))
        } else {
            self.inv(a).map(|ai| self.pow(&ai, e.unsigned_abs()))
        }
    }

    /// Multiplicative order by iterated multiplication, `None` beyond `bound`.
    fn multiplicative_order(&self, a: &Self::Elem, bound: u64) -> Option<u64> {
        if self.is_zero(a) {
            return None;
        }
        let mut x = a.clone();
        for k in 1..=bound {
            if self.is_one(&x) {
                return Some(k);
            }
            x = self.mul(&x, a);
        }
        None
    }

    /// Deterministic total order key used for canonical sorting.
    fn sort_key(&self, a: &Self::Elem) -> String {
        self.encode(a).to_string()
    }
}

/// Serialized description of a field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldDescriptor {
    Rational,
    Cyclotomic { order: u64 },
    Finite { l: u64, k: u32, modulus: Vec<u64> },
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Rational => write!(f, "Q"),
            FieldDescriptor::Cyclotomic { order } => write!(f, "Q(zeta_{order})"),
            FieldDescriptor::Finite { l, k, .. } if *k == 1 => write!(f, "F_{l}"),
            FieldDescriptor::Finite { l, k, .. } => write!(f, "F_{l}^{k}"),
        }
    }
}

/// A field chosen at runtime.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldHandle {
    Rational(Rationals),
    Cyclotomic(CyclotomicField),
    Finite(FiniteField),
}

impl FieldHandle {
    pub fn from_descriptor(d: &FieldDescriptor) -> Result<Self> {
        Ok(match d {
            FieldDescriptor::Rational => FieldHandle::Rational(Rationals),
            FieldDescriptor::Cyclotomic { order } => {
                if *order == 0 {
                    return Err(Error::parse("field.order", "cyclotomic order must be >= 1"));
                }
                FieldHandle::Cyclotomic(CyclotomicField::new(*order))
            }
            FieldDescriptor::Finite { l, k, modulus } => {
                FieldHandle::Finite(FiniteField::with_modulus(*l, *k, modulus)?)
            }
        })
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        match self {
            FieldHandle::Rational(f) => f.descriptor(),
            FieldHandle::Cyclotomic(f) => f.descriptor(),
            FieldHandle::Finite(f) => f.descriptor(),
        }
    }
}

/// `Q(zeta_N)` with modulus the N-th cyclotomic polynomial.
pub fn make_cyclotomic_field(order: u64) -> Result<CyclotomicField> {
    if order == 0 {
        return Err(Error::OrderUnavailable {
            order,
            field: "Q".into(),
        });
    }
    Ok(CyclotomicField::new(order))
}

/// `F_{l^k}` with the smallest monic irreducible modulus.
pub fn make_finite_field(ell: u64, k: u32) -> Result<FiniteField> {
    FiniteField::new(ell, k)
}

/// `zeta_order^exponent` in `field`.
pub fn root_of_unity<F: Field>(field: &F, order: u64, exponent: i64) -> Result<F::Elem> {
    field.root_of_unity(order, exponent)
}

/// Residue map from `Q(zeta_N)` to the residue field of characteristic `ell`.
/// `k = None` requests the minimal residue degree.
pub fn make_residue_map(source: &CyclotomicField, ell: u64, k: Option<u32>) -> Result<ResidueMap> {
    ResidueMap::new(source, ell, k)
}

/// Image of `x` under `map`.
pub fn apply_residue(map: &ResidueMap, x: &CycElem) -> Result<u32> {
    map.apply(x)
}
