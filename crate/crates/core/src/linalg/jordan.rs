use std::collections::BTreeSet;

use serde_json::{json, Value};

use super::{char_poly, kernel, Matrix};
use crate::error::{Error, Result};
use crate::fields::numtheory::{divisors, gcd};
use crate::fields::Field;

/// `multiplicity` Jordan blocks of size `size` at `eigenvalue`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct JordanBlock<F: Field> {
    pub eigenvalue: F::Elem,
    pub size: usize,
    pub multiplicity: usize,
}

impl<F: Field> std::fmt::Debug for JordanBlock<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "J({}; {:?})^{}", self.size, self.eigenvalue, self.multiplicity)
    }
}

/// Jordan structure of a square matrix, blocks sorted by eigenvalue key and
/// then by size, largest first.
#[derive(Clone, PartialEq)]
pub struct JordanData<F: Field> {
    field: F,
    dim: usize,
    blocks: Vec<JordanBlock<F>>,
}

impl<F: Field> std::fmt::Debug for JordanData<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "JordanData(dim {}, {:?})", self.dim, self.blocks)
    }
}

impl<F: Field> JordanData<F> {
    /// Normalizes arbitrary `(eigenvalue, size, multiplicity)` triples:
    /// merges duplicates, drops zero multiplicities, sorts.
    pub fn from_blocks(field: &F, blocks: impl IntoIterator<Item = (F::Elem, usize, usize)>) -> Self {
        let mut merged: Vec<JordanBlock<F>> = Vec::new();
        for (eigenvalue, size, multiplicity) in blocks {
            if multiplicity == 0 || size == 0 {
                continue;
            }
            match merged
                .iter_mut()
                .find(|b| b.eigenvalue == eigenvalue && b.size == size)
            {
                Some(b) => b.multiplicity += multiplicity,
                None => merged.push(JordanBlock {
                    eigenvalue,
                    size,
                    multiplicity,
                }),
            }
        }
        merged.sort_by(|a, b| {
            field
                .sort_key(&a.eigenvalue)
                .cmp(&field.sort_key(&b.eigenvalue))
                .then(b.size.cmp(&a.size))
        });
        let dim = merged.iter().map(|b| b.size * b.multiplicity).sum();
        JordanData {
            field: field.clone(),
            dim,
            blocks: merged,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn blocks(&self) -> &[JordanBlock<F>] {
        &self.blocks
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    /// Distinct eigenvalues in sort order.
    pub fn eigenvalues(&self) -> Vec<F::Elem> {
        let mut out: Vec<F::Elem> = Vec::new();
        for b in &self.blocks {
            if out.last() != Some(&b.eigenvalue) {
                out.push(b.eigenvalue.clone());
            }
        }
        out
    }

    /// Image under `eigenvalue -> eigenvalue^{-1}`.
    pub fn dual(&self) -> Self {
        let f = &self.field;
        Self::from_blocks(
            f,
            self.blocks.iter().map(|b| {
                (
                    f.inv(&b.eigenvalue).expect("eigenvalue of an invertible matrix"),
                    b.size,
                    b.multiplicity,
                )
            }),
        )
    }

    pub fn is_selfdual(&self) -> bool {
        self.dual() == *self
    }

    pub fn to_json(&self) -> Value {
        json!({
            "dim": self.dim,
            "blocks": self.blocks.iter().map(|b| json!({
                "eigenvalue": self.field.encode(&b.eigenvalue),
                "size": b.size,
                "multiplicity": b.multiplicity,
            })).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(field: &F, v: &Value) -> Result<Self> {
        let blocks = v
            .get("blocks")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::parse("jordan.blocks", "missing array"))?;
        let mut out = Vec::new();
        for (i, b) in blocks.iter().enumerate() {
            let loc = format!("jordan.blocks[{i}]");
            let ev = field
                .decode(b.get("eigenvalue").unwrap_or(&Value::Null))
                .map_err(|e| Error::parse(&loc, &e))?;
            let size = b.get("size").and_then(Value::as_u64);
            let mult = b.get("multiplicity").and_then(Value::as_u64);
            let (Some(size), Some(mult)) = (size, mult) else {
                return Err(Error::parse(&loc, "size and multiplicity must be integers"));
            };
            out.push((ev, size as usize, mult as usize));
        }
        Ok(Self::from_blocks(field, out))
    }
}

/// All roots of unity whose order divides one of `orders` and which exist
/// in `field`, without repetition.
pub(crate) fn candidate_eigenvalues<F: Field>(field: &F, orders: &[u64]) -> Vec<F::Elem> {
    let closure: BTreeSet<u64> = orders
        .iter()
        .filter(|&&o| o > 0)
        .flat_map(|&o| divisors(o))
        .collect();
    let mut out: Vec<F::Elem> = Vec::new();
    for d in closure {
        for e in 1..=d {
            if gcd(e, d) != 1 {
                continue;
            }
            if let Ok(z) = field.root_of_unity(d, e as i64) {
                if !out.contains(&z) {
                    out.push(z);
                }
            }
        }
    }
    out
}

/// Jordan data of `m`, searching eigenvalues among roots of unity whose order
/// divides an entry of `eigenvalue_orders`.
pub fn jordan_data<F: Field>(m: &Matrix<F>, eigenvalue_orders: &[u64]) -> Result<JordanData<F>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "Jordan data of a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let f = m.field();
    let n = m.rows();
    let cp = char_poly(m);
    let mut blocks = Vec::new();
    let mut found = 0;
    for z in candidate_eigenvalues(f, eigenvalue_orders) {
        let alg = cp.root_multiplicity(&z);
        if alg == 0 {
            continue;
        }
        found += alg;
        let shifted = m.minus_scalar(&z);
        // d[k] = dim ker (M - z)^k
        let mut d = vec![0usize];
        let mut power = shifted.clone();
        loop {
            let dk = kernel(&power).dim();
            d.push(dk);
            if dk >= alg {
                break;
            }
            power = power.mul(&shifted);
        }
        let top = d.len() - 1;
        // at_least[k] = #blocks of size >= k
        let at_least = |k: usize| if k > top { 0 } else { d[k] - d[k - 1] };
        for k in 1..=top {
            let exact = at_least(k) - at_least(k + 1);
            if exact > 0 {
                blocks.push((z.clone(), k, exact));
            }
        }
    }
    if found != n {
        return Err(Error::EigenvalueOutsideField { found, dim: n });
    }
    Ok(JordanData::from_blocks(f, blocks))
}
