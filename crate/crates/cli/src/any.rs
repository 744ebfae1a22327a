//! Runtime dispatch over the field of a JSON document.

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};

use mconv_core::convolution::{mc, mc_selfcheck, SelfcheckReport};
use mconv_core::fields::{Field, FieldDescriptor, FieldHandle, Rationals};
use mconv_core::group::jordan_data_with_extension;
use mconv_core::linalg::jordan_data;
use mconv_core::tuples::{entry_census, tensor_rank_one, MonodromyTuple, RankOneTuple};

fn handle_of(v: &Value) -> Result<FieldHandle> {
    let d = v.get("field").context("document has no \"field\" descriptor")?;
    let d: FieldDescriptor = serde_json::from_value(d.clone()).context("bad field descriptor")?;
    Ok(FieldHandle::from_descriptor(&d)?)
}

pub enum AnyTuple {
    Rational(MonodromyTuple<Rationals>),
    Cyclotomic(MonodromyTuple<mconv_core::fields::CyclotomicField>),
    Finite(MonodromyTuple<mconv_core::fields::FiniteField>),
}

macro_rules! each {
    ($self:expr, $t:ident => $body:expr) => {
        match $self {
            AnyTuple::Rational($t) => $body,
            AnyTuple::Cyclotomic($t) => $body,
            AnyTuple::Finite($t) => $body,
        }
    };
}

pub enum AnyRankOne {
    Rational(RankOneTuple<Rationals>),
    Cyclotomic(RankOneTuple<mconv_core::fields::CyclotomicField>),
    Finite(RankOneTuple<mconv_core::fields::FiniteField>),
}

impl AnyRankOne {
    pub fn from_json(v: &Value) -> Result<Self> {
        Ok(match handle_of(v)? {
            FieldHandle::Rational(f) => AnyRankOne::Rational(RankOneTuple::from_json(&f, v)?),
            FieldHandle::Cyclotomic(f) => AnyRankOne::Cyclotomic(RankOneTuple::from_json(&f, v)?),
            FieldHandle::Finite(f) => AnyRankOne::Finite(RankOneTuple::from_json(&f, v)?),
        })
    }
}

/// A rank-one tuple as scalars of `field`: rational scalars coerce into any
/// field, other scalars must already live in `field`.
fn coerce<F: Field>(field: &F, c: &AnyRankOne) -> Result<RankOneTuple<F>> {
    let d = field.descriptor();
    let encoded = match c {
        AnyRankOne::Rational(c) => return Ok(c.map_field(field, |x| field.from_rational(x))?),
        AnyRankOne::Cyclotomic(c) => c.to_json(),
        AnyRankOne::Finite(c) => c.to_json(),
    };
    let cd: FieldDescriptor = serde_json::from_value(encoded["field"].clone())?;
    if cd != d {
        bail!("rank-one tuple over {cd} cannot twist a tuple over {d}");
    }
    Ok(RankOneTuple::from_json(field, &encoded)?)
}

fn analyze_generic<F: Field>(t: &MonodromyTuple<F>, orders: &[u64], bound: u64) -> Value {
    let f = t.field();
    let census: Vec<Value> = entry_census(t, bound).iter().map(|e| e.to_json(f)).collect();
    let jordan: Vec<Value> = t
        .entries()
        .iter()
        .map(|m| match jordan_data(m, orders) {
            Ok(j) => j.to_json(),
            Err(e) => json!({"error": e.to_string()}),
        })
        .collect();
    json!({
        "field": f.descriptor(),
        "n": t.n(),
        "r": t.r(),
        "orders": orders,
        "census": census,
        "jordan": jordan,
    })
}

impl AnyTuple {
    pub fn from_json(v: &Value) -> Result<Self> {
        Ok(match handle_of(v)? {
            FieldHandle::Rational(f) => AnyTuple::Rational(MonodromyTuple::from_json(&f, v)?),
            FieldHandle::Cyclotomic(f) => AnyTuple::Cyclotomic(MonodromyTuple::from_json(&f, v)?),
            FieldHandle::Finite(f) => AnyTuple::Finite(MonodromyTuple::from_json(&f, v)?),
        })
    }

    pub fn to_json(&self) -> Value {
        each!(self, t => t.to_json())
    }

    pub fn tensor(&self, c: &AnyRankOne) -> Result<AnyTuple> {
        Ok(match self {
            AnyTuple::Rational(t) => AnyTuple::Rational(tensor_rank_one(t, &coerce(t.field(), c)?)?),
            AnyTuple::Cyclotomic(t) => AnyTuple::Cyclotomic(tensor_rank_one(t, &coerce(t.field(), c)?)?),
            AnyTuple::Finite(t) => AnyTuple::Finite(tensor_rank_one(t, &coerce(t.field(), c)?)?),
        })
    }

    pub fn convolve(&self, lambda: i64) -> Result<AnyTuple> {
        Ok(match self {
            AnyTuple::Rational(t) => AnyTuple::Rational(mc(t, &t.field().from_i64(lambda))?),
            AnyTuple::Cyclotomic(t) => AnyTuple::Cyclotomic(mc(t, &t.field().from_i64(lambda))?),
            AnyTuple::Finite(t) => AnyTuple::Finite(mc(t, &t.field().from_i64(lambda))?),
        })
    }

    pub fn selfcheck(&self, lambda: i64) -> Result<SelfcheckReport> {
        Ok(each!(self, t => mc_selfcheck(t, &t.field().from_i64(lambda))))
    }

    /// Census plus per-entry Jordan data. Without explicit orders, the
    /// eigenvalue search covers all roots of unity of the field (and of the
    /// quadratic extension, for finite fields).
    pub fn analyze(&self, orders: Option<&[u64]>, order_bound: u64) -> Result<Value> {
        Ok(match self {
            AnyTuple::Rational(t) => {
                let bound = if order_bound == 0 { 2 } else { order_bound };
                analyze_generic(t, orders.unwrap_or(&[2]), bound)
            }
            AnyTuple::Cyclotomic(t) => {
                let n = t.field().order();
                let n = if n % 2 == 0 { n } else { 2 * n };
                let bound = if order_bound == 0 { n } else { order_bound };
                analyze_generic(t, orders.unwrap_or(&[n]), bound)
            }
            AnyTuple::Finite(t) => {
                let q = t.field().size();
                let bound = if order_bound == 0 { q * q - 1 } else { order_bound };
                match orders {
                    Some(o) => analyze_generic(t, o, bound),
                    None => {
                        let mut v = analyze_generic(t, &[q - 1], bound);
                        let jordan: Vec<Value> = t
                            .entries()
                            .iter()
                            .map(|m| match jordan_data_with_extension(m) {
                                Ok(j) => json!({
                                    "over": if j.is_extension() { format!("F_{}", q * q) } else { format!("F_{q}") },
                                    "jordan": j.data().to_json(),
                                }),
                                Err(e) => json!({"error": e.to_string()}),
                            })
                            .collect();
                        v["jordan"] = Value::Array(jordan);
                        v
                    }
                }
            }
        })
    }
}
