//! Monodromy tuples `(T_1, ..., T_r, T_{r+1})` with `T_1 ... T_{r+1} = 1`,
//! rank-one scalar twists, and per-entry local invariants.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fields::numtheory::{euler_phi, lcm, units_mod};
use crate::fields::{CyclotomicField, Field, FieldDescriptor};
use crate::linalg::{inverse, jordan_data, product, rank, Matrix};

/// Entries `0..r` are the finite points, entry `r` the point at infinity.
#[derive(Debug, Clone, PartialEq)]
pub struct MonodromyTuple<F: Field> {
    field: F,
    n: usize,
    r: usize,
    entries: Vec<Matrix<F>>,
    labels: Vec<String>,
}

impl<F: Field> MonodromyTuple<F> {
    /// Builds a tuple from `r + 1` square matrices of a common size. Only the
    /// shape is checked here; see [`validate`].
    pub fn new(field: &F, entries: Vec<Matrix<F>>) -> Result<Self> {
        if entries.len() < 2 {
            return Err(Error::DimensionMismatch(format!(
                "a tuple needs at least two entries, got {}",
                entries.len()
            )));
        }
        let n = entries[0].rows();
        for (i, e) in entries.iter().enumerate() {
            if e.rows() != n || e.cols() != n {
                return Err(Error::DimensionMismatch(format!(
                    "entry {} is {}x{}, expected {n}x{n}",
                    i + 1,
                    e.rows(),
                    e.cols()
                )));
            }
            if e.field() != field {
                return Err(Error::FieldMismatch(format!("entry {}", i + 1)));
            }
        }
        Ok(MonodromyTuple {
            field: field.clone(),
            n,
            r: entries.len() - 1,
            entries,
            labels: Vec::new(),
        })
    }

    /// Finite entries as given, infinity entry chosen to restore the product
    /// relation.
    pub fn from_finite_entries(field: &F, finite: Vec<Matrix<F>>) -> Result<Self> {
        let n = finite
            .first()
            .map(Matrix::rows)
            .ok_or_else(|| Error::DimensionMismatch("no finite entries".into()))?;
        let mut entries = finite;
        let prod = product(field, n, entries.iter());
        entries.push(inverse(&prod)?);
        Self::new(field, entries)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if !labels.is_empty() && labels.len() != self.r + 1 {
            return Err(Error::ArityMismatch {
                expected: self.r + 1,
                got: labels.len(),
            });
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn entries(&self) -> &[Matrix<F>] {
        &self.entries
    }

    pub fn finite_entries(&self) -> &[Matrix<F>] {
        &self.entries[..self.r]
    }

    /// Entry by 1-based index, matching the usual `T_i` notation.
    pub fn entry(&self, i: usize) -> &Matrix<F> {
        &self.entries[i - 1]
    }

    pub fn infinity(&self) -> &Matrix<F> {
        &self.entries[self.r]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Entrywise image under a field homomorphism.
    pub fn map_field<G: Field>(&self, target: &G, mut f: impl FnMut(&F::Elem) -> Result<G::Elem>) -> Result<MonodromyTuple<G>> {
        let entries = self
            .entries
            .iter()
            .map(|m| m.map_field(target, &mut f))
            .collect::<Result<Vec<_>>>()?;
        Ok(MonodromyTuple {
            field: target.clone(),
            n: self.n,
            r: self.r,
            entries,
            labels: self.labels.clone(),
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "field": self.field.descriptor(),
            "n": self.n,
            "r": self.r,
            "entries": self.entries.iter().map(Matrix::to_json).collect::<Vec<_>>(),
            "labels": self.labels,
        })
    }

    /// Parses a tuple document over `field`. The product relation is not
    /// checked; that is the job of [`validate`].
    pub fn from_json(field: &F, v: &Value) -> Result<Self> {
        let d = v
            .get("field")
            .ok_or_else(|| Error::parse("tuple.field", "missing field descriptor"))?;
        let d: FieldDescriptor =
            serde_json::from_value(d.clone()).map_err(|e| Error::parse("tuple.field", e.to_string()))?;
        if d != field.descriptor() {
            return Err(Error::FieldMismatch(format!(
                "tuple over {d}, expected {}",
                field.descriptor()
            )));
        }
        let get = |key: &str| {
            v.get(key)
                .and_then(Value::as_u64)
                .map(|x| x as usize)
                .ok_or_else(|| Error::parse(format!("tuple.{key}"), "missing integer"))
        };
        let (n, r) = (get("n")?, get("r")?);
        let raw = v
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::parse("tuple.entries", "missing array"))?;
        if raw.len() != r + 1 {
            return Err(Error::parse(
                "tuple.entries",
                format!("expected {} entries, found {}", r + 1, raw.len()),
            ));
        }
        let entries = raw
            .iter()
            .enumerate()
            .map(|(i, e)| Matrix::from_json(field, e, &format!("tuple.entries[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        if let Some((i, _)) = entries.iter().enumerate().find(|(_, e)| e.rows() != n || e.cols() != n) {
            return Err(Error::parse(format!("tuple.entries[{i}]"), format!("expected a {n}x{n} matrix")));
        }
        let labels = match v.get("labels") {
            None | Some(Value::Null) => Vec::new(),
            Some(l) => serde_json::from_value(l.clone()).map_err(|e| Error::parse("tuple.labels", e.to_string()))?,
        };
        Self::new(field, entries)?.with_labels(labels)
    }
}

/// Checks invertibility of every entry and the product relation.
pub fn validate<F: Field>(t: &MonodromyTuple<F>) -> Result<()> {
    let f = t.field();
    for (i, e) in t.entries.iter().enumerate() {
        if f.is_zero(&e.determinant()) {
            return Err(Error::SingularEntry(i + 1));
        }
    }
    let prod = product(f, t.n, t.entries.iter());
    if !prod.is_identity() {
        return Err(Error::ProductRelationViolated {
            residual: prod.to_json().to_string(),
        });
    }
    Ok(())
}

/// `T_{m,r}`: rank two, over `Q(zeta_N)` with `N = lcm(4, m)`.
pub fn construct_t(m: u64, r: usize) -> Result<MonodromyTuple<CyclotomicField>> {
    if m <= 2 {
        return Err(Error::InvalidM(m));
    }
    let phi = euler_phi(m) as usize;
    if 2 * phi + 4 >= r {
        return Err(Error::ConditionAViolated { m, r });
    }
    let k = CyclotomicField::new(lcm(lcm(4, m), 2));
    let units = units_mod(m);
    let mut entries = Vec::with_capacity(r + 1);
    for i in 0..r - 3 {
        let lambda = if i < 2 * phi {
            k.root_of_unity(m, units[i % phi] as i64)?
        } else {
            k.from_i64(-1)
        };
        let inv = k.inv(&lambda).expect("root of unity");
        entries.push(Matrix::diagonal(&k, &[lambda, inv]));
    }
    entries.push(Matrix::from_i64(&k, &[&[1, 0], &[0, -1]]));
    entries.push(Matrix::from_i64(&k, &[&[0, 1], &[1, 0]]));
    let prod = product(&k, 2, entries.iter());
    entries.push(inverse(&prod)?.neg());
    entries.push(Matrix::from_i64(&k, &[&[-1, 0], &[0, -1]]));
    let t = MonodromyTuple::new(&k, entries)?;
    validate(&t)?;
    Ok(t)
}

/// Sign patterns of the rank-one twists.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pattern {
    N1,
    N2,
    N3,
    N4,
    N5,
    L5,
}

impl Pattern {
    /// 1-based positions carrying `-1`, counted from the right end.
    pub fn negative_positions(self, r: usize) -> [usize; 2] {
        match self {
            Pattern::N1 => [r - 2, r],
            Pattern::N2 | Pattern::N4 => [r - 1, r + 1],
            Pattern::N3 => [r - 3, r - 2],
            Pattern::N5 => [r - 3, r],
            Pattern::L5 => [r, r + 1],
        }
    }

    pub fn signs(self, r: usize) -> Vec<i64> {
        let neg = self.negative_positions(r);
        (1..=r + 1).map(|i| if neg.contains(&i) { -1 } else { 1 }).collect()
    }
}

impl std::str::FromStr for Pattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_uppercase().as_str() {
            "N1" => Pattern::N1,
            "N2" => Pattern::N2,
            "N3" => Pattern::N3,
            "N4" => Pattern::N4,
            "N5" => Pattern::N5,
            "L5" => Pattern::L5,
            _ => return Err(Error::parse("pattern", format!("unknown pattern {s:?}"))),
        })
    }
}

/// Scalars `(c_1, ..., c_{r+1})` with product one.
#[derive(Debug, Clone, PartialEq)]
pub struct RankOneTuple<F: Field> {
    field: F,
    r: usize,
    scalars: Vec<F::Elem>,
}

impl<F: Field> RankOneTuple<F> {
    pub fn new(field: &F, scalars: Vec<F::Elem>) -> Result<Self> {
        if scalars.len() < 2 {
            return Err(Error::DimensionMismatch("a rank-one tuple needs two scalars".into()));
        }
        if let Some(i) = scalars.iter().position(|c| field.is_zero(c)) {
            return Err(Error::SingularEntry(i + 1));
        }
        let prod = scalars.iter().fold(field.one(), |acc, c| field.mul(&acc, c));
        if !field.is_one(&prod) {
            return Err(Error::ProductRelationViolated {
                residual: field.encode(&prod).to_string(),
            });
        }
        Ok(RankOneTuple {
            field: field.clone(),
            r: scalars.len() - 1,
            scalars,
        })
    }

    pub fn from_signs(field: &F, signs: &[i64]) -> Result<Self> {
        Self::new(field, signs.iter().map(|&s| field.from_i64(s)).collect())
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn scalars(&self) -> &[F::Elem] {
        &self.scalars
    }

    /// The same tuple viewed as a rank-one [`MonodromyTuple`].
    pub fn as_monodromy_tuple(&self) -> MonodromyTuple<F> {
        let entries = self
            .scalars
            .iter()
            .map(|c| Matrix::diagonal(&self.field, std::slice::from_ref(c)))
            .collect();
        MonodromyTuple::new(&self.field, entries).expect("1x1 entries")
    }

    pub fn map_field<G: Field>(&self, target: &G, mut f: impl FnMut(&F::Elem) -> Result<G::Elem>) -> Result<RankOneTuple<G>> {
        let scalars = self.scalars.iter().map(&mut f).collect::<Result<Vec<_>>>()?;
        RankOneTuple::new(target, scalars)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "field": self.field.descriptor(),
            "r": self.r,
            "scalars": self.scalars.iter().map(|c| self.field.encode(c)).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(field: &F, v: &Value) -> Result<Self> {
        let raw = v
            .get("scalars")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::parse("rank_one.scalars", "missing array"))?;
        let scalars = raw
            .iter()
            .enumerate()
            .map(|(i, c)| field.decode(c).map_err(|e| Error::parse(format!("rank_one.scalars[{i}]"), e)))
            .collect::<Result<Vec<_>>>()?;
        if let Some(r) = v.get("r").and_then(Value::as_u64) {
            if r as usize + 1 != scalars.len() {
                return Err(Error::parse("rank_one.r", "does not match the number of scalars"));
            }
        }
        Self::new(field, scalars)
    }
}

/// Rank-one tuple for a named sign pattern over `field`.
pub fn construct_rank_one<F: Field>(pattern: Pattern, r: usize, field: &F) -> Result<RankOneTuple<F>> {
    if r < 6 {
        return Err(Error::HypothesisViolated(format!(
            "sign patterns need r >= 6, got r = {r}"
        )));
    }
    RankOneTuple::from_signs(field, &pattern.signs(r))
}

/// Entrywise scalar twist `(c_i T_i)`.
pub fn tensor_rank_one<F: Field>(t: &MonodromyTuple<F>, c: &RankOneTuple<F>) -> Result<MonodromyTuple<F>> {
    if t.r != c.r {
        return Err(Error::ArityMismatch {
            expected: t.r,
            got: c.r,
        });
    }
    if t.field != c.field {
        return Err(Error::FieldMismatch(format!(
            "tuple over {}, twist over {}",
            t.field.descriptor(),
            c.field.descriptor()
        )));
    }
    let entries = t
        .entries
        .iter()
        .zip(&c.scalars)
        .map(|(m, s)| m.scale(s))
        .collect();
    let out = MonodromyTuple {
        entries,
        ..t.clone()
    };
    Ok(out)
}

/// Local data of one tuple entry.
#[derive(Debug, Clone, PartialEq)]
pub struct EntryInfo<F: Field> {
    pub index: usize,
    pub determinant: F::Elem,
    /// `None` when the order exceeds the bound.
    pub order: Option<u64>,
    pub rank_minus_one: usize,
    pub rank_plus_one: usize,
    pub is_reflection: bool,
    pub is_bireflection: bool,
    pub is_negated_reflection: bool,
    pub is_scalar: bool,
}

impl<F: Field> EntryInfo<F> {
    pub fn to_json(&self, field: &F) -> Value {
        json!({
            "index": self.index,
            "determinant": field.encode(&self.determinant),
            "order": self.order.map_or(json!("exceeds bound"), |o| json!(o)),
            "rank_minus_one": self.rank_minus_one,
            "rank_plus_one": self.rank_plus_one,
            "is_reflection": self.is_reflection,
            "is_bireflection": self.is_bireflection,
            "is_negated_reflection": self.is_negated_reflection,
            "is_scalar": self.is_scalar,
        })
    }
}

/// Order of an invertible matrix by iterated multiplication.
pub fn matrix_order<F: Field>(m: &Matrix<F>, bound: u64) -> Option<u64> {
    let mut x = m.clone();
    for k in 1..=bound {
        if x.is_identity() {
            return Some(k);
        }
        x = x.mul(m);
    }
    None
}

pub fn entry_census<F: Field>(t: &MonodromyTuple<F>, order_bound: u64) -> Vec<EntryInfo<F>> {
    t.entries
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let rm = rank(&m.minus_identity());
            let rp = rank(&m.plus_identity());
            EntryInfo {
                index: i + 1,
                determinant: m.determinant(),
                order: matrix_order(m, order_bound),
                rank_minus_one: rm,
                rank_plus_one: rp,
                is_reflection: rm == 1,
                is_bireflection: rm == 2,
                is_negated_reflection: rp == 1,
                is_scalar: m.scalar_value().is_some(),
            }
        })
        .collect()
}

/// Whether each entry's Jordan data is stable under inverting eigenvalues.
pub fn local_selfdual_check<F: Field>(t: &MonodromyTuple<F>, eigenvalue_orders: &[u64]) -> Result<Vec<bool>> {
    t.entries
        .iter()
        .map(|m| jordan_data(m, eigenvalue_orders).map(|j| j.is_selfdual()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Rationals;

    #[test]
    fn t_4_9_layout() {
        let t = construct_t(4, 9).unwrap();
        let k = t.field().clone();
        let i = k.root_of_unity(4, 1).unwrap();
        let mi = k.neg(&i);
        assert_eq!(t.n(), 2);
        assert_eq!(t.r(), 9);
        for (idx, (a, b)) in [(1, (&i, &mi)), (2, (&mi, &i)), (3, (&i, &mi)), (4, (&mi, &i))] {
            assert_eq!(*t.entry(idx), Matrix::diagonal(&k, &[a.clone(), b.clone()]));
        }
        let minus = Matrix::from_i64(&k, &[&[-1, 0], &[0, -1]]);
        assert_eq!(*t.entry(5), minus);
        assert_eq!(*t.entry(6), minus);
        assert_eq!(*t.entry(7), Matrix::from_i64(&k, &[&[1, 0], &[0, -1]]));
        assert_eq!(*t.entry(8), Matrix::from_i64(&k, &[&[0, 1], &[1, 0]]));
        assert_eq!(*t.entry(10), minus);
        let rot = Matrix::from_i64(&k, &[&[0, -1], &[1, 0]]);
        assert!(*t.entry(9) == rot || *t.entry(9) == rot.neg());
        assert_eq!(rank(&t.entry(9).minus_identity()), 2);
    }

    #[test]
    fn condition_a() {
        assert_eq!(construct_t(4, 8).unwrap_err(), Error::ConditionAViolated { m: 4, r: 8 });
        assert_eq!(construct_t(2, 9).unwrap_err(), Error::InvalidM(2));
    }

    #[test]
    fn validate_errors() {
        let f = Rationals;
        let bad = MonodromyTuple::new(&f, vec![Matrix::from_i64(&f, &[&[2]]), Matrix::from_i64(&f, &[&[3]])]).unwrap();
        assert!(matches!(validate(&bad), Err(Error::ProductRelationViolated { .. })));
        let sing = MonodromyTuple::new(&f, vec![Matrix::zeros(&f, 1, 1), Matrix::identity(&f, 1)]).unwrap();
        assert_eq!(validate(&sing), Err(Error::SingularEntry(1)));
    }

    #[test]
    fn patterns() {
        let f = Rationals;
        let n1 = construct_rank_one(Pattern::N1, 9, &f).unwrap();
        assert_eq!(n1.scalars(), RankOneTuple::from_signs(&f, &[1, 1, 1, 1, 1, 1, -1, 1, -1, 1]).unwrap().scalars());
        assert_eq!(Pattern::N3.signs(9), vec![1, 1, 1, 1, 1, -1, -1, 1, 1, 1]);
        assert!(matches!(
            RankOneTuple::from_signs(&f, &[1, -1, 1]),
            Err(Error::ProductRelationViolated { .. })
        ));
    }

    #[test]
    fn census_of_t_4_9() {
        let t = construct_t(4, 9).unwrap();
        let c = entry_census(&t, 16);
        assert_eq!(c[8].order, Some(4));
        assert_eq!(c[8].rank_minus_one, 2);
        let fixed: Vec<usize> = c.iter().filter(|e| e.rank_minus_one < 2).map(|e| e.index).collect();
        assert_eq!(fixed, vec![7, 8]);
        assert!(c[9].is_scalar);
        assert!(local_selfdual_check(&t, &[4]).unwrap().iter().all(|&b| b));
    }
}
