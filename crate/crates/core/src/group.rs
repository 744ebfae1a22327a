//! Residual analysis of tuples over finite fields: reduction modulo a prime,
//! absolute irreducibility, invariant forms, reflection census, and the
//! hypothesis battery certifying that a tuple generates `SL_n(F_q)`.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::fields::numtheory::{divisors, lcm};
use crate::fields::{CyclotomicField, Field, FieldEmbedding, FiniteField, ResidueMap};
use crate::linalg::{jordan_data, kernel, rank, JordanData, Matrix, SemiEchelon};
use crate::tuples::{validate, MonodromyTuple};

/// Entrywise reduction along `map`.
pub fn reduce_tuple(t: &MonodromyTuple<CyclotomicField>, map: &ResidueMap) -> Result<MonodromyTuple<FiniteField>> {
    if map.source() != t.field() {
        return Err(Error::FieldMismatch(format!(
            "tuple over {}, residue map from Q(zeta_{})",
            t.field().descriptor(),
            map.source().order()
        )));
    }
    let out = t.map_field(map.target(), |x| map.apply(x))?;
    check_reduction(&out)?;
    Ok(out)
}

fn check_reduction(t: &MonodromyTuple<FiniteField>) -> Result<()> {
    let f = t.field();
    for (i, e) in t.entries().iter().enumerate() {
        if f.is_zero(&e.determinant()) {
            return Err(Error::BadReductionPrime { index: i + 1 });
        }
    }
    validate(t)
}

/// Reduction of `t` into `F_{l^k}` exactly.
///
/// The residue map lands in `F_{l^e}` with `e` the least common multiple of
/// `k` and the residue degree; when `e > k` the entries are pulled back along
/// the embedding `F_{l^k} -> F_{l^e}`, which fails unless every entry already
/// lies in the smaller field.
pub fn reduce_tuple_to(t: &MonodromyTuple<CyclotomicField>, ell: u64, k: u32) -> Result<MonodromyTuple<FiniteField>> {
    let minimal = make_minimal(t.field(), ell)?;
    let e = lcm(k as u64, minimal as u64) as u32;
    let map = ResidueMap::new(t.field(), ell, Some(e))?;
    let big = reduce_tuple(t, &map)?;
    if e == k {
        return Ok(big);
    }
    let small = FiniteField::new(ell, k)?;
    let emb = small.embed_into(map.target())?;
    let out = big.map_field(&small, |x| {
        emb.preimage(*x).ok_or_else(|| {
            Error::HypothesisViolated(format!(
                "reduced entries do not lie in F_{}",
                small.size()
            ))
        })
    })?;
    check_reduction(&out)?;
    Ok(out)
}

fn make_minimal(field: &CyclotomicField, ell: u64) -> Result<u32> {
    let n = field.order();
    if ell == 2 || !crate::fields::numtheory::is_prime(ell) {
        return Err(Error::InvalidCharacteristic(ell));
    }
    if n % ell == 0 {
        return Err(Error::RamifiedPrime { ell, order: n });
    }
    Ok(crate::fields::numtheory::order_mod(ell, n) as u32)
}

fn flatten<F: Field>(m: &Matrix<F>) -> Vec<F::Elem> {
    m.entries().to_vec()
}

/// Dimension of the matrix algebra spanned by all products of `gens`
/// (including the empty product).
pub fn burnside_dimension<F: Field>(gens: &[Matrix<F>]) -> usize {
    let Some(first) = gens.first() else {
        return 1;
    };
    let f = first.field();
    let n = first.rows();
    let full = n * n;
    let mut basis = SemiEchelon::new(f);
    let id = Matrix::identity(f, n);
    basis.insert(flatten(&id));
    let mut queue = VecDeque::from([id]);
    while let Some(a) = queue.pop_front() {
        for g in gens {
            if basis.dim() == full {
                return full;
            }
            let p = g.mul(&a);
            if basis.insert(flatten(&p)) {
                queue.push_back(p);
            }
        }
    }
    basis.dim()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormClass {
    Symmetric,
    Alternating,
    Neither,
}

impl fmt::Display for FormClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormClass::Symmetric => "symmetric",
            FormClass::Alternating => "alternating",
            FormClass::Neither => "neither",
        })
    }
}

/// Bilinear forms `G` with `T^t G T = G` for all generators.
#[derive(Debug, Clone, PartialEq)]
pub struct FormSpace<F: Field> {
    pub dim: usize,
    pub basis: Vec<Matrix<F>>,
    pub classes: Vec<FormClass>,
}

fn classify<F: Field>(g: &Matrix<F>) -> FormClass {
    let t = g.transpose();
    if t == *g {
        FormClass::Symmetric
    } else if t == g.neg() && (0..g.rows()).all(|i| g.field().is_zero(g.get(i, i))) {
        FormClass::Alternating
    } else {
        FormClass::Neither
    }
}

pub fn invariant_bilinear_forms<F: Field>(gens: &[Matrix<F>]) -> Result<FormSpace<F>> {
    let Some(first) = gens.first() else {
        return Err(Error::DimensionMismatch("no generators".into()));
    };
    let f = first.field();
    let n = first.rows();
    let nn = n * n;
    let mut eqs = SemiEchelon::new(f);
    'outer: for t in gens {
        // coefficient of G_{kl} in (T^t G T - G)_{ij} is T_{ki} T_{lj} - [k=i][l=j]
        for i in 0..n {
            for j in 0..n {
                let mut row = vec![f.zero(); nn];
                for k in 0..n {
                    let a = t.get(k, i);
                    if f.is_zero(a) {
                        continue;
                    }
                    for l in 0..n {
                        let b = t.get(l, j);
                        if !f.is_zero(b) {
                            row[k * n + l] = f.mul(a, b);
                        }
                    }
                }
                row[i * n + j] = f.sub(&row[i * n + j], &f.one());
                eqs.insert(row);
                if eqs.dim() == nn {
                    break 'outer;
                }
            }
        }
    }
    let basis: Vec<Matrix<F>> = if eqs.dim() == nn {
        Vec::new()
    } else if eqs.dim() == 0 {
        kernel(&Matrix::zeros(f, 1, nn))
            .basis_vectors()
            .iter()
            .map(|v| Matrix::from_fn(f, n, n, |p, q| v[p * n + q].clone()))
            .collect()
    } else {
        let system = Matrix::from_rows(f, eqs.rows().to_vec())?;
        kernel(&system)
            .basis_vectors()
            .iter()
            .map(|v| Matrix::from_fn(f, n, n, |p, q| v[p * n + q].clone()))
            .collect()
    };
    for g in &basis {
        for t in gens {
            assert_eq!(t.transpose().mul(g).mul(t), *g, "invariant form check");
        }
    }
    let classes = basis.iter().map(classify).collect();
    Ok(FormSpace {
        dim: basis.len(),
        basis,
        classes,
    })
}

/// Smallest `q' = l^d` (`d | k`) with `{z^q', z^-q'} = {z, z^-1}`.
pub fn subfield_minimality(eigenvalue: u32, field: &FiniteField) -> u64 {
    let zi = field.inv(&eigenvalue).expect("nonzero eigenvalue");
    for d in divisors(field.k() as u64) {
        let qp = field.ell().pow(d as u32);
        let a = field.pow(&eigenvalue, qp);
        let b = field.pow(&zi, qp);
        if (a == eigenvalue && b == zi) || (a == zi && b == eigenvalue) {
            return qp;
        }
    }
    field.size()
}

/// Order of the group generated by `gens`, or `None` once it exceeds `bound`.
pub fn enumerate_group<F: Field>(gens: &[Matrix<F>], bound: u64) -> Option<u64> {
    let Some(first) = gens.first() else {
        return Some(1);
    };
    let id = Matrix::identity(first.field(), first.rows());
    let mut seen: HashSet<Vec<F::Elem>> = HashSet::from([flatten(&id)]);
    let mut queue = VecDeque::from([id]);
    while let Some(a) = queue.pop_front() {
        for g in gens {
            let p = a.mul(g);
            if seen.insert(flatten(&p)) {
                if seen.len() as u64 > bound {
                    return None;
                }
                queue.push_back(p);
            }
        }
    }
    Some(seen.len() as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateMode {
    /// All determinants one.
    Sl,
    /// Determinants `+-1`, both occurring.
    SlPlusMinus,
}

impl fmt::Display for CertificateMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CertificateMode::Sl => "sl",
            CertificateMode::SlPlusMinus => "slpm",
        })
    }
}

impl FromStr for CertificateMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sl" => Ok(CertificateMode::Sl),
            "slpm" | "sl_plus_minus" | "sl+-" => Ok(CertificateMode::SlPlusMinus),
            _ => Err(Error::parse("mode", format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub pass: bool,
    pub evidence: Value,
}

/// Primitivity of the monodromy group is taken from the literature rather
/// than decided here.
pub const ASSUMED_EXTERNAL: &[&str] = &["primitivity: cited, not computed"];

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub n: usize,
    pub q: u64,
    pub mode: CertificateMode,
    pub checks: Vec<(String, CheckResult)>,
    pub assumed_external: Vec<String>,
}

impl Certificate {
    pub fn verdict(&self) -> bool {
        self.checks.iter().all(|(_, c)| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|(k, _)| k == name).map(|(_, c)| c)
    }

    pub fn to_json(&self) -> Value {
        let mut checks = Map::new();
        for (name, c) in &self.checks {
            checks.insert(name.clone(), json!({"pass": c.pass, "evidence": c.evidence}));
        }
        json!({
            "n": self.n,
            "q": self.q,
            "mode": self.mode.to_string(),
            "checks": checks,
            "assumed_external": self.assumed_external,
            "verdict": self.verdict(),
        })
    }
}

/// Jordan data over `F_q`, or over `F_{q^2}` when some eigenvalue needs it.
pub fn jordan_data_with_extension(m: &Matrix<FiniteField>) -> Result<JordanOver> {
    let f = m.field();
    let q = f.size();
    match jordan_data(m, &[q - 1]) {
        Ok(j) => Ok(JordanOver::Base(j)),
        Err(Error::EigenvalueOutsideField { .. }) => {
            let ext = FiniteField::new(f.ell(), 2 * f.k())?;
            let emb = f.embed_into(&ext)?;
            let big = m.map_field(&ext, |x| Ok(emb.apply(*x)))?;
            Ok(JordanOver::Extension(jordan_data(&big, &[ext.size() - 1])?, emb))
        }
        Err(e) => Err(e),
    }
}

/// Result of [`jordan_data_with_extension`].
#[derive(Debug, Clone)]
pub enum JordanOver {
    Base(JordanData<FiniteField>),
    Extension(JordanData<FiniteField>, FieldEmbedding),
}

impl JordanOver {
    pub fn data(&self) -> &JordanData<FiniteField> {
        match self {
            JordanOver::Base(j) | JordanOver::Extension(j, _) => j,
        }
    }

    pub fn is_extension(&self) -> bool {
        matches!(self, JordanOver::Extension(..))
    }
}

/// The eigenvalue `z` of a bireflection `diag(z, z^-1, 1, ..., 1)` with `z`
/// of order `q - 1`, if `m` is one.
fn bireflection_eigenvalue(m: &Matrix<FiniteField>) -> Option<u32> {
    let f = m.field();
    let q = f.size();
    let j = jordan_data(m, &[q - 1]).ok()?;
    let others: Vec<_> = j.blocks().iter().filter(|b| !f.is_one(&b.eigenvalue)).collect();
    if others.len() != 2 || others.iter().any(|b| b.size != 1 || b.multiplicity != 1) {
        return None;
    }
    let (a, b) = (others[0].eigenvalue, others[1].eigenvalue);
    if f.mul(&a, &b) != f.one() {
        return None;
    }
    [a, b]
        .into_iter()
        .filter(|z| f.element_order(*z) == Some(q - 1))
        .min_by_key(|z| f.sort_key(z))
}

fn pass(ok: bool, evidence: Value) -> CheckResult {
    CheckResult { pass: ok, evidence }
}

pub fn sl_certificate(t: &MonodromyTuple<FiniteField>, mode: CertificateMode) -> Certificate {
    let f = t.field();
    let q = f.size();
    let n = t.n();
    let mut checks: Vec<(String, CheckResult)> = Vec::new();
    let mut add = |name: &str, c: CheckResult| checks.push((name.to_string(), c));

    add(
        "product_relation",
        match validate(t) {
            Ok(()) => pass(true, json!("entries multiply to the identity")),
            Err(e) => pass(false, json!(e.to_string())),
        },
    );

    let dets: Vec<u32> = t.entries().iter().map(Matrix::determinant).collect();
    let mut spectrum: Vec<u32> = dets.clone();
    spectrum.sort_unstable();
    spectrum.dedup();
    let one = f.one();
    let minus = f.neg(&one);
    let det_ok = match mode {
        CertificateMode::Sl => spectrum == [one],
        CertificateMode::SlPlusMinus => {
            spectrum.iter().all(|d| *d == one || *d == minus) && spectrum.contains(&one) && spectrum.contains(&minus)
        }
    };
    let non_trivial: Vec<usize> = dets
        .iter()
        .enumerate()
        .filter(|(_, d)| **d != one)
        .map(|(i, _)| i + 1)
        .collect();
    add(
        "determinant_spectrum",
        pass(
            det_ok,
            json!({
                "determinants": spectrum.iter().map(|d| f.encode(d)).collect::<Vec<_>>(),
                "entries_with_determinant_not_one": non_trivial,
            }),
        ),
    );

    let bd = burnside_dimension(t.entries());
    add(
        "absolutely_irreducible",
        pass(bd == n * n, json!({"burnside_dimension": bd, "required": n * n})),
    );

    match invariant_bilinear_forms(t.entries()) {
        Ok(fs) => add(
            "no_invariant_bilinear_form",
            pass(
                fs.dim == 0,
                json!({
                    "dimension": fs.dim,
                    "classes": fs.classes.iter().map(ToString::to_string).collect::<Vec<_>>(),
                }),
            ),
        ),
        Err(e) => add("no_invariant_bilinear_form", pass(false, json!(e.to_string()))),
    }

    let ranks: Vec<(usize, usize)> = t
        .entries()
        .iter()
        .map(|m| (rank(&m.minus_identity()), rank(&m.plus_identity())))
        .collect();

    let bireflection = ranks
        .iter()
        .enumerate()
        .filter(|(_, (rm, _))| *rm == 2)
        .find_map(|(i, _)| bireflection_eigenvalue(&t.entries()[i]).map(|z| (i + 1, z)));
    add(
        "has_bireflection",
        match bireflection {
            Some((index, z)) => pass(
                true,
                json!({"index": index, "eigenvalue": f.encode(&z), "order": q - 1}),
            ),
            None => pass(false, json!(format!("no bireflection with eigenvalue of order {}", q - 1))),
        },
    );

    let negated = ranks.iter().position(|(_, rp)| *rp == 1);
    let reflection = ranks.iter().position(|(rm, _)| *rm == 1);
    let witness = match (mode, negated, reflection) {
        (_, Some(i), _) => Some((i + 1, "negated_reflection")),
        (CertificateMode::SlPlusMinus, None, Some(i)) => Some((i + 1, "reflection")),
        _ => None,
    };
    add(
        "has_negated_reflection",
        match witness {
            Some((index, kind)) => pass(true, json!({"index": index, "kind": kind})),
            None => pass(false, json!("no entry with rk(T + 1) = 1")),
        },
    );

    add(
        "bireflection_subfield_minimal",
        match bireflection {
            Some((_, z)) => {
                let qp = subfield_minimality(z, f);
                pass(qp == q, json!({"smallest_stable_subfield": qp, "q": q}))
            }
            None => pass(false, json!("no bireflection to test")),
        },
    );

    let mut failing = Vec::new();
    let mut extended = Vec::new();
    let mut errors = Vec::new();
    for (i, m) in t.entries().iter().enumerate() {
        match jordan_data_with_extension(m) {
            Ok(j) => {
                if j.is_extension() {
                    extended.push(i + 1);
                }
                if !j.data().is_selfdual() {
                    failing.push(i + 1);
                }
            }
            Err(e) => errors.push(format!("entry {}: {e}", i + 1)),
        }
    }
    add(
        "local_selfdual",
        pass(
            failing.is_empty() && errors.is_empty(),
            json!({"not_selfdual": failing, "analysed_over_quadratic_extension": extended, "errors": errors}),
        ),
    );

    let scalar = t.infinity().scalar_value();
    add(
        "infinity_scalar",
        pass(
            scalar.is_some(),
            json!({"scalar": scalar.map(|c| f.encode(&c))}),
        ),
    );

    Certificate {
        n,
        q,
        mode,
        checks,
        assumed_external: ASSUMED_EXTERNAL.iter().map(|s| s.to_string()).collect(),
    }
}
