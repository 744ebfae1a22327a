//! Middle convolution `MC_lambda` of monodromy tuples.
//!
//! For a tuple `(T_1, ..., T_{r+1})` of rank `n` the ambient matrices `B_k`
//! act on `F^{rn}`; `B_k` is the identity outside its `k`-th block row, which
//! reads `(l(T_1 - 1), ..., l(T_{k-1} - 1), l T_k, T_{k+1} - 1, ..., T_r - 1)`
//! with `l = lambda`. The convolution is the action induced on `F^{rn}/(K + L)`
//! where `K = sum_k ker(T_k - 1)` (in block `k`) and `L = meet_k ker(B_k - 1)`.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fields::Field;
use crate::linalg::{induced_quotient_action, kernel, product, rank, simultaneous_conjugacy, Matrix, Subspace};
use crate::tuples::{validate, MonodromyTuple};

/// The ambient data of one convolution step.
#[derive(Debug, Clone)]
pub struct ConvolutionWorkspace<F: Field> {
    pub lambda: F::Elem,
    pub ambient: Vec<Matrix<F>>,
    pub k: Subspace<F>,
    pub l: Subspace<F>,
}

impl<F: Field> ConvolutionWorkspace<F> {
    pub fn ambient_dim(&self) -> usize {
        self.k.ambient_dim()
    }
}

fn check_input<F: Field>(t: &MonodromyTuple<F>, lambda: &F::Elem) -> Result<()> {
    let f = t.field();
    if f.is_zero(lambda) || f.is_one(lambda) {
        return Err(Error::InvalidCharacter);
    }
    if t.r() < 3 {
        return Err(Error::TooFewPoints(t.r()));
    }
    validate(t)
}

/// `k`-th block row of `B_k - 1`, as an `n x rn` matrix.
fn block_row<F: Field>(t: &MonodromyTuple<F>, lambda: &F::Elem, k: usize) -> Matrix<F> {
    let f = t.field();
    let (n, r) = (t.n(), t.r());
    let mut row = Matrix::zeros(f, n, r * n);
    for (j, tj) in t.finite_entries().iter().enumerate() {
        let block = match j.cmp(&k) {
            std::cmp::Ordering::Less => tj.minus_identity().scale(lambda),
            std::cmp::Ordering::Equal => tj.scale(lambda).minus_identity(),
            std::cmp::Ordering::Greater => tj.minus_identity(),
        };
        row.set_block(0, j * n, &block);
    }
    row
}

pub fn build_ambient<F: Field>(t: &MonodromyTuple<F>, lambda: &F::Elem) -> Result<ConvolutionWorkspace<F>> {
    check_input(t, lambda)?;
    let f = t.field();
    let (n, r) = (t.n(), t.r());
    let dim = r * n;

    let rows: Vec<Matrix<F>> = (0..r).map(|k| block_row(t, lambda, k)).collect();
    let ambient: Vec<Matrix<F>> = rows
        .iter()
        .enumerate()
        .map(|(k, row)| {
            let mut b = Matrix::identity(f, dim);
            let shifted = {
                let mut s = row.clone();
                for i in 0..n {
                    let j = k * n + i;
                    s.set(i, j, f.add(s.get(i, j), &f.one()));
                }
                s
            };
            b.set_block(k * n, 0, &shifted);
            b
        })
        .collect();

    let mut k_vectors = Vec::new();
    for (j, tj) in t.finite_entries().iter().enumerate() {
        for v in kernel(&tj.minus_identity()).basis_vectors() {
            let mut w = vec![f.zero(); dim];
            w[j * n..(j + 1) * n].clone_from_slice(v);
            k_vectors.push(w);
        }
    }
    let k_space = Subspace::span(f, dim, k_vectors);

    let stacked = Matrix::from_rows(f, rows.iter().flat_map(Matrix::row_vectors).collect())?;
    let l_space = kernel(&stacked);

    for (index, b) in ambient.iter().enumerate() {
        if !k_space.is_invariant_under(b) || !l_space.is_invariant_under(b) {
            return Err(Error::NotInvariant { index });
        }
    }
    Ok(ConvolutionWorkspace {
        lambda: lambda.clone(),
        ambient,
        k: k_space,
        l: l_space,
    })
}

/// Quotient tuple of a workspace; the infinity entry is the inverse of the
/// product of the finite entries.
pub fn mc_from_workspace<F: Field>(field: &F, ws: &ConvolutionWorkspace<F>) -> Result<MonodromyTuple<F>> {
    let s = ws.k.sum(&ws.l);
    let finite = induced_quotient_action(&ws.ambient, &s)?;
    let d = s.ambient_dim() - s.dim();
    let mut entries = finite;
    let prod = product(field, d, entries.iter());
    entries.push(crate::linalg::inverse(&prod)?);
    let out = MonodromyTuple::new(field, entries)?;
    validate(&out)?;
    Ok(out)
}

pub fn mc<F: Field>(t: &MonodromyTuple<F>, lambda: &F::Elem) -> Result<MonodromyTuple<F>> {
    let ws = build_ambient(t, lambda)?;
    mc_from_workspace(t.field(), &ws)
}

/// `sum_k rk(T_k - 1) + rk(lambda T_{r+1}^{-1} - 1) - n`; the rank of the
/// convolution for irreducible input.
pub fn expected_rank<F: Field>(t: &MonodromyTuple<F>, lambda: &F::Elem) -> Result<i64> {
    validate(t)?;
    let finite: usize = t.finite_entries().iter().map(|m| rank(&m.minus_identity())).sum();
    let inf = crate::linalg::inverse(t.infinity())?.scale(lambda).minus_identity();
    Ok(finite as i64 + rank(&inf) as i64 - t.n() as i64)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SelfcheckReport {
    pub checks: Vec<Check>,
}

impl SelfcheckReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        });
    }

    pub fn to_json(&self) -> Value {
        json!({
            "checks": self.checks.iter().map(|c| json!({
                "name": c.name,
                "pass": c.pass,
                "detail": c.detail,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Runs `mc` and compares against the closed rank formula; with
/// `involution` set and `lambda^2 = 1`, also convolves twice and looks for a
/// simultaneous conjugation back to `t`.
pub fn mc_selfcheck_with<F: Field>(t: &MonodromyTuple<F>, lambda: &F::Elem, involution: bool) -> SelfcheckReport {
    let f = t.field();
    let mut report = SelfcheckReport::default();
    let out = match mc(t, lambda) {
        Ok(out) => out,
        Err(e) => {
            report.push("mc", false, e.to_string());
            return report;
        }
    };
    match expected_rank(t, lambda) {
        Ok(expected) => report.push(
            "rank_formula",
            expected == out.n() as i64,
            format!("mc rank {}, closed formula {expected}", out.n()),
        ),
        Err(e) => report.push("rank_formula", false, e.to_string()),
    }
    match validate(&out) {
        Ok(()) => report.push("product_relation", true, "output entries multiply to the identity"),
        Err(e) => report.push("product_relation", false, e.to_string()),
    }
    if involution && f.is_one(&f.mul(lambda, lambda)) {
        match mc(&out, lambda) {
            Ok(back) if back.n() != t.n() => report.push(
                "involution",
                false,
                format!("double convolution has rank {}, input rank {}", back.n(), t.n()),
            ),
            Ok(back) => match simultaneous_conjugacy(back.entries(), t.entries()) {
                Some(_) => report.push("involution", true, "double convolution conjugate to the input"),
                None => report.push("involution", false, "no conjugating matrix found"),
            },
            Err(e) => report.push("involution", false, e.to_string()),
        }
    }
    report
}

pub fn mc_selfcheck<F: Field>(t: &MonodromyTuple<F>, lambda: &F::Elem) -> SelfcheckReport {
    mc_selfcheck_with(t, lambda, true)
}
