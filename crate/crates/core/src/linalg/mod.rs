//! Dense exact linear algebra over any [`Field`].
//!
//! Vectors are columns; a [`Subspace`] stores its basis as the rows of a
//! matrix in reduced row echelon form, which makes equality of subspaces a
//! plain entrywise comparison.

mod charpoly;
mod conjugacy;
mod jordan;
mod subspace;

use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fields::{Field, FieldDescriptor};

pub use charpoly::{char_poly, Polynomial};
pub use conjugacy::{induced_quotient_action, simultaneous_conjugacy};
pub use jordan::{jordan_data, JordanBlock, JordanData};
pub(crate) use subspace::SemiEchelon;
pub use subspace::{kernel, Subspace};

#[derive(Clone, PartialEq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field.descriptor())?;
        for i in 0..self.rows {
            let row: Vec<String> = self
                .row(i)
                .iter()
                .map(|e| self.field.encode(e).to_string())
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        Self::scalar(field, n, field.one())
    }

    pub fn scalar(field: &F, n: usize, c: F::Elem) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = c.clone();
        }
        m
    }

    pub fn diagonal(field: &F, diag: &[F::Elem]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(field, n, n);
        for (i, d) in diag.iter().enumerate() {
            m.data[i * n + i] = d.clone();
        }
        m
    }

    pub fn from_rows(field: &F, rows: Vec<Vec<F::Elem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix {
            field: field.clone(),
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Matrix with small integer entries; handy in tests and constructors.
    pub fn from_i64(field: &F, rows: &[&[i64]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
            .collect();
        Self::from_rows(field, rows).expect("rectangular input")
    }

    pub fn from_fn(field: &F, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F::Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vec<F::Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[F::Elem] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product dimensions");
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if f.is_zero(b) {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add(&out.data[idx], &f.mul(a, b));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(self.cols, v.len());
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).fold(f.zero(), |acc, (a, b)| {
                    if f.is_zero(a) || f.is_zero(b) {
                        acc
                    } else {
                        f.add(&acc, &f.mul(a, b))
                    }
                })
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |f, a, b| f.add(a, b))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |f, a, b| f.sub(a, b))
    }

    fn zip_with(&self, other: &Self, op: impl Fn(&F, &F::Elem, &F::Elem) -> F::Elem) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| op(&self.field, a, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        self.map(|f, a| f.mul(c, a))
    }

    pub fn neg(&self) -> Self {
        self.map(|f, a| f.neg(a))
    }

    fn map(&self, op: impl Fn(&F, &F::Elem) -> F::Elem) -> Self {
        Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| op(&self.field, a)).collect(),
        }
    }

    /// `self - c * 1`.
    pub fn minus_scalar(&self, c: &F::Elem) -> Self {
        assert!(self.is_square());
        let mut m = self.clone();
        for i in 0..self.rows {
            let idx = i * self.cols + i;
            m.data[idx] = self.field.sub(&m.data[idx], c);
        }
        m
    }

    pub fn minus_identity(&self) -> Self {
        self.minus_scalar(&self.field.one())
    }

    pub fn plus_identity(&self) -> Self {
        self.minus_scalar(&self.field.neg(&self.field.one()))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(&self.field, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| self.field.is_zero(a))
    }

    pub fn is_identity(&self) -> bool {
        self.scalar_value().is_some_and(|c| self.field.is_one(&c))
    }

    /// `Some(c)` when the matrix equals `c * 1`.
    pub fn scalar_value(&self) -> Option<F::Elem> {
        if !self.is_square() || self.rows == 0 {
            return None;
        }
        let c = self.get(0, 0).clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.get(i, j);
                let ok = if i == j { *e == c } else { self.field.is_zero(e) };
                if !ok {
                    return None;
                }
            }
        }
        Some(c)
    }

    /// Entrywise image in another field.
    pub fn map_field<G: Field>(&self, target: &G, mut f: impl FnMut(&F::Elem) -> Result<G::Elem>) -> Result<Matrix<G>> {
        let data = self.data.iter().map(&mut f).collect::<Result<Vec<_>>>()?;
        Ok(Matrix {
            field: target.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Block placement: copies `block` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    pub fn determinant(&self) -> F::Elem {
        assert!(self.is_square());
        let f = &self.field;
        let mut rows = self.row_vectors();
        let n = self.rows;
        let mut det = f.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !f.is_zero(&rows[i][c])) else {
                return f.zero();
            };
            if p != c {
                rows.swap(p, c);
                det = f.neg(&det);
            }
            det = f.mul(&det, &rows[c][c]);
            let inv = f.inv(&rows[c][c]).expect("nonzero pivot");
            let pivot_row = rows[c].clone();
            for row in rows.iter_mut().skip(c + 1) {
                if f.is_zero(&row[c]) {
                    continue;
                }
                let factor = f.mul(&row[c], &inv);
                for j in c..n {
                    if !f.is_zero(&pivot_row[j]) {
                        row[j] = f.sub_mul(&row[j], &factor, &pivot_row[j]);
                    }
                }
            }
        }
        det
    }
}

impl<F: Field> Matrix<F> {
    /// `{"field", "rows", "cols", "entries"}` document.
    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = (0..self.rows)
            .map(|i| Value::Array(self.row(i).iter().map(|e| self.field.encode(e)).collect()))
            .collect();
        json!({
            "field": self.field.descriptor(),
            "rows": self.rows,
            "cols": self.cols,
            "entries": entries,
        })
    }

    /// Parses a matrix document whose field must be `field`.
    pub fn from_json(field: &F, v: &Value, location: &str) -> Result<Self> {
        if let Some(d) = v.get("field") {
            let d: FieldDescriptor = serde_json::from_value(d.clone())
                .map_err(|e| Error::parse(&format!("{location}.field"), &e.to_string()))?;
            if d != field.descriptor() {
                return Err(Error::FieldMismatch(format!(
                    "{location}: matrix over {d}, expected {}",
                    field.descriptor()
                )));
            }
        }
        let dim = |key: &str| {
            v.get(key)
                .and_then(Value::as_u64)
                .map(|x| x as usize)
                .ok_or_else(|| Error::parse(&format!("{location}.{key}"), "missing integer"))
        };
        let (rows, cols) = (dim("rows")?, dim("cols")?);
        let entries = v
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::parse(&format!("{location}.entries"), "missing array"))?;
        if entries.len() != rows {
            return Err(Error::parse(
                &format!("{location}.entries"),
                &format!("expected {rows} rows, found {}", entries.len()),
            ));
        }
        let mut data = Vec::with_capacity(rows * cols);
        for (i, row) in entries.iter().enumerate() {
            let loc = format!("{location}.entries[{i}]");
            let row = row
                .as_array()
                .filter(|r| r.len() == cols)
                .ok_or_else(|| Error::parse(&loc, &format!("expected an array of {cols} elements")))?;
            for (j, e) in row.iter().enumerate() {
                let x = field
                    .decode(e)
                    .map_err(|msg| Error::parse(&format!("{loc}[{j}]"), &msg))?;
                data.push(x);
            }
        }
        Ok(Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }
}

/// Result of [`rref`].
#[derive(Debug, Clone)]
pub struct Rref<F: Field> {
    pub matrix: Matrix<F>,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Reduces the rows in place; returns pivot columns.
pub(crate) fn rref_rows<F: Field>(f: &F, rows: &mut [Vec<F::Elem>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !f.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, p);
        let inv = f.inv(&rows[r][c]).expect("nonzero pivot");
        let mut pivot_nz = Vec::new();
        for j in c..cols {
            if !f.is_zero(&rows[r][j]) {
                let v = if j == c { f.one() } else { f.mul(&inv, &rows[r][j]) };
                rows[r][j] = v.clone();
                pivot_nz.push((j, v));
            }
        }
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || f.is_zero(&row[c]) {
                continue;
            }
            let factor = row[c].clone();
            for (j, v) in &pivot_nz {
                row[*j] = f.sub_mul(&row[*j], &factor, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Reduced row echelon form by Gauss-Jordan elimination, pivoting on the
/// first nonzero entry of each column.
pub fn rref<F: Field>(m: &Matrix<F>) -> Rref<F> {
    let mut rows = m.row_vectors();
    let pivots = rref_rows(&m.field, &mut rows, m.cols);
    let matrix = Matrix {
        field: m.field.clone(),
        rows: m.rows,
        cols: m.cols,
        data: rows.into_iter().flatten().collect(),
    };
    Rref {
        rank: pivots.len(),
        matrix,
        pivots,
    }
}

pub fn rank<F: Field>(m: &Matrix<F>) -> usize {
    let mut rows = m.row_vectors();
    rref_rows(&m.field, &mut rows, m.cols).len()
}

pub fn inverse<F: Field>(m: &Matrix<F>) -> Result<Matrix<F>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "inverse of a {}x{} matrix",
            m.rows, m.cols
        )));
    }
    let n = m.rows;
    let f = &m.field;
    if n == 0 {
        return Ok(m.clone());
    }
    let mut rows: Vec<Vec<F::Elem>> = (0..n)
        .map(|i| {
            let mut r = m.row(i).to_vec();
            r.extend((0..n).map(|j| if i == j { f.one() } else { f.zero() }));
            r
        })
        .collect();
    let pivots = rref_rows(f, &mut rows, 2 * n);
    if pivots.len() < n || pivots[n - 1] >= n {
        return Err(Error::SingularMatrix);
    }
    let data = rows.into_iter().flat_map(|r| r.into_iter().skip(n)).collect();
    Ok(Matrix {
        field: f.clone(),
        rows: n,
        cols: n,
        data,
    })
}

/// Ordered product `ms[0] * ms[1] * ...` of square matrices of size `n`.
pub fn product<'a, F: Field + 'a>(field: &F, n: usize, ms: impl IntoIterator<Item = &'a Matrix<F>>) -> Matrix<F> {
    ms.into_iter()
        .fold(Matrix::identity(field, n), |acc, m| acc.mul(m))
}
