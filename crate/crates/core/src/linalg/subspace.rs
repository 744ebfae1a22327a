use super::{rref_rows, Matrix};
use crate::fields::Field;

/// A subspace of `F^ambient_dim`, stored by its canonical echelon basis.
#[derive(Clone, PartialEq)]
pub struct Subspace<F: Field> {
    field: F,
    ambient_dim: usize,
    basis: Vec<Vec<F::Elem>>,
    pivots: Vec<usize>,
}

impl<F: Field> std::fmt::Debug for Subspace<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Subspace(dim {} in {}, pivots {:?})",
            self.basis.len(),
            self.ambient_dim,
            self.pivots
        )
    }
}

impl<F: Field> Subspace<F> {
    pub fn zero(field: &F, ambient_dim: usize) -> Self {
        Subspace {
            field: field.clone(),
            ambient_dim,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: &F, ambient_dim: usize) -> Self {
        let basis = (0..ambient_dim)
            .map(|i| {
                (0..ambient_dim)
                    .map(|j| if i == j { field.one() } else { field.zero() })
                    .collect()
            })
            .collect();
        Subspace {
            field: field.clone(),
            ambient_dim,
            basis,
            pivots: (0..ambient_dim).collect(),
        }
    }

    /// Span of arbitrary vectors (zero vectors and dependencies allowed).
    pub fn span(field: &F, ambient_dim: usize, vectors: Vec<Vec<F::Elem>>) -> Self {
        let mut rows = vectors;
        assert!(rows.iter().all(|v| v.len() == ambient_dim), "vector length");
        let pivots = rref_rows(field, &mut rows, ambient_dim);
        rows.truncate(pivots.len());
        Subspace {
            field: field.clone(),
            ambient_dim,
            basis: rows,
            pivots,
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_vectors(&self) -> &[Vec<F::Elem>] {
        &self.basis
    }

    /// The echelon basis as the rows of a matrix.
    pub fn basis(&self) -> Matrix<F> {
        if self.basis.is_empty() {
            return Matrix::zeros(&self.field, 0, self.ambient_dim);
        }
        Matrix::from_rows(&self.field, self.basis.clone()).expect("rectangular")
    }

    /// Coordinates not carrying a pivot; they index the fixed complement.
    pub fn complement_coordinates(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient_dim];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ambient_dim).filter(|&i| !is_pivot[i]).collect()
    }

    /// Representative of `v` modulo the subspace with zero pivot coordinates.
    pub fn reduce(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let mut v = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if f.is_zero(&v[p]) {
                continue;
            }
            let c = v[p].clone();
            for (x, b) in v.iter_mut().zip(row) {
                if !f.is_zero(b) {
                    *x = f.sub_mul(x, &c, b);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        self.reduce(v).iter().all(|x| self.field.is_zero(x))
    }

    pub fn sum(&self, other: &Self) -> Self {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Subspace::span(&self.field, self.ambient_dim, vs)
    }

    /// True when `m` maps the subspace into itself.
    pub fn is_invariant_under(&self, m: &Matrix<F>) -> bool {
        self.basis.iter().all(|b| self.contains(&m.mul_vec(b)))
    }
}

/// Incrementally grown semi-echelon basis: each stored row has a leading
/// pivot equal to one, and rows inserted later vanish at earlier pivots.
#[derive(Debug, Clone)]
pub(crate) struct SemiEchelon<F: Field> {
    field: F,
    rows: Vec<Vec<F::Elem>>,
    pivots: Vec<usize>,
}

impl<F: Field> SemiEchelon<F> {
    pub(crate) fn new(field: &F) -> Self {
        SemiEchelon {
            field: field.clone(),
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub(crate) fn dim(&self) -> usize {
        self.rows.len()
    }

    pub(crate) fn rows(&self) -> &[Vec<F::Elem>] {
        &self.rows
    }

    /// Adds `v` if it is independent of the stored rows; reports whether it was.
    pub(crate) fn insert(&mut self, mut v: Vec<F::Elem>) -> bool {
        let f = &self.field;
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if f.is_zero(&v[p]) {
                continue;
            }
            let c = v[p].clone();
            for (x, b) in v.iter_mut().zip(row).skip(p) {
                if !f.is_zero(b) {
                    *x = f.sub_mul(x, &c, b);
                }
            }
        }
        let Some(p) = v.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&v[p]).expect("nonzero");
        for x in v.iter_mut().skip(p) {
            if !f.is_zero(x) {
                *x = f.mul(x, &inv);
            }
        }
        self.rows.push(v);
        self.pivots.push(p);
        true
    }
}

/// Right kernel `{v : M v = 0}` in canonical form.
pub fn kernel<F: Field>(m: &Matrix<F>) -> Subspace<F> {
    let f = m.field();
    let cols = m.cols();
    let mut rows = m.row_vectors();
    let pivots = rref_rows(f, &mut rows, cols);
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let vectors = (0..cols)
        .filter(|&j| !is_pivot[j])
        .map(|free| {
            let mut v = vec![f.zero(); cols];
            v[free] = f.one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = f.neg(&rows[i][free]);
            }
            v
        })
        .collect();
    Subspace::span(f, cols, vectors)
}
