use super::Matrix;
use crate::fields::Field;

/// Dense univariate polynomial, coefficients from the constant term up.
#[derive(Clone, PartialEq)]
pub struct Polynomial<F: Field> {
    field: F,
    coeffs: Vec<F::Elem>,
}

impl<F: Field> std::fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{}*x^{i}", self.field.encode(c)))
            .collect();
        write!(f, "Polynomial({})", terms.join(" + "))
    }
}

impl<F: Field> Polynomial<F> {
    pub fn new(field: &F, mut coeffs: Vec<F::Elem>) -> Self {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        Polynomial {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn from_i64(field: &F, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn one(field: &F) -> Self {
        Self::new(field, vec![field.one()])
    }

    /// `x - a`.
    pub fn linear(field: &F, a: &F::Elem) -> Self {
        Self::new(field, vec![field.neg(a), field.one()])
    }

    pub fn coefficients(&self) -> &[F::Elem] {
        &self.coeffs
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: &F::Elem) -> F::Elem {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = f.zero();
        let c = (0..n)
            .map(|i| {
                f.add(
                    self.coeffs.get(i).unwrap_or(&z),
                    other.coeffs.get(i).unwrap_or(&z),
                )
            })
            .collect();
        Self::new(f, c)
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        let f = &self.field;
        Self::new(f, self.coeffs.iter().map(|c| f.mul(c, s)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Self::new(f, Vec::new());
        }
        let mut c = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] = f.add(&c[i + j], &f.mul(a, b));
            }
        }
        Self::new(f, c)
    }

    /// Synthetic division by `x - a`: `(quotient, remainder)`.
    pub fn div_linear(&self, a: &F::Elem) -> (Self, F::Elem) {
        let f = &self.field;
        if self.is_zero() {
            return (self.clone(), f.zero());
        }
        let mut q = vec![f.zero(); self.coeffs.len() - 1];
        let mut acc = f.zero();
        for i in (0..self.coeffs.len()).rev() {
            acc = f.add(&f.mul(&acc, a), &self.coeffs[i]);
            if i > 0 {
                q[i - 1] = acc.clone();
            }
        }
        (Self::new(f, q), acc)
    }

    /// Multiplicity of `a` as a root.
    pub fn root_multiplicity(&self, a: &F::Elem) -> usize {
        let mut p = self.clone();
        let mut m = 0;
        while !p.is_zero() {
            let (q, rem) = p.div_linear(a);
            if !self.field.is_zero(&rem) {
                break;
            }
            p = q;
            m += 1;
        }
        m
    }
}

/// `det(x*1 - M)` via reduction to upper Hessenberg form followed by the
/// standard three-term recurrence. Only field divisions by pivots occur, so
/// the method is valid in every characteristic.
pub fn char_poly<F: Field>(m: &Matrix<F>) -> Polynomial<F> {
    assert!(m.is_square(), "char_poly of a non-square matrix");
    let f = m.field();
    let n = m.rows();
    let mut h = m.row_vectors();

    for c in 0..n.saturating_sub(2) {
        let Some(p) = (c + 1..n).find(|&i| !f.is_zero(&h[i][c])) else {
            continue;
        };
        if p != c + 1 {
            h.swap(p, c + 1);
            for row in h.iter_mut() {
                row.swap(p, c + 1);
            }
        }
        let pivot_inv = f.inv(&h[c + 1][c]).expect("nonzero pivot");
        for i in c + 2..n {
            if f.is_zero(&h[i][c]) {
                continue;
            }
            let u = f.mul(&h[i][c], &pivot_inv);
            // row_i -= u * row_{c+1}, then col_{c+1} += u * col_i
            let (upper, lower) = h.split_at_mut(i);
            let pr = &upper[c + 1];
            let ri = &mut lower[0];
            for j in 0..n {
                if !f.is_zero(&pr[j]) {
                    ri[j] = f.sub_mul(&ri[j], &u, &pr[j]);
                }
            }
            for row in h.iter_mut() {
                if !f.is_zero(&row[i]) {
                    let t = f.mul(&u, &row[i]);
                    row[c + 1] = f.add(&row[c + 1], &t);
                }
            }
        }
    }

    // p_0 = 1; p_k = (x - h_kk) p_{k-1} - sum_{i<k} h_ik (prod_{j=i+1}^{k} h_{j,j-1}) p_{i-1}
    let mut polys: Vec<Polynomial<F>> = vec![Polynomial::one(f)];
    for k in 0..n {
        let mut next = polys[k].mul(&Polynomial::linear(f, &h[k][k]));
        let mut t = f.one();
        for i in (0..k).rev() {
            t = f.mul(&t, &h[i + 1][i]);
            if f.is_zero(&t) {
                break;
            }
            let coeff = f.mul(&t, &h[i][k]);
            if !f.is_zero(&coeff) {
                next = next.add(&polys[i].scale(&f.neg(&coeff)));
            }
        }
        polys.push(next);
    }
    polys.pop().expect("nonempty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{CyclotomicField, Rationals};

    #[test]
    fn examples() {
        let k = CyclotomicField::new(4);
        let i = k.root_of_unity(4, 1).unwrap();
        let d = Matrix::diagonal(&k, &[i.clone(), k.neg(&i)]);
        assert_eq!(char_poly(&d), Polynomial::from_i64(&k, &[1, 0, 1]));

        let f = Rationals;
        let r = Matrix::from_i64(&f, &[&[0, -1], &[1, 0]]);
        assert_eq!(char_poly(&r), Polynomial::from_i64(&f, &[1, 0, 1]));
        let j = Matrix::from_i64(&f, &[&[1, 1], &[0, 1]]);
        assert_eq!(char_poly(&j), Polynomial::from_i64(&f, &[1, -2, 1]));
        assert_eq!(char_poly(&j).root_multiplicity(&f.one()), 2);
    }

    #[test]
    fn needs_row_swap() {
        let f = Rationals;
        let m = Matrix::from_i64(&f, &[&[1, 2, 3], &[0, 4, 5], &[6, 0, 7]]);
        // det(x - M) = x^3 - 12x^2 + 21x - 16
        assert_eq!(char_poly(&m), Polynomial::from_i64(&f, &[-16, 21, -12, 1]));
    }
}
