use super::{kernel, Matrix, Subspace};
use crate::error::{Error, Result};
use crate::fields::Field;

/// Actions induced by `mats` on `F^n / S`, written in the basis given by the
/// non-pivot coordinates of `S`.
pub fn induced_quotient_action<F: Field>(mats: &[Matrix<F>], s: &Subspace<F>) -> Result<Vec<Matrix<F>>> {
    for (index, m) in mats.iter().enumerate() {
        if m.rows() != s.ambient_dim() || !m.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "matrix {index} is {}x{}, subspace ambient dim {}",
                m.rows(),
                m.cols(),
                s.ambient_dim()
            )));
        }
        if !s.is_invariant_under(m) {
            return Err(Error::NotInvariant { index });
        }
    }
    let f = s.field();
    let comp = s.complement_coordinates();
    let d = comp.len();
    mats.iter()
        .map(|m| {
            let mut q = Matrix::zeros(f, d, d);
            for (b, &cb) in comp.iter().enumerate() {
                let image = s.reduce(&m.column(cb));
                for (a, &ca) in comp.iter().enumerate() {
                    q.set(a, b, image[ca].clone());
                }
            }
            Ok(q)
        })
        .collect()
}

/// Largest solution space searched exhaustively over a finite prime field.
const ENUMERATION_LIMIT: u64 = 1 << 17;

/// An invertible `X` with `X * a[i] = b[i] * X` for every `i`, if one is found.
///
/// The solution space of the linear system is computed exactly. Its basis
/// elements are tried first, then the combinations `sum_j t^j X_j` for
/// `t = 1..=n^2+1`, and, in positive characteristic, every combination with
/// prime-field coefficients when there are at most `ENUMERATION_LIMIT` of them.
pub fn simultaneous_conjugacy<F: Field>(a: &[Matrix<F>], b: &[Matrix<F>]) -> Option<Matrix<F>> {
    if a.len() != b.len() {
        return None;
    }
    let Some(first) = a.first().or(b.first()) else {
        return None;
    };
    let f = first.field().clone();
    let n = first.rows();
    if a.iter().chain(b).any(|m| m.rows() != n || m.cols() != n) {
        return None;
    }
    if a.is_empty() {
        return Some(Matrix::identity(&f, n));
    }

    // unknown X_{pq} sits at column p*n + q
    let nn = n * n;
    let mut rows = Vec::with_capacity(a.len() * nn);
    for (ai, bi) in a.iter().zip(b) {
        for i in 0..n {
            for j in 0..n {
                let mut row = vec![f.zero(); nn];
                for k in 0..n {
                    // (X A)_{ij} = sum_k X_{ik} A_{kj}
                    let c = ai.get(k, j);
                    if !f.is_zero(c) {
                        row[i * n + k] = f.add(&row[i * n + k], c);
                    }
                    // (B X)_{ij} = sum_k B_{ik} X_{kj}
                    let c = bi.get(i, k);
                    if !f.is_zero(c) {
                        row[k * n + j] = f.sub(&row[k * n + j], c);
                    }
                }
                if row.iter().any(|x| !f.is_zero(x)) {
                    rows.push(row);
                }
            }
        }
    }
    let system = if rows.is_empty() {
        Matrix::zeros(&f, 0, nn)
    } else {
        Matrix::from_rows(&f, rows).expect("rectangular")
    };
    let sol = kernel(&system);
    let basis: Vec<Matrix<F>> = sol
        .basis_vectors()
        .iter()
        .map(|v| Matrix::from_fn(&f, n, n, |p, q| v[p * n + q].clone()))
        .collect();
    if basis.is_empty() {
        return None;
    }

    let accept = |x: &Matrix<F>| -> bool {
        !f.is_zero(&x.determinant())
            && a.iter().zip(b).all(|(ai, bi)| x.mul(ai) == bi.mul(x))
    };
    let combine = |coeffs: &[F::Elem]| -> Matrix<F> {
        basis
            .iter()
            .zip(coeffs)
            .filter(|(_, c)| !f.is_zero(c))
            .fold(Matrix::zeros(&f, n, n), |acc, (x, c)| acc.add(&x.scale(c)))
    };

    if let Some(x) = basis.iter().find(|x| accept(x)) {
        return Some(x.clone());
    }
    let d = basis.len();
    for t in 1..=(nn as i64 + 1) {
        let t = f.from_i64(t);
        let coeffs: Vec<F::Elem> = (0..d as u64).map(|j| f.pow(&t, j)).collect();
        let x = combine(&coeffs);
        if accept(&x) {
            return Some(x);
        }
    }
    let ell = f.characteristic();
    if ell > 0 {
        let total = (ell as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
        if total <= ENUMERATION_LIMIT as u128 {
            let mut digits = vec![0u64; d];
            for _ in 0..total {
                let coeffs: Vec<F::Elem> = digits.iter().map(|&c| f.from_i64(c as i64)).collect();
                let x = combine(&coeffs);
                if accept(&x) {
                    return Some(x);
                }
                for dgt in digits.iter_mut() {
                    *dgt += 1;
                    if *dgt < ell {
                        break;
                    }
                    *dgt = 0;
                }
            }
        }
    }
    None
}
