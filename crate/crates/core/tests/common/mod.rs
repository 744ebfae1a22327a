#![allow(dead_code)]

use mconv_core::fields::{Field, FiniteField};
use mconv_core::group::burnside_dimension;
use mconv_core::linalg::{inverse, Matrix};
use mconv_core::tuples::MonodromyTuple;
use rand::Rng;

pub const P: u64 = 13;

pub fn f13() -> FiniteField {
    FiniteField::new(P, 1).unwrap()
}

pub fn random_invertible<R: Rng>(f: &FiniteField, n: usize, rng: &mut R) -> Matrix<FiniteField> {
    loop {
        let m = Matrix::from_fn(f, n, n, |_, _| rng.gen_range(0..f.size() as u32));
        if !f.is_zero(&m.determinant()) {
            return m;
        }
    }
}

/// `P D P^-1` with `D` diagonal, eigenvalues drawn from a few roots of unity
/// and biased towards 1 so that fixed spaces are common.
pub fn random_semisimple<R: Rng>(f: &FiniteField, n: usize, rng: &mut R) -> Matrix<FiniteField> {
    // 1, -1, order 3, order 4, order 6 in F_13
    const EIGEN: [u32; 7] = [1, 1, 12, 3, 5, 8, 4];
    let d: Vec<u32> = (0..n).map(|_| EIGEN[rng.gen_range(0..EIGEN.len())]).collect();
    let p = random_invertible(f, n, rng);
    p.mul(&Matrix::diagonal(f, &d)).mul(&inverse(&p).unwrap())
}

/// A random tuple of rank `n` with `r` finite entries over F_13 that is
/// absolutely irreducible and has at least two non-identity finite entries
/// (which excludes the single-point Kummer tuples that the convolution kills).
pub fn random_irreducible<R: Rng>(n: usize, r: usize, rng: &mut R) -> MonodromyTuple<FiniteField> {
    let f = f13();
    loop {
        let finite: Vec<_> = (0..r).map(|_| random_semisimple(&f, n, rng)).collect();
        if finite.iter().filter(|m| !m.is_identity()).count() < 2 {
            continue;
        }
        let t = MonodromyTuple::from_finite_entries(&f, finite).unwrap();
        if burnside_dimension(t.entries()) == n * n {
            return t;
        }
    }
}

/// Plain `u64` matrices mod `P`, used as an oracle independent of the
/// library's linear algebra.
pub type Raw = Vec<Vec<u64>>;

pub fn to_raw(m: &Matrix<FiniteField>) -> Raw {
    (0..m.rows()).map(|i| m.row(i).iter().map(|&x| x as u64).collect()).collect()
}

fn inv_mod(a: u64) -> u64 {
    let mut r = 1;
    for _ in 0..P - 2 {
        r = r * a % P;
    }
    r
}

/// Row echelon form mod `P`; returns the pivot columns.
pub fn echelon(m: &mut Raw) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, p);
        let inv = inv_mod(m[r][c]);
        for x in m[r].iter_mut() {
            *x = *x * inv % P;
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..cols {
                    m[i][j] = (m[i][j] + P * P - f * m[r][j]) % P;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

pub fn rank_raw(m: &Raw) -> usize {
    let mut m = m.clone();
    echelon(&mut m).len()
}

pub fn kernel_raw(m: &Raw, cols: usize) -> Vec<Vec<u64>> {
    let mut m = m.clone();
    let pivots = echelon(&mut m);
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0; cols];
            v[free] = 1;
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = (P - m[i][free]) % P;
            }
            v
        })
        .collect()
}

/// `(dim K, dim L, dim (K + L))` for `MC_lambda` computed from scratch.
pub fn brute_force_kl(t: &MonodromyTuple<FiniteField>, lambda: u64) -> (usize, usize, usize) {
    let n = t.n();
    let r = t.r();
    let dim = r * n;
    let ts: Vec<Raw> = t.finite_entries().iter().map(to_raw).collect();
    let minus_one = |m: &Raw| -> Raw {
        let mut m = m.clone();
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = (row[i] + P - 1) % P;
        }
        m
    };
    let mut k_vectors = Vec::new();
    for (j, tj) in ts.iter().enumerate() {
        for v in kernel_raw(&minus_one(tj), n) {
            let mut w = vec![0; dim];
            w[j * n..(j + 1) * n].copy_from_slice(&v);
            k_vectors.push(w);
        }
    }
    // B_k - 1 is zero outside block row k
    let mut stacked: Raw = Vec::new();
    for k in 0..r {
        for i in 0..n {
            let mut row = vec![0u64; dim];
            for (j, tj) in ts.iter().enumerate() {
                for c in 0..n {
                    let t = tj[i][c];
                    let delta = u64::from(i == c);
                    let v = if j < k {
                        lambda * ((t + P - delta) % P) % P
                    } else if j == k {
                        (lambda * t % P + P - delta) % P
                    } else {
                        (t + P - delta) % P
                    };
                    row[j * n + c] = v;
                }
            }
            stacked.push(row);
        }
    }
    let l_vectors = kernel_raw(&stacked, dim);
    let dim_k = rank_raw(&k_vectors);
    let dim_l = l_vectors.len();
    let mut both = k_vectors;
    both.extend(l_vectors);
    (dim_k, dim_l, rank_raw(&both))
}
