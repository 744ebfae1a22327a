mod common;

use mconv_core::fields::{Field, FiniteField, Rationals};
use mconv_core::linalg::{char_poly, inverse, jordan_data, kernel, rank, rref, simultaneous_conjugacy, JordanData, Matrix};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rational_matrix(rows: usize, cols: usize, data: &[i64]) -> Matrix<Rationals> {
    Matrix::from_fn(&Rationals, rows, cols, |i, j| {
        BigRational::from_integer(BigInt::from(data[(i * cols + j) % data.len()]))
    })
}

/// Leibniz determinant of `x I - m` over F_p, plain integers.
fn leibniz_char_value(m: &[Vec<u64>], x: u64, p: u64) -> u64 {
    let n = m.len();
    let a: Vec<Vec<u64>> = (0..n)
        .map(|i| (0..n).map(|j| ((if i == j { x } else { 0 }) + p - m[i][j]) % p).collect())
        .collect();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = 0;
    permute(&mut perm, 0, &a, p, &mut total);
    total
}

fn permute(perm: &mut Vec<usize>, k: usize, a: &[Vec<u64>], p: u64, total: &mut u64) {
    let n = perm.len();
    if k == n {
        let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| perm[i] > perm[j]).count();
        let term = (0..n).fold(1, |acc, i| acc * a[i][perm[i]] % p);
        *total = if inversions % 2 == 0 { (*total + term) % p } else { (*total + p - term) % p };
        return;
    }
    for i in k..n {
        perm.swap(k, i);
        permute(perm, k + 1, a, p, total);
        perm.swap(k, i);
    }
}

proptest! {
    #[test]
    fn rank_nullity_and_kernel(rows in 1usize..6, cols in 1usize..6, data in prop::collection::vec(-3i64..4, 1..36)) {
        let m = rational_matrix(rows, cols, &data);
        let k = kernel(&m);
        prop_assert_eq!(rank(&m) + k.dim(), cols);
        for v in k.basis_vectors() {
            prop_assert!(m.mul_vec(v).iter().all(|x| Rationals.is_zero(x)));
        }
        let r = rref(&m);
        prop_assert_eq!(rref(&r.matrix).matrix, r.matrix.clone());
        prop_assert_eq!(r.rank, r.pivots.len());
    }

    #[test]
    fn inverse_round_trip(n in 1usize..6, data in prop::collection::vec(-5i64..6, 1..36)) {
        let m = rational_matrix(n, n, &data);
        match inverse(&m) {
            Ok(mi) => {
                prop_assert!(m.mul(&mi).is_identity());
                prop_assert!(mi.mul(&m).is_identity());
            }
            Err(_) => prop_assert!(Rationals.is_zero(&m.determinant())),
        }
    }

    #[test]
    fn determinant_is_multiplicative(n in 1usize..5, a in prop::collection::vec(-4i64..5, 16), b in prop::collection::vec(-4i64..5, 16)) {
        let (a, b) = (rational_matrix(n, n, &a), rational_matrix(n, n, &b));
        prop_assert_eq!(a.mul(&b).determinant(), Rationals.mul(&a.determinant(), &b.determinant()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn char_poly_matches_leibniz(n in 1usize..=4, data in prop::collection::vec(0u64..7, 16)) {
        let f = FiniteField::new(7, 1).unwrap();
        let raw: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| data[i * 4 + j]).collect()).collect();
        let m = Matrix::from_fn(&f, n, n, |i, j| raw[i][j] as u32);
        let p = char_poly(&m);
        prop_assert_eq!(p.degree(), Some(n));
        // 7 points determine a polynomial of degree < 7
        for x in 0..7u64 {
            prop_assert_eq!(p.eval(&(x as u32)) as u64, leibniz_char_value(&raw, x, 7));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jordan_data_survives_conjugation(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = common::f13();
        let eigen = [1u32, 12, 5, 8, 3];
        let mut blocks = Vec::new();
        let mut n = 0;
        while n < 2 || (n < 8 && rng.gen_bool(0.6)) {
            let size = rng.gen_range(1..=3).min(8 - n);
            blocks.push((eigen[rng.gen_range(0..eigen.len())], size, 1));
            n += size;
        }
        let mut j = Matrix::zeros(&f, n, n);
        let mut at = 0;
        for &(z, size, _) in &blocks {
            for i in 0..size {
                j.set(at + i, at + i, z);
                if i + 1 < size {
                    j.set(at + i, at + i + 1, 1);
                }
            }
            at += size;
        }
        let p = common::random_invertible(&f, n, &mut rng);
        let m = p.mul(&j).mul(&inverse(&p).unwrap());
        let computed = jordan_data(&m, &[12]).unwrap();
        prop_assert_eq!(computed, JordanData::from_blocks(&f, blocks));
    }

    #[test]
    fn conjugacy_finds_a_witness(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=3);
        let r = rng.gen_range(3..=4);
        let t = common::random_irreducible(n, r, &mut rng);
        let f = t.field().clone();
        let p = common::random_invertible(&f, n, &mut rng);
        let pi = inverse(&p).unwrap();
        let b: Vec<_> = t.entries().iter().map(|a| p.mul(a).mul(&pi)).collect();
        let x = simultaneous_conjugacy(t.entries(), &b).expect("conjugate by construction");
        let xi = inverse(&x).unwrap();
        for (a, b) in t.entries().iter().zip(&b) {
            prop_assert_eq!(&x.mul(a).mul(&xi), b);
        }
    }
}

#[test]
fn conjugacy_rejects_different_spectra() {
    let f = common::f13();
    let a = vec![Matrix::diagonal(&f, &[1, 12])];
    let b = vec![Matrix::diagonal(&f, &[1, 1])];
    assert!(simultaneous_conjugacy(&a, &b).is_none());
}
