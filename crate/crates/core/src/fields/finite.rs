use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::Value;

use super::numtheory::{is_prime, prime_factors};
use super::{Field, FieldDescriptor};
use crate::error::{Error, Result};

/// Largest supported `q = l^k`; arithmetic is table driven.
pub const MAX_FINITE_FIELD_ORDER: u64 = 1 << 22;

// Polynomials over F_l, lowest degree first, no trailing-zero guarantee.

fn trim(p: &mut Vec<u64>) {
    while p.len() > 1 && *p.last().unwrap() == 0 {
        p.pop();
    }
}

fn poly_rem(a: &[u64], f: &[u64], l: u64) -> Vec<u64> {
    let mut f = f.to_vec();
    trim(&mut f);
    let df = f.len() - 1;
    if df == 0 {
        return vec![0];
    }
    let lead_inv = inv_mod(f[df], l);
    let mut r = a.to_vec();
    trim(&mut r);
    while r.len() > df {
        let dr = r.len() - 1;
        let c = r[dr] * lead_inv % l;
        for (j, &fc) in f.iter().enumerate() {
            let idx = dr - df + j;
            r[idx] = (r[idx] + l - c * fc % l) % l;
        }
        r.pop();
        trim(&mut r);
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], f: &[u64], l: u64) -> Vec<u64> {
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % l;
        }
    }
    poly_rem(&prod, f, l)
}

fn poly_powmod(a: &[u64], mut e: u64, f: &[u64], l: u64) -> Vec<u64> {
    let mut base = poly_rem(a, f, l);
    let mut acc = vec![1u64];
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &base, f, l);
        }
        e >>= 1;
        if e > 0 {
            base = poly_mulmod(&base, &base, f, l);
        }
    }
    acc
}

fn poly_gcd(a: &[u64], b: &[u64], l: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !(b.len() == 1 && b[0] == 0) {
        let r = poly_rem(&a, &b, l);
        a = b;
        b = r;
    }
    a
}

fn inv_mod(a: u64, l: u64) -> u64 {
    let (g, x, _) = {
        let e = (a as i64).extended_gcd(&(l as i64));
        (e.gcd, e.x, e.y)
    };
    debug_assert_eq!(g, 1);
    x.rem_euclid(l as i64) as u64
}

/// Ben-Or irreducibility test for the monic polynomial `x^k + sum c_i x^i`.
fn is_irreducible(low: &[u64], l: u64) -> bool {
    let k = low.len();
    let mut f = low.to_vec();
    f.push(1);
    if k == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    let mut h = x.clone();
    for _ in 1..=k / 2 {
        h = poly_powmod(&h, l, &f, l);
        let mut diff = h.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + l - 1) % l;
        let g = poly_gcd(&f, &diff, l);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

#[derive(Debug)]
struct FfInner {
    ell: u64,
    k: u32,
    q: u64,
    modulus: Vec<u64>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// The finite field `F_{l^k}` for an odd prime `l`.
///
/// Elements are the codes `sum c_i l^i` of their power-basis coefficient
/// vectors. Multiplication goes through discrete-log tables built from the
/// primitive element of smallest code.
#[derive(Debug, Clone)]
pub struct FiniteField(Arc<FfInner>);

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.0.ell == other.0.ell && self.0.k == other.0.k && self.0.modulus == other.0.modulus
    }
}

fn digits(mut code: u64, l: u64, k: u32) -> Vec<u64> {
    (0..k)
        .map(|_| {
            let d = code % l;
            code /= l;
            d
        })
        .collect()
}

fn check_parameters(ell: u64, k: u32) -> Result<u64> {
    if ell == 2 || !is_prime(ell) {
        return Err(Error::InvalidCharacteristic(ell));
    }
    if k == 0 {
        return Err(Error::ReducibleModulus { ell, k });
    }
    let mut q: u64 = 1;
    for _ in 0..k {
        q = q
            .checked_mul(ell)
            .filter(|&q| q <= MAX_FINITE_FIELD_ORDER)
            .ok_or(Error::FieldTooLarge { ell, k })?;
    }
    Ok(q)
}

impl FiniteField {
    /// `F_{l^k}` with the monic irreducible modulus of smallest code.
    pub fn new(ell: u64, k: u32) -> Result<Self> {
        let q = check_parameters(ell, k)?;
        if k == 1 {
            return Ok(Self::build(ell, 1, q, vec![0]));
        }
        let modulus = (0..q)
            .map(|code| digits(code, ell, k))
            .find(|c| c[0] != 0 && is_irreducible(c, ell))
            .expect("an irreducible polynomial of every degree exists");
        Ok(Self::build(ell, k, q, modulus))
    }

    /// `F_{l^k}` with an explicit modulus `x^k + sum modulus[i] x^i`.
    pub fn with_modulus(ell: u64, k: u32, modulus: &[u64]) -> Result<Self> {
        let q = check_parameters(ell, k)?;
        if modulus.len() != k as usize || modulus.iter().any(|&c| c >= ell) {
            return Err(Error::ReducibleModulus { ell, k });
        }
        if k > 1 && (modulus[0] == 0 || !is_irreducible(modulus, ell)) {
            return Err(Error::ReducibleModulus { ell, k });
        }
        let modulus = if k == 1 { vec![0] } else { modulus.to_vec() };
        Ok(Self::build(ell, k, q, modulus))
    }

    fn build(ell: u64, k: u32, q: u64, modulus: Vec<u64>) -> Self {
        let mut f = modulus.clone();
        f.push(1);
        let n = q - 1;
        let factors = prime_factors(n);
        let mulmod = |a: &[u64], b: &[u64]| -> Vec<u64> {
            if k == 1 {
                vec![a[0] * b[0] % ell]
            } else {
                poly_mulmod(a, b, &f, ell)
            }
        };
        let powmod = |a: &[u64], e: u64| -> Vec<u64> {
            if k == 1 {
                vec![super::numtheory::modpow(a[0], e, ell)]
            } else {
                poly_powmod(a, e, &f, ell)
            }
        };
        let is_one = |p: &[u64]| p[0] == 1 && p[1..].iter().all(|&c| c == 0);
        let code_of = |p: &[u64]| -> u64 { p.iter().rev().fold(0, |acc, &c| acc * ell + c) };
        let generator = (1..q)
            .map(|code| digits(code, ell, k))
            .find(|g| factors.iter().all(|&p| !is_one(&powmod(g, n / p))))
            .expect("multiplicative group is cyclic");
        let mut exp = Vec::with_capacity(n as usize);
        let mut log = vec![0u32; q as usize];
        let mut cur = vec![1u64];
        for i in 0..n {
            let code = code_of(&cur);
            exp.push(code as u32);
            log[code as usize] = i as u32;
            cur = mulmod(&cur, &generator);
        }
        FiniteField(Arc::new(FfInner {
            ell,
            k,
            q,
            modulus,
            exp,
            log,
        }))
    }

    pub fn ell(&self) -> u64 {
        self.0.ell
    }

    pub fn k(&self) -> u32 {
        self.0.k
    }

    /// Field size `q = l^k`.
    pub fn size(&self) -> u64 {
        self.0.q
    }

    /// Low coefficients of the monic modulus.
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    /// The fixed primitive element.
    pub fn primitive_element(&self) -> u32 {
        self.0.exp[1 % self.0.exp.len()]
    }

    /// Discrete logarithm to the base of the primitive element.
    pub fn log(&self, a: u32) -> Option<u64> {
        (a != 0).then(|| self.0.log[a as usize] as u64)
    }

    pub fn exp(&self, i: u64) -> u32 {
        self.0.exp[(i % (self.0.q - 1)) as usize]
    }

    pub fn digits(&self, a: u32) -> Vec<u64> {
        digits(a as u64, self.0.ell, self.0.k)
    }

    pub fn from_digits(&self, c: &[u64]) -> u32 {
        assert_eq!(c.len(), self.0.k as usize);
        c.iter()
            .rev()
            .fold(0u64, |acc, &d| acc * self.0.ell + d % self.0.ell) as u32
    }

    /// Element of the prime field.
    pub fn from_u64(&self, n: u64) -> u32 {
        (n % self.0.ell) as u32
    }

    /// Exact multiplicative order of a nonzero element.
    pub fn element_order(&self, a: u32) -> Option<u64> {
        let n = self.0.q - 1;
        let lg = self.log(a)?;
        Some(n / super::numtheory::gcd(lg, n))
    }

    /// Embedding of `self` into a larger field of the same characteristic,
    /// sending the power-basis generator to the smallest-code root of the
    /// modulus of `self`.
    pub fn embed_into(&self, target: &FiniteField) -> Result<FieldEmbedding> {
        if self.ell() != target.ell() || target.k() % self.k() != 0 {
            return Err(Error::FieldMismatch(format!(
                "{} does not embed in {}",
                self.descriptor(),
                target.descriptor()
            )));
        }
        let alpha = if self.k() == 1 {
            target.one()
        } else {
            (0..target.size() as u32)
                .find(|&a| {
                    // Horner evaluation of the monic modulus at a
                    let mut acc = target.one();
                    for &c in self.modulus().iter().rev() {
                        acc = target.add(&target.mul(&acc, &a), &target.from_u64(c));
                    }
                    target.is_zero(&acc)
                })
                .expect("modulus splits in the extension")
        };
        let mut images = Vec::with_capacity(self.size() as usize);
        for code in 0..self.size() as u32 {
            let c = self.digits(code);
            let mut acc = target.zero();
            for &d in c.iter().rev() {
                acc = target.add(&target.mul(&acc, &alpha), &target.from_u64(d));
            }
            images.push(acc);
        }
        let mut preimages = vec![u32::MAX; target.size() as usize];
        for (code, &img) in images.iter().enumerate() {
            preimages[img as usize] = code as u32;
        }
        Ok(FieldEmbedding {
            source: self.clone(),
            target: target.clone(),
            images,
            preimages,
        })
    }
}

/// A field embedding `F_q -> F_{q^e}` with its partial inverse.
#[derive(Debug, Clone)]
pub struct FieldEmbedding {
    source: FiniteField,
    target: FiniteField,
    images: Vec<u32>,
    preimages: Vec<u32>,
}

impl FieldEmbedding {
    pub fn source(&self) -> &FiniteField {
        &self.source
    }

    pub fn target(&self) -> &FiniteField {
        &self.target
    }

    pub fn apply(&self, a: u32) -> u32 {
        self.images[a as usize]
    }

    /// Preimage of an element of the image subfield.
    pub fn preimage(&self, b: u32) -> Option<u32> {
        let p = self.preimages[b as usize];
        (p != u32::MAX).then_some(p)
    }
}

impl Field for FiniteField {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn from_i64(&self, n: i64) -> u32 {
        n.rem_euclid(self.0.ell as i64) as u32
    }
    fn from_rational(&self, q: &BigRational) -> Result<u32> {
        let l = BigInt::from(self.0.ell);
        let num = q.numer().mod_floor(&l).to_u64().unwrap_or(0);
        let den = q.denom().mod_floor(&l).to_u64().unwrap_or(0);
        if den == 0 {
            return Err(Error::NotIntegralAtPrime { ell: self.0.ell });
        }
        Ok((num * inv_mod(den, self.0.ell) % self.0.ell) as u32)
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let l = self.0.ell as u32;
        if self.0.k == 1 {
            let s = a + b;
            return if s >= l { s - l } else { s };
        }
        let (mut a, mut b) = (*a, *b);
        let (mut out, mut place) = (0u32, 1u32);
        for _ in 0..self.0.k {
            let s = a % l + b % l;
            out += if s >= l { s - l } else { s } * place;
            a /= l;
            b /= l;
            place *= l;
        }
        out
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        self.add(a, &self.neg(b))
    }
    fn neg(&self, a: &u32) -> u32 {
        let l = self.0.ell as u32;
        if self.0.k == 1 {
            return if *a == 0 { 0 } else { l - a };
        }
        let mut a = *a;
        let (mut out, mut place) = (0u32, 1u32);
        for _ in 0..self.0.k {
            let d = a % l;
            out += if d == 0 { 0 } else { l - d } * place;
            a /= l;
            place *= l;
        }
        out
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        if *a == 0 || *b == 0 {
            return 0;
        }
        if self.0.k == 1 {
            return ((*a as u64 * *b as u64) % self.0.ell) as u32;
        }
        let n = self.0.q - 1;
        let s = self.0.log[*a as usize] as u64 + self.0.log[*b as usize] as u64;
        self.0.exp[(s % n) as usize]
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            return None;
        }
        let n = self.0.q - 1;
        let lg = self.0.log[*a as usize] as u64;
        Some(self.0.exp[((n - lg) % n) as usize])
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn pow(&self, a: &u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if *a == 0 {
            return 0;
        }
        let n = self.0.q - 1;
        let lg = self.0.log[*a as usize] as u128;
        self.0.exp[((lg * e as u128) % n as u128) as usize]
    }
    fn characteristic(&self) -> u64 {
        self.0.ell
    }
    fn degree(&self) -> usize {
        self.0.k as usize
    }
    fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor::Finite {
            l: self.0.ell,
            k: self.0.k,
            modulus: self.0.modulus.clone(),
        }
    }
    fn encode(&self, a: &u32) -> Value {
        Value::Array(self.digits(*a).into_iter().map(Value::from).collect())
    }
    fn decode(&self, v: &Value) -> std::result::Result<u32, String> {
        let items = v
            .as_array()
            .ok_or_else(|| "expected an array of integers".to_string())?;
        if items.len() != self.0.k as usize {
            return Err(format!(
                "expected {} coefficients, found {}",
                self.0.k,
                items.len()
            ));
        }
        let mut c = Vec::with_capacity(items.len());
        for it in items {
            let d = it
                .as_u64()
                .filter(|&d| d < self.0.ell)
                .ok_or_else(|| format!("coefficient must be an integer in [0, {})", self.0.ell))?;
            c.push(d);
        }
        Ok(self.from_digits(&c))
    }
    fn root_of_unity(&self, order: u64, exponent: i64) -> Result<u32> {
        let n = self.0.q - 1;
        if order == 0 || n % order != 0 {
            return Err(Error::OrderUnavailable {
                order,
                field: self.descriptor().to_string(),
            });
        }
        let e = ((n / order) as i128 * exponent as i128).rem_euclid(n as i128) as u64;
        Ok(self.exp(e))
    }
    fn sort_key(&self, a: &u32) -> String {
        format!("{a:010}")
    }
}
