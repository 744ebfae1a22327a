use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::Value;

use super::numtheory::{divisors, euler_phi, units_mod};
use super::rational::{format_rational, parse_rational};
use super::{Field, FieldDescriptor};
use crate::error::{Error, Result};

/// Element of `Q(zeta_N)` in the power basis `1, zeta, ..., zeta^(phi-1)`,
/// stored as integer numerators over one positive common denominator.
/// Always normalized: `gcd(den, num...) = 1`, and zero is `(0, ..., 0) / 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycElem {
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycElem {
    fn normalized(mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        if num.iter().all(Zero::is_zero) {
            return CycElem {
                num,
                den: BigInt::one(),
            };
        }
        if den.is_negative() {
            den = -den;
            for c in num.iter_mut() {
                *c = -&*c;
            }
        }
        if !den.is_one() {
            let mut g = den.clone();
            for c in &num {
                if g.is_one() {
                    break;
                }
                if !c.is_zero() {
                    g = g.gcd(c);
                }
            }
            if !g.is_one() {
                for c in num.iter_mut() {
                    *c = &*c / &g;
                }
                den = den / g;
            }
        }
        CycElem { num, den }
    }

    /// Rational coefficients in the power basis.
    pub fn coefficients(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|n| BigRational::new(n.clone(), self.den.clone()))
            .collect()
    }

    /// Integer numerators over [`CycElem::denominator`].
    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }
}

#[derive(Debug)]
struct CycInner {
    order: u64,
    phi: usize,
    modulus: Vec<i64>,
    /// `powers[j] = x^j mod Phi_N` for `j < max(N, 2 phi - 1)`.
    powers: Vec<Vec<i64>>,
    /// Units of `Z/NZ` other than 1, indexing the non-trivial automorphisms.
    conjugators: Vec<u64>,
}

/// The cyclotomic field `Q(zeta_N)`.
#[derive(Debug, Clone)]
pub struct CyclotomicField(Arc<CycInner>);

impl PartialEq for CyclotomicField {
    fn eq(&self, other: &Self) -> bool {
        self.0.order == other.0.order
    }
}

/// Exact division of integer polynomials (low degree first) by a monic divisor.
fn div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let qlen = rem.len() - dn;
    let mut q = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dn];
        q[i] = c;
        if c != 0 {
            for (j, d) in den.iter().enumerate() {
                rem[i + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    q
}

/// The N-th cyclotomic polynomial, by dividing `x^N - 1` by `Phi_d` for
/// every proper divisor `d`.
pub(crate) fn cyclotomic_polynomial(n: u64) -> Vec<i64> {
    let mut cache: Vec<(u64, Vec<i64>)> = Vec::new();
    for d in divisors(n) {
        let mut p = vec![0i64; d as usize + 1];
        p[0] = -1;
        p[d as usize] = 1;
        for (e, phi_e) in &cache {
            if d % e == 0 {
                p = div_exact(&p, phi_e);
            }
        }
        cache.push((d, p));
    }
    cache.pop().map(|(_, p)| p).unwrap_or_else(|| vec![-1, 1])
}

impl CyclotomicField {
    pub fn new(order: u64) -> Self {
        assert!(order >= 1, "cyclotomic order must be positive");
        let modulus = cyclotomic_polynomial(order);
        let phi = modulus.len() - 1;
        debug_assert_eq!(phi as u64, euler_phi(order));
        let count = (order as usize).max(2 * phi);
        let mut powers = Vec::with_capacity(count);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..count {
            powers.push(cur.clone());
            // multiply by x and reduce
            let top = cur[phi - 1];
            let mut next = vec![0i64; phi];
            next[1..phi].copy_from_slice(&cur[..(phi - 1)]);
            if top != 0 {
                for i in 0..phi {
                    next[i] -= top * modulus[i];
                }
            }
            cur = next;
        }
        let conjugators = units_mod(order).into_iter().filter(|&u| u != 1).collect();
        CyclotomicField(Arc::new(CycInner {
            order,
            phi,
            modulus,
            powers,
            conjugators,
        }))
    }

    pub fn order(&self) -> u64 {
        self.0.order
    }

    /// `Phi_N`, integer coefficients, lowest degree first, monic.
    pub fn modulus(&self) -> &[i64] {
        &self.0.modulus
    }

    pub fn phi(&self) -> usize {
        self.0.phi
    }

    /// The power-basis generator `zeta_N`.
    pub fn generator(&self) -> CycElem {
        self.power_of_generator(1)
    }

    fn power_of_generator(&self, j: u64) -> CycElem {
        let j = (j % self.0.order) as usize;
        CycElem {
            num: self.0.powers[j].iter().map(|&c| BigInt::from(c)).collect(),
            den: BigInt::one(),
        }
    }

    pub fn element(&self, coeffs: &[BigRational]) -> CycElem {
        assert_eq!(coeffs.len(), self.0.phi, "coefficient vector length");
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        CycElem::normalized(num, den)
    }

    fn constant(&self, q: &BigRational) -> CycElem {
        let mut num = vec![BigInt::zero(); self.0.phi];
        num[0] = q.numer().clone();
        CycElem::normalized(num, q.denom().clone())
    }

    /// Galois conjugate under `zeta -> zeta^k`.
    fn conjugate(&self, a: &CycElem, k: u64) -> CycElem {
        let n = self.0.order;
        let mut num = vec![BigInt::zero(); self.0.phi];
        for (j, c) in a.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let img = &self.0.powers[((j as u64 * k) % n) as usize];
            for (i, &p) in img.iter().enumerate() {
                if p != 0 {
                    num[i] += c * p;
                }
            }
        }
        CycElem {
            num,
            den: a.den.clone(),
        }
    }

    fn mul_numerators(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let phi = self.0.phi;
        let mut prod = vec![BigInt::zero(); 2 * phi - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let mut out: Vec<BigInt> = prod.drain(..phi).collect();
        for (off, c) in prod.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, &p) in self.0.powers[phi + off].iter().enumerate() {
                if p != 0 {
                    out[i] += &c * p;
                }
            }
        }
        out
    }
}

impl Field for CyclotomicField {
    type Elem = CycElem;

    fn zero(&self) -> CycElem {
        CycElem {
            num: vec![BigInt::zero(); self.0.phi],
            den: BigInt::one(),
        }
    }

    fn one(&self) -> CycElem {
        self.from_i64(1)
    }

    fn from_i64(&self, n: i64) -> CycElem {
        let mut num = vec![BigInt::zero(); self.0.phi];
        num[0] = BigInt::from(n);
        CycElem {
            num,
            den: BigInt::one(),
        }
    }

    fn from_rational(&self, q: &BigRational) -> Result<CycElem> {
        Ok(self.constant(q))
    }

    fn add(&self, a: &CycElem, b: &CycElem) -> CycElem {
        if a.den == b.den {
            let num = a.num.iter().zip(&b.num).map(|(x, y)| x + y).collect();
            if a.den.is_one() {
                return CycElem {
                    num,
                    den: a.den.clone(),
                };
            }
            return CycElem::normalized(num, a.den.clone());
        }
        let num = a
            .num
            .iter()
            .zip(&b.num)
            .map(|(x, y)| x * &b.den + y * &a.den)
            .collect();
        CycElem::normalized(num, &a.den * &b.den)
    }

    fn sub(&self, a: &CycElem, b: &CycElem) -> CycElem {
        self.add(a, &self.neg(b))
    }

    fn neg(&self, a: &CycElem) -> CycElem {
        CycElem {
            num: a.num.iter().map(|x| -x).collect(),
            den: a.den.clone(),
        }
    }

    fn mul(&self, a: &CycElem, b: &CycElem) -> CycElem {
        if self.is_zero(a) || self.is_zero(b) {
            return self.zero();
        }
        let num = self.mul_numerators(&a.num, &b.num);
        let den = &a.den * &b.den;
        if den.is_one() {
            CycElem { num, den }
        } else {
            CycElem::normalized(num, den)
        }
    }

    fn inv(&self, a: &CycElem) -> Option<CycElem> {
        if self.is_zero(a) {
            return None;
        }
        // a^{-1} = (product of the other conjugates) / norm(a)
        let mut cofactor = self.one();
        for &k in &self.0.conjugators {
            let c = self.conjugate(a, k);
            cofactor = self.mul(&cofactor, &c);
        }
        let norm = self.mul(a, &cofactor);
        debug_assert!(norm.num[1..].iter().all(Zero::is_zero));
        let norm_q = BigRational::new(norm.num[0].clone(), norm.den.clone());
        let num = cofactor.num.iter().map(|x| x * norm_q.denom()).collect();
        Some(CycElem::normalized(num, &cofactor.den * norm_q.numer()))
    }

    fn is_zero(&self, a: &CycElem) -> bool {
        a.num.iter().all(Zero::is_zero)
    }

    fn is_one(&self, a: &CycElem) -> bool {
        a.den.is_one() && a.num[0].is_one() && a.num[1..].iter().all(Zero::is_zero)
    }

    fn characteristic(&self) -> u64 {
        0
    }

    fn degree(&self) -> usize {
        self.0.phi
    }

    fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor::Cyclotomic {
            order: self.0.order,
        }
    }

    fn encode(&self, a: &CycElem) -> Value {
        Value::Array(
            a.coefficients()
                .iter()
                .map(|c| Value::String(format_rational(c)))
                .collect(),
        )
    }

    fn decode(&self, v: &Value) -> std::result::Result<CycElem, String> {
        let items = v
            .as_array()
            .ok_or_else(|| "expected an array of \"p/q\" strings".to_string())?;
        if items.len() != self.0.phi {
            return Err(format!(
                "expected {} coefficients, found {}",
                self.0.phi,
                items.len()
            ));
        }
        let coeffs = items
            .iter()
            .map(|it| match it {
                Value::String(s) => parse_rational(s),
                Value::Number(n) => parse_rational(&n.to_string()),
                _ => Err("coefficient must be a \"p/q\" string".into()),
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(self.element(&coeffs))
    }

    fn root_of_unity(&self, order: u64, exponent: i64) -> Result<CycElem> {
        let n = self.0.order;
        if order == 0 || n % order != 0 {
            return Err(Error::OrderUnavailable {
                order,
                field: self.descriptor().to_string(),
            });
        }
        let j = ((n / order) as i128 * exponent as i128).rem_euclid(n as i128) as u64;
        Ok(self.power_of_generator(j))
    }
}
