use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::numtheory::{gcd, is_prime, order_mod};
use super::{CycElem, CyclotomicField, Field, FiniteField};
use crate::error::{Error, Result};

/// Reduction `Z[1/d][zeta_N] -> F_{l^f}` (d prime to l) sending `zeta_N` to a
/// fixed element of exact multiplicative order `N`.
#[derive(Debug, Clone)]
pub struct ResidueMap {
    source: CyclotomicField,
    target: FiniteField,
    image_of_root: u32,
    ell: u64,
    basis_images: Vec<u32>,
}

impl ResidueMap {
    pub(crate) fn new(source: &CyclotomicField, ell: u64, k: Option<u32>) -> Result<Self> {
        if ell == 2 || !is_prime(ell) {
            return Err(Error::InvalidCharacteristic(ell));
        }
        let n = source.order();
        if n % ell == 0 {
            return Err(Error::RamifiedPrime { ell, order: n });
        }
        let minimal = order_mod(ell, n) as u32;
        let degree = match k {
            Some(k) if k == 0 || k % minimal != 0 => {
                return Err(Error::ResidueFieldTooSmall {
                    requested: k,
                    minimal,
                })
            }
            Some(k) => k,
            None => minimal,
        };
        let target = FiniteField::new(ell, degree)?;
        let step = (target.size() - 1) / n;
        let modulus = source.modulus();
        let image_of_root = (1..=n)
            .filter(|&j| gcd(j, n) == 1)
            .map(|j| target.exp(step * j))
            .find(|&z| {
                // Phi_N(z) = 0 by Horner
                let mut acc = target.zero();
                for &c in modulus.iter().rev() {
                    acc = target.add(&target.mul(&acc, &z), &target.from_i64(c));
                }
                target.is_zero(&acc)
            })
            .expect("an element of order N is a root of Phi_N when l does not divide N");
        assert_eq!(target.element_order(image_of_root), Some(n));
        let basis_images = (0..source.phi() as u64)
            .map(|j| target.pow(&image_of_root, j))
            .collect();
        Ok(ResidueMap {
            source: source.clone(),
            target,
            image_of_root,
            ell,
            basis_images,
        })
    }

    pub fn source(&self) -> &CyclotomicField {
        &self.source
    }

    pub fn target(&self) -> &FiniteField {
        &self.target
    }

    pub fn image_of_root(&self) -> u32 {
        self.image_of_root
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn apply(&self, x: &CycElem) -> Result<u32> {
        let l = BigInt::from(self.ell);
        let small = |v: &BigInt| v.mod_floor(&l).to_u64().expect("residue fits");
        let den = small(x.denominator());
        let t = &self.target;
        let den_inv = t
            .inv(&t.from_u64(den))
            .ok_or(Error::NotIntegralAtPrime { ell: self.ell })?;
        let mut acc = t.zero();
        for (c, img) in x.numerators().iter().zip(&self.basis_images) {
            let c = small(c);
            if c != 0 {
                acc = t.add(&acc, &t.mul(&t.from_u64(c), img));
            }
        }
        Ok(t.mul(&acc, &den_inv))
    }
}
