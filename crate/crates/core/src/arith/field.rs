//! Coefficient fields for exact elimination.
//!
//! A [`Field`] value is a context (a prime, a defining polynomial) and the
//! elements are plain data. Number fields `Q[x]/(p)` are built from a
//! polynomial that is not known to be irreducible; inverting a zero divisor
//! surfaces the splitting factor instead of failing silently.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::poly::Poly;
use super::Q;

/// A nonzero element turned out not to be invertible. For `Q[x]/(p)` the
/// payload is a proper monic factor of `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroDivisor(pub Poly);

pub trait Field {
    type Elem: Clone + Debug + PartialEq;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, ZeroDivisor>;
    /// Image of a rational; `None` when the denominator is not invertible.
    fn from_q(&self, x: &Q) -> Option<Self::Elem>;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = Q;

    fn zero(&self) -> Q {
        Q::zero()
    }
    fn one(&self) -> Q {
        Q::one()
    }
    fn is_zero(&self, a: &Q) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Q, b: &Q) -> Q {
        a + b
    }
    fn sub(&self, a: &Q, b: &Q) -> Q {
        a - b
    }
    fn mul(&self, a: &Q, b: &Q) -> Q {
        a * b
    }
    fn neg(&self, a: &Q) -> Q {
        -a
    }
    fn inv(&self, a: &Q) -> Result<Q, ZeroDivisor> {
        Ok(a.recip())
    }
    fn from_q(&self, x: &Q) -> Option<Q> {
        Some(x.clone())
    }
}

/// `Z/pZ` for a prime `p < 2^32`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// `None` unless `p` is a prime below `2^32`.
    pub fn new(p: u64) -> Option<Self> {
        if !(2..1 << 32).contains(&p) {
            return None;
        }
        let mut i = 2u64;
        while i * i <= p {
            if p.is_multiple_of(i) {
                return None;
            }
            i += 1;
        }
        Some(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn reduce(&self, n: &BigInt) -> u64 {
        let m = n.mod_floor(&BigInt::from(self.p));
        m.to_u64().unwrap()
    }

    fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % self.p;
            }
            b = b * b % self.p;
            e >>= 1;
        }
        acc
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn inv(&self, a: &u64) -> Result<u64, ZeroDivisor> {
        Ok(self.pow(*a, self.p - 2))
    }
    fn from_q(&self, x: &Q) -> Option<u64> {
        let den = self.reduce(x.denom());
        if den == 0 {
            return None;
        }
        let num = self.reduce(x.numer());
        Some(num * self.pow(den, self.p - 2) % self.p)
    }
}

/// `Q[x]/(modulus)`; a field exactly when the modulus is irreducible.
#[derive(Clone, Debug, PartialEq)]
pub struct NumberField {
    modulus: Poly,
}

impl NumberField {
    /// The modulus is made monic; it must have positive degree.
    pub fn new(modulus: &Poly) -> Self {
        assert!(
            modulus.degree().is_some_and(|d| d > 0),
            "number field modulus must be nonconstant"
        );
        NumberField {
            modulus: modulus.monic(),
        }
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    /// The class of `x`, a root of the modulus.
    pub fn generator(&self) -> Poly {
        Poly::x().rem(&self.modulus)
    }
}

impl Field for NumberField {
    type Elem = Poly;

    fn zero(&self) -> Poly {
        Poly::zero()
    }
    fn one(&self) -> Poly {
        Poly::one().rem(&self.modulus)
    }
    fn is_zero(&self, a: &Poly) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        a + b
    }
    fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        a - b
    }
    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        (a * b).rem(&self.modulus)
    }
    fn neg(&self, a: &Poly) -> Poly {
        -a
    }
    fn inv(&self, a: &Poly) -> Result<Poly, ZeroDivisor> {
        let (g, s, _) = Poly::ext_gcd(a, &self.modulus);
        if g.is_constant() {
            Ok(s.rem(&self.modulus))
        } else {
            Err(ZeroDivisor(g))
        }
    }
    fn from_q(&self, x: &Q) -> Option<Poly> {
        Some(Poly::constant(x.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, q_frac};

    #[test]
    fn prime_field_inverse() {
        let f = PrimeField::new(101).unwrap();
        let a = f.from_q(&q_frac(3, 7)).unwrap();
        let seven = f.from_q(&q(7)).unwrap();
        assert_eq!(f.mul(&a, &seven), 3);
        assert!(f.from_q(&q_frac(1, 101)).is_none());
        assert!(PrimeField::new(91).is_none());
    }

    #[test]
    fn number_field_sqrt2() {
        let k = NumberField::new(&Poly::new(vec![q(-2), q(0), q(1)]));
        let x = k.generator();
        assert_eq!(k.mul(&x, &x), Poly::constant(q(2)));
        let inv = k.inv(&x).unwrap();
        assert_eq!(k.mul(&inv, &x), k.one());
    }

    #[test]
    fn number_field_reports_splitting() {
        // (x-1)(x-2): x-1 is a zero divisor
        let m = &Poly::linear(q(-1), q(1)) * &Poly::linear(q(-2), q(1));
        let k = NumberField::new(&m);
        let e = Poly::linear(q(-1), q(1));
        assert_eq!(k.inv(&e), Err(ZeroDivisor(Poly::linear(q(-1), q(1)))));
    }
}
