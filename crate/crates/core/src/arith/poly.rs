//! Dense univariate polynomials over the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::Q;

/// Coefficients in increasing degree; never has trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Q>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Q) -> Self {
        Poly::new(vec![c])
    }

    pub fn one() -> Self {
        Poly::constant(Q::one())
    }

    /// The indeterminate `x`.
    pub fn x() -> Self {
        Poly::new(vec![Q::zero(), Q::one()])
    }

    /// `a + b x`
    pub fn linear(a: Q, b: Q) -> Self {
        Poly::new(vec![a, b])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.coeffs.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn leading(&self) -> Option<&Q> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &Q) -> Poly {
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some(l) => self.scale(&(Q::one() / l)),
            None => Poly::zero(),
        }
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.coeffs
            .iter()
            .rev()
            .fold(Q::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Q::from_integer((i as i64).into()))
                .collect(),
        )
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = Q::one() / d.leading().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![Q::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if !c.is_zero() {
                for (i, dc) in d.coeffs.iter().enumerate() {
                    rem[k + i] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s a + t b = g`, `g` monic.
    pub fn ext_gcd(a: &Poly, b: &Poly) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (quo, rem) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, rem);
            let s2 = &s0 - &(&quo * &s1);
            s0 = std::mem::replace(&mut s1, s2);
            let t2 = &t0 - &(&quo * &t1);
            t0 = std::mem::replace(&mut t1, t2);
        }
        match r0.leading().cloned() {
            Some(l) => {
                let inv = Q::one() / l;
                (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
            }
            None => (r0, s0, t0),
        }
    }

    /// Square-free part, made monic.
    pub fn squarefree(&self) -> Poly {
        if self.is_constant() {
            return self.monic();
        }
        let g = Poly::gcd(self, &self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Removes every factor of `x`, returning the multiplicity stripped.
    pub fn strip_x(&self) -> (Poly, usize) {
        let k = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if self.is_zero() {
            return (Poly::zero(), 0);
        }
        (Poly::new(self.coeffs[k..].to_vec()), k)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*x")?,
                _ => write!(f, "({c})*x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;

    fn p(cs: &[i64]) -> Poly {
        Poly::new(cs.iter().map(|&c| q(c)).collect())
    }

    #[test]
    fn division_identity() {
        let a = p(&[1, 0, -3, 2, 5]);
        let d = p(&[2, 1, 1]);
        let (quo, rem) = a.div_rem(&d);
        assert_eq!(&(&quo * &d) + &rem, a);
        assert!(rem.degree().unwrap() < 2);
    }

    #[test]
    fn gcd_of_products() {
        // (x-1)(x+2) and (x-1)(x-3)
        let a = &p(&[-1, 1]) * &p(&[2, 1]);
        let b = &p(&[-1, 1]) * &p(&[-3, 1]);
        assert_eq!(Poly::gcd(&a, &b), p(&[-1, 1]));
        let (g, s, t) = Poly::ext_gcd(&a, &b);
        assert_eq!(&(&s * &a) + &(&t * &b), g);
    }

    #[test]
    fn squarefree_and_strip() {
        let a = &(&p(&[-1, 1]) * &p(&[-1, 1])) * &p(&[0, 0, 1]);
        let (b, k) = a.strip_x();
        assert_eq!(k, 2);
        assert_eq!(b.squarefree(), p(&[-1, 1]));
    }
}

#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::*;
    use crate::arith::q;

    fn poly() -> impl Strategy<Value = Poly> {
        proptest::collection::vec(-6i64..=6, 0..5).prop_map(|c| Poly::new(c.into_iter().map(q).collect()))
    }

    proptest! {
        #[test]
        fn gcd_divides_both(a in poly(), b in poly()) {
            let g = Poly::gcd(&a, &b);
            if !g.is_zero() {
                prop_assert!(a.rem(&g).is_zero());
                prop_assert!(b.rem(&g).is_zero());
            }
            let (g2, s, t) = Poly::ext_gcd(&a, &b);
            prop_assert_eq!(&(&(&s * &a) + &(&t * &b)), &g2);
        }

        #[test]
        fn division_identity(a in poly(), b in poly()) {
            prop_assume!(!b.is_zero());
            let (quot, r) = a.div_rem(&b);
            prop_assert_eq!(&(&(&quot * &b) + &r), &a);
            prop_assert!(r.is_zero() || r.degree() < b.degree());
        }
    }
}
