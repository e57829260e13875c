//! Truncated polynomials in `Θ`, `H` and `c2` on a threefold whose cubic form
//! and `c2` pairings are unknown.
//!
//! `Θ` and `H` have weight 1 and `c2` weight 2. Everything above weight 3
//! vanishes, and integrating a weight-3 monomial yields one of the unknowns,
//! so integrals are affine forms in the unknowns.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::arith::Q;

/// `(i, j, k)` stands for `Θ^i H^j c2^k`.
pub type Monomial = (u32, u32, u32);

/// Names of the weight-3 monomials, which are exactly the integrals that
/// can be nonzero.
pub const TOP_MONOMIALS: [(&str, Monomial); 6] = [
    ("Theta^3", (3, 0, 0)),
    ("Theta^2*H", (2, 1, 0)),
    ("Theta*H^2", (1, 2, 0)),
    ("H^3", (0, 3, 0)),
    ("c2*Theta", (1, 0, 1)),
    ("c2*H", (0, 1, 1)),
];

fn weight(m: Monomial) -> u32 {
    m.0 + m.1 + 2 * m.2
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct MPoly {
    terms: BTreeMap<Monomial, Q>,
}

impl MPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Q) -> Self {
        Self::monomial((0, 0, 0), c)
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn monomial(m: Monomial, c: Q) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    /// `a Θ + b H`.
    pub fn divisor(theta: Q, h: Q) -> Self {
        let mut p = Self::zero();
        p.add_term((1, 0, 0), theta);
        p.add_term((0, 1, 0), h);
        p
    }

    fn add_term(&mut self, m: Monomial, c: Q) {
        if weight(m) > 3 || c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn coefficient(&self, m: Monomial) -> Q {
        self.terms.get(&m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Q) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, c * s);
        }
        out
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                out.add_term((a.0 + b.0, a.1 + b.1, a.2 + b.2), x * y);
            }
        }
        out
    }

    /// `exp` of a polynomial without constant term.
    pub fn exp(&self) -> MPoly {
        debug_assert!(self.coefficient((0, 0, 0)).is_zero());
        let mut out = MPoly::one();
        let mut term = MPoly::one();
        for k in 1..=3i64 {
            term = term.mul(self).scale(&Q::new(1.into(), k.into()));
            out = out.add(&term);
        }
        out
    }

    /// Coefficients of the weight-3 monomials, in [`TOP_MONOMIALS`] order.
    pub fn integral_form(&self) -> Vec<Q> {
        TOP_MONOMIALS.iter().map(|(_, m)| self.coefficient(*m)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, q_frac};

    #[test]
    fn truncation_and_exp() {
        let d = MPoly::divisor(q(1), q(2));
        let e = d.exp();
        assert_eq!(e.coefficient((3, 0, 0)), q_frac(1, 6));
        assert_eq!(e.coefficient((1, 2, 0)), q(2));
        let c2 = MPoly::monomial((0, 0, 1), q(1));
        assert_eq!(c2.mul(&c2), MPoly::zero());
        assert_eq!(c2.mul(&d).integral_form(), vec![q(0), q(0), q(0), q(0), q(1), q(2)]);
        assert_eq!(d.scale(&q(-1)).exp().mul(&e), MPoly::one());
    }
}
