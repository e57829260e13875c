//! Expressions `P(r, d)^(∨?)[k]` and their canonical forms.
//!
//! The relations used are
//!
//! ```text
//! P(r, d) = P(r, -d)^∨[1] = P(-r, d)^∨ = P(-r, -d)[1]
//! P(r, d) = P(r', d)            for r ≡ r' (mod d), generic fibrations only
//! ```
//!
//! together with the identification of even shifts. Oriented as rewrite
//! rules they terminate in: no dual, and `r > 0` (non-generic), or `d > 0`
//! with `r ∈ (0, d]` (generic, `d ≠ 0`). When `d = 0` coprimality forces
//! `|r| = 1` and periodicity is vacuous.

use serde::{Deserialize, Serialize};

use super::class::{validate, FiberClass};
use crate::error::{Error, Result};

/// One `P`-class expression: `P(base)`, dualized if `dual`, then shifted by
/// `shift`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PClass {
    pub r: i64,
    pub d: i64,
    pub space: String,
    #[serde(default)]
    pub dual: bool,
    #[serde(default)]
    pub shift: i64,
}

impl PClass {
    pub fn new(r: i64, d: i64, space: impl Into<String>) -> Result<Self> {
        validate(r, d)?;
        Ok(PClass {
            r,
            d,
            space: space.into(),
            dual: false,
            shift: 0,
        })
    }

    pub fn of(v: &FiberClass) -> PClass {
        PClass {
            r: v.r(),
            d: v.d(),
            space: v.space().into(),
            dual: false,
            shift: v.shift(),
        }
    }

    pub fn dualized(mut self) -> Self {
        // (X[k])^∨ = X^∨[-k]
        self.dual = !self.dual;
        self.shift = -self.shift;
        self
    }

    pub fn shifted(mut self, k: i64) -> Self {
        self.shift += k;
        self
    }

    pub fn validate(&self) -> Result<()> {
        validate(self.r, self.d)
    }

    pub fn parity(&self) -> i64 {
        self.shift.rem_euclid(2)
    }
}

/// A single rewrite, as recorded in derivation logs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Relation {
    /// `P(r,d)^∨ = P(r,-d)[-1]`
    DualToNegatedDegree,
    /// `P(r,d)^∨ = P(-r,d)`
    DualToNegatedRank,
    /// `P(r,d) = P(-r,-d)[1]`
    Negate,
    /// `P(r,d) = P(r',d)`, `r ≡ r' (mod d)`
    Periodicity { from: i64, to: i64 },
}

/// Canonical representative with the derivation that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Canonical {
    pub class: PClass,
    pub log: Vec<Relation>,
}

fn checked_neg(x: i64) -> Result<i64> {
    x.checked_neg().ok_or(Error::Overflow)
}

/// All rules applicable to `p`, in a fixed order.
pub(crate) fn applicable(p: &PClass, generic: bool) -> Vec<Relation> {
    let mut out = Vec::new();
    if p.dual {
        out.push(Relation::DualToNegatedDegree);
        out.push(Relation::DualToNegatedRank);
        return out;
    }
    let periodic = generic && p.d != 0;
    if periodic {
        if p.d < 0 {
            out.push(Relation::Negate);
        } else if p.r > p.d {
            out.push(Relation::Periodicity { from: p.r, to: p.r - p.d });
        } else if p.r <= 0 {
            let mut to = p.r + p.d;
            if to == 0 {
                to += p.d;
            }
            out.push(Relation::Periodicity { from: p.r, to });
        }
    } else if p.r < 0 {
        out.push(Relation::Negate);
    }
    out
}

pub(crate) fn apply(p: &PClass, rule: &Relation) -> Result<PClass> {
    let mut q = p.clone();
    match rule {
        Relation::DualToNegatedDegree => {
            q.dual = false;
            q.d = checked_neg(p.d)?;
            q.shift -= 1;
        }
        Relation::DualToNegatedRank => {
            q.dual = false;
            q.r = checked_neg(p.r)?;
        }
        Relation::Negate => {
            q.r = checked_neg(p.r)?;
            q.d = checked_neg(p.d)?;
            q.shift += 1;
        }
        Relation::Periodicity { to, .. } => {
            q.r = *to;
        }
    }
    Ok(q)
}

/// Canonical form, applying the first applicable rule at each step.
pub fn canonicalize(p: &PClass, generic: bool) -> Result<Canonical> {
    canonicalize_with(p, generic, |_| 0)
}

/// Canonical form with a caller-chosen rule at each step; `pick` receives
/// the applicable rules and returns an index into them.
pub fn canonicalize_with(
    p: &PClass,
    generic: bool,
    mut pick: impl FnMut(&[Relation]) -> usize,
) -> Result<Canonical> {
    p.validate()?;
    let mut cur = p.clone();
    let mut log = Vec::new();
    loop {
        let rules = applicable(&cur, generic);
        if rules.is_empty() {
            break;
        }
        let rule = rules[pick(&rules) % rules.len()].clone();
        cur = apply(&cur, &rule)?;
        log.push(rule);
    }
    cur.shift = cur.shift.rem_euclid(2);
    Ok(Canonical { class: cur, log })
}

/// `(r, d) -> (r + d, d)`: transform to the Jacobian, twist by `O(-1)` and
/// transform back.
pub fn jacobian_step(v: &FiberClass) -> Result<FiberClass> {
    let r = v.r().checked_add(v.d()).ok_or(Error::Overflow)?;
    if r == 0 {
        return Err(Error::TorsionTransform { r, d: v.d() });
    }
    v.relabel(r, v.d(), v.space())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(r: i64, d: i64) -> PClass {
        PClass::new(r, d, "X").unwrap()
    }

    #[test]
    fn negated_shifted_class() {
        let c = canonicalize(&p(-3, -5).shifted(1), false).unwrap();
        assert_eq!(c.class, p(3, 5));
        assert_eq!(c.log, vec![Relation::Negate]);
    }

    #[test]
    fn periodicity_reduces_rank() {
        let c = canonicalize(&p(8, 5), true).unwrap();
        assert_eq!(c.class, p(3, 5));
        assert_eq!(c.log, vec![Relation::Periodicity { from: 8, to: 3 }]);
    }

    #[test]
    fn canonical_input_is_fixed() {
        let c = canonicalize(&p(3, 5), false).unwrap();
        assert_eq!(c.class, p(3, 5));
        assert!(c.log.is_empty());
    }

    #[test]
    fn rank_divisible_by_degree_lands_on_top_of_window() {
        let c = canonicalize(&p(-1, 1), true).unwrap();
        assert_eq!((c.class.r, c.class.d), (1, 1));
        assert_eq!(canonicalize(&p(1, 0), true).unwrap().class, p(1, 0));
    }

    #[test]
    fn jacobian_step_examples() {
        let v = FiberClass::new(3, 5, "X").unwrap();
        let w = jacobian_step(&v).unwrap();
        assert_eq!((w.r(), w.d()), (8, 5));
        let fixed = FiberClass::new(1, 0, "X").unwrap();
        assert_eq!(jacobian_step(&fixed).unwrap(), fixed);

        let mut cur = FiberClass::new(1, 3, "X").unwrap();
        for _ in 0..10 {
            cur = jacobian_step(&cur).unwrap();
        }
        assert_eq!((cur.r(), cur.d()), (31, 3));
        let c = canonicalize(&PClass::of(&cur), true).unwrap();
        assert_eq!(c.class, p(1, 3));

        let edge = FiberClass::new(-1, 1, "X").unwrap();
        assert!(matches!(jacobian_step(&edge), Err(Error::TorsionTransform { .. })));
    }
}
