//! Three-valued equality of `P`-classes, with cross-space bridges
//! registered from the `r = 1` pushforward identity.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::class::FiberClass;
use super::kernel::KernelData;
use super::pclass::{canonicalize, PClass};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decision {
    EqualExactly,
    /// Equal after an odd shift.
    EqualUpToShift,
    /// No derivation exists in the implemented relation system. This is
    /// not a proof of inequality.
    NotProvablyEqual,
}

/// `P_target(c + a d, e + b d) = P_source(b, e + b d)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankOneIdentity {
    pub lhs: PClass,
    pub rhs: PClass,
}

/// The general-rank statement: `P_target(transform(v))` is the pushforward
/// of `V(v) ⊗ V(b, e)` on the source. Not a `P`-class identity, so it is
/// recorded without being used by the decider.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorAnnotation {
    pub lhs: PClass,
    pub tensor_factors: [FiberClass; 2],
    pub verified: bool,
}

impl RankOneIdentity {
    pub fn new(k: &KernelData, d: i64) -> Result<RankOneIdentity> {
        let v = FiberClass::new(1, d, k.source.clone())?;
        let x = k.transform(&v)?;
        let ed = k
            .b
            .checked_mul(d)
            .and_then(|bd| bd.checked_add(k.e))
            .ok_or(Error::Overflow)?;
        if k.b == 0 {
            return Err(Error::TorsionTransform { r: 0, d: ed });
        }
        Ok(RankOneIdentity {
            lhs: PClass::of(&x),
            rhs: PClass::new(k.b, ed, k.source.clone())?,
        })
    }
}

impl TensorAnnotation {
    pub fn new(k: &KernelData, v: &FiberClass) -> Result<TensorAnnotation> {
        let x = k.transform(v)?;
        if k.b == 0 {
            return Err(Error::TorsionTransform { r: 0, d: k.e });
        }
        Ok(TensorAnnotation {
            lhs: PClass::of(&x),
            tensor_factors: [v.clone(), FiberClass::new(k.b, k.e, k.source.clone())?],
            verified: false,
        })
    }
}

#[derive(Clone, Debug, Default)]
pub struct PDecider {
    bridges: Vec<RankOneIdentity>,
}

type Key = (String, i64, i64);

fn key(p: &PClass) -> Key {
    (p.space.clone(), p.r, p.d)
}

/// Union-find over canonical keys carrying the shift parity to the root.
struct ParityForest {
    parent: HashMap<Key, (Key, i64)>,
}

impl ParityForest {
    fn find(&mut self, k: &Key) -> (Key, i64) {
        let Some((up, par)) = self.parent.get(k).cloned() else {
            return (k.clone(), 0);
        };
        if &up == k {
            return (up, 0);
        }
        let (root, rp) = self.find(&up);
        let total = (par + rp) % 2;
        self.parent.insert(k.clone(), (root.clone(), total));
        (root, total)
    }

    fn union(&mut self, a: &Key, b: &Key, parity: i64) {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra != rb {
            self.parent.insert(ra, (rb, (pa + pb + parity) % 2));
        }
    }
}

impl PDecider {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&mut self, id: RankOneIdentity) {
        self.bridges.push(id);
    }

    pub fn bridges(&self) -> &[RankOneIdentity] {
        &self.bridges
    }

    pub fn equal(&self, p: &PClass, q: &PClass, generic: bool) -> Result<Decision> {
        let cp = canonicalize(p, generic)?.class;
        let cq = canonicalize(q, generic)?.class;
        let mut forest = ParityForest {
            parent: HashMap::new(),
        };
        for b in &self.bridges {
            let l = canonicalize(&b.lhs, generic)?.class;
            let r = canonicalize(&b.rhs, generic)?.class;
            forest.union(&key(&l), &key(&r), (l.parity() + r.parity()) % 2);
        }
        let (rp, pp) = forest.find(&key(&cp));
        let (rq, pq) = forest.find(&key(&cq));
        if rp != rq {
            return Ok(Decision::NotProvablyEqual);
        }
        let parity = (pp + pq + cp.parity() + cq.parity()) % 2;
        Ok(if parity == 0 {
            Decision::EqualExactly
        } else {
            Decision::EqualUpToShift
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::kernel::kernel_from_moduli;

    fn p(r: i64, d: i64, s: &str) -> PClass {
        PClass::new(r, d, s).unwrap()
    }

    #[test]
    fn duality_relation() {
        let dec = PDecider::new();
        let q = p(3, -5, "X").dualized().shifted(1);
        assert_eq!(dec.equal(&p(3, 5, "X"), &q, false).unwrap(), Decision::EqualExactly);
        let q = p(3, 5, "X").shifted(1);
        assert_eq!(dec.equal(&p(3, 5, "X"), &q, false).unwrap(), Decision::EqualUpToShift);
    }

    #[test]
    fn periodicity_and_its_limits() {
        let dec = PDecider::new();
        assert_eq!(dec.equal(&p(8, 5, "X"), &p(3, 5, "X"), true).unwrap(), Decision::EqualExactly);
        assert_eq!(
            dec.equal(&p(8, 5, "X"), &p(3, 5, "X"), false).unwrap(),
            Decision::NotProvablyEqual
        );
        assert_eq!(
            dec.equal(&p(2, 5, "X"), &p(3, 5, "X"), true).unwrap(),
            Decision::NotProvablyEqual
        );
    }

    #[test]
    fn bridge_from_moduli_kernel() {
        let k = kernel_from_moduli(1, 2, 0, 5).unwrap();
        let id = RankOneIdentity::new(&k, 5).unwrap();
        assert_eq!(id.lhs, p(5, 9, "X"));
        assert_eq!(id.rhs, p(2, 9, "M"));
        let mut dec = PDecider::new();
        assert_eq!(
            dec.equal(&id.lhs, &id.rhs, false).unwrap(),
            Decision::NotProvablyEqual
        );
        dec.register(id);
        assert_eq!(
            dec.equal(&p(5, 9, "X"), &p(2, 9, "M"), false).unwrap(),
            Decision::EqualExactly
        );
        // through the bridge and periodicity on both sides
        assert_eq!(
            dec.equal(&p(14, 9, "X"), &p(-2, -9, "M").shifted(1), true).unwrap(),
            Decision::EqualExactly
        );
    }

    #[test]
    fn degenerate_bridge_rejected() {
        let k = kernel_from_moduli(1, 0, 0, 1).unwrap();
        assert!(matches!(
            RankOneIdentity::new(&k, 1),
            Err(Error::TorsionTransform { r: 0, .. })
        ));
    }

    #[test]
    fn general_rank_is_annotation_only() {
        let k = kernel_from_moduli(1, 2, 0, 5).unwrap();
        let v = FiberClass::new(3, 5, "M").unwrap();
        let ann = TensorAnnotation::new(&k, &v).unwrap();
        assert_eq!((ann.lhs.r, ann.lhs.d), (5, 7));
        assert_eq!(ann.tensor_factors[1], FiberClass::new(2, -1, "M").unwrap());
        assert!(!ann.verified);
    }
}
