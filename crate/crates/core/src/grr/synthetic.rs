//! Synthetic moduli spaces with planted invariants, and the pushforward
//! samples they produce.
//!
//! The concrete ring has basis `1, Θ, H, e1, e2, pt` with `e1, e2` dual to
//! `Θ, H`. Samples are computed through its multiplication table and
//! pushforward, a path independent of the solver's symbolic one.

use std::collections::BTreeMap;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::chern::{pushforward_ch, SheafClass};
use super::presets::projective_plane;
use super::ring::{RingBuilder, RingSpec};
use super::solver::{Factor, Sample};
use crate::arith::{q, Q};
use crate::error::Result;
use crate::lattice::{kernel_from_moduli, FiberClass, TensorAnnotation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Planted {
    pub theta3: i64,
    pub theta2_h: i64,
    /// Nonzero: the fibration's degree on `Θ`.
    pub theta_h2: i64,
    pub c2_theta: i64,
    pub c2_h: i64,
}

impl Planted {
    pub fn random(rng: &mut impl Rng) -> Planted {
        let theta_h2 = loop {
            let v = rng.gen_range(-20..=20);
            if v != 0 {
                break v;
            }
        };
        Planted {
            theta3: rng.gen_range(-20..=20),
            theta2_h: rng.gen_range(-20..=20),
            theta_h2,
            c2_theta: rng.gen_range(-60..=60),
            c2_h: rng.gen_range(-60..=60),
        }
    }

    /// Values keyed by the solver's unknown names.
    pub fn named(&self) -> BTreeMap<String, Q> {
        [
            ("Theta^3", self.theta3),
            ("Theta^2*H", self.theta2_h),
            ("Theta*H^2", self.theta_h2),
            ("c2*Theta", self.c2_theta),
            ("c2*H", self.c2_h),
        ]
        .into_iter()
        .map(|(n, v)| (n.to_string(), q(v)))
        .collect()
    }
}

/// The threefold carrying the planted invariants, fibred over the plane.
pub fn moduli_ring(p: &Planted, base: &RingSpec) -> Result<RingSpec> {
    let terms = |t: &[(&str, i64)]| -> Vec<(String, Q)> { t.iter().map(|(n, v)| (n.to_string(), q(*v))).collect() };
    // D D' = (∫ D D' Θ) e1 + (∫ D D' H) e2
    RingBuilder::new("synthetic-moduli")
        .basis("1", 0)
        .basis("Theta", 2)
        .basis("H", 2)
        .basis("e1", 4)
        .basis("e2", 4)
        .basis("pt", 6)
        .calabi_yau(true)
        .product_terms("Theta".into(), "Theta".into(), terms(&[("e1", p.theta3), ("e2", p.theta2_h)]))
        .product_terms("Theta".into(), "H".into(), terms(&[("e1", p.theta2_h), ("e2", p.theta_h2)]))
        .product_terms("H".into(), "H".into(), terms(&[("e1", p.theta_h2)]))
        .product_terms("Theta".into(), "e1".into(), terms(&[("pt", 1)]))
        .product_terms("H".into(), "e2".into(), terms(&[("pt", 1)]))
        .chern(2, terms(&[("e1", p.c2_theta), ("e2", p.c2_h)]))
        .fibration(
            base.name().to_string(),
            Some(vec![
                ("Theta".into(), terms(&[("1", p.theta_h2)])),
                ("e2".into(), terms(&[("h", 1)])),
                ("pt".into(), terms(&[("pt", 1)])),
            ]),
            Some(vec![
                ("h".into(), terms(&[("H", 1)])),
                ("pt".into(), terms(&[("e1", p.theta_h2)])),
            ]),
            None,
        )
        .build_over(Some(base))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticDatum {
    pub planted: Planted,
    pub ring: RingSpec,
    pub base: RingSpec,
    pub samples: Vec<Sample>,
}

/// Kernel `a = 1, b = 2, c = 0` with multisection degree 5. For each
/// `r <= max_r` prime to 5, `P_X(5, 10 - r)` is the pushforward of
/// `V_M(r, 5) ⊗ V_M(2, -1)`; the representatives carry random `H`
/// components and each `X` side a random twist.
pub fn synthetic_datum(seed: u64, max_r: i64) -> Result<SyntheticDatum> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let planted = Planted::random(&mut rng);
    let base = projective_plane();
    let ring = moduli_ring(&planted, &base)?;
    let kernel = kernel_from_moduli(1, 2, 0, 5)?;
    let h = base.named("h")?;
    let mut samples = Vec::new();
    for r in (1..=max_r).filter(|r| r.gcd(&5) == 1) {
        let v = FiberClass::new(r, 5, "M")?;
        let ann = TensorAnnotation::new(&kernel, &v)?;
        let factors: Vec<Factor> = ann
            .tensor_factors
            .iter()
            .map(|w| Factor {
                rank: q(w.r()),
                theta: q(w.d()),
                h: q(rng.gen_range(-3..=3)),
            })
            .collect();
        let ch = factors.iter().fold(ring.one(), |acc, f| {
            let d = ring
                .class(&[("Theta", &f.theta / &f.rank), ("H", &f.h / &f.rank)])
                .expect("divisor basis");
            ring.mul(&acc, &ring.scale(&ring.exp(&d), &f.rank))
        });
        let pushed = pushforward_ch(&ring, &base, &SheafClass::new(ch))?;
        let twist = q(rng.gen_range(-3..=3));
        samples.push(Sample {
            label: format!(
                "P_X({}, {}) = pi_*(V_M({}, 5) x V_M({}, {}))",
                ann.lhs.r, ann.lhs.d, r, kernel.b, kernel.e
            ),
            factors,
            x_side: base.mul(&pushed.ch, &base.exp(&base.scale(&h, &twist))),
            twist,
        });
    }
    Ok(SyntheticDatum {
        planted,
        ring,
        base,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grr::chern::{c2_pair, cubic_form};
    use crate::grr::ring::validate_ring;
    use crate::grr::solver::{solve_moduli_invariants, SolveStatus};

    #[test]
    fn synthetic_ring_is_a_valid_fibration() {
        for seed in 0..5 {
            let d = synthetic_datum(seed, 24).unwrap();
            let rep = validate_ring(&d.ring, Some(&d.base));
            assert!(rep.valid, "{:?}", rep.violations);
            let th = d.ring.named("Theta").unwrap();
            let h = d.ring.named("H").unwrap();
            assert_eq!(cubic_form(&d.ring, &th, &th, &h).unwrap(), q(d.planted.theta2_h));
            assert_eq!(cubic_form(&d.ring, &h, &h, &h).unwrap(), q(0));
            assert_eq!(c2_pair(&d.ring, &h).unwrap(), q(d.planted.c2_h));
        }
    }

    #[test]
    fn round_trip_recovers_planted_values() {
        for seed in 0..20 {
            let d = synthetic_datum(seed, 24).unwrap();
            assert_eq!(d.samples.len(), 20);
            let rep = solve_moduli_invariants(&d.base, &d.samples, &BTreeMap::new()).unwrap();
            assert_eq!(rep.status, SolveStatus::Solved, "seed {seed}: {rep:?}");
            assert_eq!(rep.rank, 5);
            let expected: BTreeMap<String, String> =
                d.planted.named().into_iter().map(|(k, v)| (k, v.to_string())).collect();
            assert_eq!(rep.values, expected, "seed {seed}");
        }
    }

    #[test]
    fn one_sample_is_underdetermined() {
        let d = synthetic_datum(1, 1).unwrap();
        let rep = solve_moduli_invariants(&d.base, &d.samples, &BTreeMap::new()).unwrap();
        assert_eq!(rep.status, SolveStatus::Underdetermined);
        assert!(rep.rank < 5);
        assert!(!rep.null_directions.is_empty());
        assert!(!rep.unresolved.is_empty());
        assert_eq!(rep.structural.get("H^3").map(String::as_str), Some("0"));
    }

    #[test]
    fn corrupted_sample_is_inconsistent() {
        let mut d = synthetic_datum(2, 24).unwrap();
        let top = d.base.point_index();
        d.samples[0].x_side[top] += q(1);
        assert!(matches!(
            solve_moduli_invariants(&d.base, &d.samples, &BTreeMap::new()),
            Err(crate::Error::InconsistentSystem { .. })
        ));
    }
}
