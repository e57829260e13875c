//! Chern characters, Todd classes, Euler characteristics and the relative
//! Grothendieck–Riemann–Roch pushforward.

use std::collections::BTreeMap;

use super::ring::{pull_class, push_class, Class, RingSpec};
use crate::arith::Q;
use crate::error::{Error, Result};
use crate::lattice::FiberClass;

/// A Chern character, stored as one inhomogeneous class; `ch_k` is the
/// part of degree `2k`.
#[derive(Clone, Debug, PartialEq)]
pub struct SheafClass {
    pub ch: Class,
}

impl SheafClass {
    pub fn new(ch: Class) -> Self {
        SheafClass { ch }
    }

    pub fn rank(&self) -> Q {
        self.ch[0].clone()
    }

    pub fn part(&self, r: &RingSpec, k: u32) -> Class {
        r.part(&self.ch, 2 * k)
    }
}

fn q_frac(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

/// `ch = r + c1 + (c1² - 2c2)/2 + (c1³ - 3c1c2 + 3c3)/6`.
pub fn chern_to_ch(r: &RingSpec, rank: Q, c1: &Class, c2: &Class, c3: &Class) -> Result<SheafClass> {
    r.check_degree(c1, 2, "c1")?;
    r.check_degree(c2, 4, "c2")?;
    r.check_degree(c3, 6, "c3")?;
    let c1sq = r.mul(c1, c1);
    let ch2 = r.scale(&r.sub(&c1sq, &r.scale(c2, &Q::from_integer(2.into()))), &q_frac(1, 2));
    let c1c2 = r.mul(c1, c2);
    let cube = r.mul(&c1sq, c1);
    let ch3 = r.scale(
        &r.add(&r.sub(&cube, &r.scale(&c1c2, &Q::from_integer(3.into()))), &r.scale(c3, &Q::from_integer(3.into()))),
        &q_frac(1, 6),
    );
    let mut ch = r.scale(&r.one(), &rank);
    for part in [c1, &ch2, &ch3] {
        ch = r.add(&ch, part);
    }
    Ok(SheafClass { ch })
}

/// `ch(L) = exp(D)` for the line bundle of a divisor class.
pub fn line_bundle(r: &RingSpec, d: &Class) -> Result<SheafClass> {
    r.check_degree(d, 2, "divisor")?;
    Ok(SheafClass { ch: r.exp(d) })
}

/// `td = 1 + c1/2 + (c1² + c2)/12 + c1 c2/24`.
pub fn todd(r: &RingSpec) -> Class {
    let c1 = r.c1();
    let c2 = r.c2();
    let mut td = r.one();
    td = r.add(&td, &r.scale(c1, &q_frac(1, 2)));
    td = r.add(&td, &r.scale(&r.add(&r.mul(c1, c1), c2), &q_frac(1, 12)));
    r.add(&td, &r.scale(&r.mul(c1, c2), &q_frac(1, 24)))
}

/// `χ(F) = ∫ ch(F) td`.
pub fn chi_grr(r: &RingSpec, f: &SheafClass) -> Q {
    r.integrate(&r.mul(&f.ch, &todd(r)))
}

pub fn dual(r: &RingSpec, f: &SheafClass) -> SheafClass {
    SheafClass { ch: r.dual(&f.ch) }
}

/// `F[1]`: the character changes sign.
pub fn shift(f: &SheafClass) -> SheafClass {
    SheafClass {
        ch: f.ch.iter().map(|x| -x).collect(),
    }
}

pub fn tensor(r: &RingSpec, f: &SheafClass, g: &SheafClass) -> SheafClass {
    SheafClass { ch: r.mul(&f.ch, &g.ch) }
}

/// The declared relative Todd class, or `td_X · π^* td_S^{-1}` when a
/// pullback table is available.
pub fn relative_todd(total: &RingSpec, base: &RingSpec) -> Result<Class> {
    let f = total.fibration().ok_or(Error::MissingPushforwardTable)?;
    if let Some(t) = &f.relative_todd {
        return Ok(t.clone());
    }
    let pull = f.pullback.as_ref().ok_or(Error::MissingPushforwardTable)?;
    let inv = base.inverse_unipotent(&todd(base));
    Ok(total.mul(&todd(total), &pull_class(pull, &inv, total)))
}

pub fn pushforward_class(total: &RingSpec, base: &RingSpec, x: &Class) -> Result<Class> {
    let f = total.fibration().ok_or(Error::MissingPushforwardTable)?;
    let push = f.pushforward.as_ref().ok_or(Error::MissingPushforwardTable)?;
    Ok(push_class(push, x, base))
}

pub fn pullback_class(total: &RingSpec, y: &Class) -> Result<Class> {
    let f = total.fibration().ok_or(Error::MissingPushforwardTable)?;
    let pull = f.pullback.as_ref().ok_or(Error::MissingPushforwardTable)?;
    Ok(pull_class(pull, y, total))
}

/// `ch(Rπ_* F) = π_*(ch(F) · td_{X/S})`.
pub fn pushforward_ch(total: &RingSpec, base: &RingSpec, f: &SheafClass) -> Result<SheafClass> {
    let td = relative_todd(total, base)?;
    let ch = pushforward_class(total, base, &total.mul(&f.ch, &td))?;
    Ok(SheafClass { ch })
}

/// Chern characters of chosen representatives of fiberwise classes.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TemplateSet {
    templates: BTreeMap<(i64, i64), SheafClass>,
}

impl TemplateSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, r: i64, d: i64, ch: SheafClass) {
        self.templates.insert((r, d), ch);
    }

    pub fn get(&self, r: i64, d: i64) -> Option<&SheafClass> {
        self.templates.get(&(r, d))
    }

    pub fn len(&self) -> usize {
        self.templates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.templates.is_empty()
    }
}

/// Pushforward of the template for `v`, twisted by the pullback of a base
/// divisor.
pub fn p_class_ch(
    total: &RingSpec,
    base: &RingSpec,
    templates: &TemplateSet,
    v: &FiberClass,
    twist: &Class,
) -> Result<SheafClass> {
    let t = templates
        .get(v.r(), v.d())
        .ok_or_else(|| Error::MissingTemplate(format!("({}, {})", v.r(), v.d())))?;
    base.check_degree(twist, 2, "twist")?;
    let twisted = total.mul(&t.ch, &pullback_class(total, &base.exp(twist))?);
    pushforward_ch(total, base, &SheafClass { ch: twisted })
}

pub fn cubic_form(r: &RingSpec, d1: &Class, d2: &Class, d3: &Class) -> Result<Q> {
    for (i, d) in [d1, d2, d3].into_iter().enumerate() {
        r.check_degree(d, 2, &format!("divisor {}", i + 1))?;
    }
    Ok(r.integrate(&r.mul(&r.mul(d1, d2), d3)))
}

pub fn c2_pair(r: &RingSpec, d: &Class) -> Result<Q> {
    r.check_degree(d, 2, "divisor")?;
    Ok(r.integrate(&r.mul(r.c2(), d)))
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::arith::{q, q_frac};
    use crate::grr::presets::{elliptic_cy3, projective_plane};
    use crate::grr::ring::validate_ring;

    fn random_class(r: &RingSpec, rng: &mut ChaCha8Rng) -> Class {
        (0..r.len()).map(|_| q_frac(rng.gen_range(-9..=9), rng.gen_range(1..=4))).collect()
    }

    #[test]
    fn plane_chi_matches_closed_form() {
        let p = projective_plane();
        let h = p.named("h").unwrap();
        for k in -10i64..=10 {
            let o = line_bundle(&p, &p.scale(&h, &q(k))).unwrap();
            assert_eq!(chi_grr(&p, &o), q((k + 1) * (k + 2) / 2), "k = {k}");
        }
        assert_eq!(todd(&p), p.class(&[("1", q(1)), ("h", q_frac(3, 2)), ("pt", q(1))]).unwrap());
    }

    #[test]
    fn shipped_threefold_is_consistent() {
        let (x, s) = elliptic_cy3();
        let rep = validate_ring(&x, Some(&s));
        assert!(rep.valid, "{:?}", rep.violations);
        assert!(rep.warnings.is_empty());
        assert_eq!(chi_grr(&x, &SheafClass::new(x.one())), q(0));
        assert_eq!(todd(&x), x.add(&x.one(), &x.scale(x.c2(), &q_frac(1, 12))));

        let declared = relative_todd(&x, &s).unwrap();
        let f = x.fibration().unwrap();
        let inv = s.inverse_unipotent(&todd(&s));
        let computed = x.mul(&todd(&x), &pull_class(f.pullback.as_ref().unwrap(), &inv, &x));
        assert_eq!(declared, computed);
    }

    #[test]
    fn structure_sheaf_pushes_to_o_minus_canonical() {
        // Rπ_*O = O ⊕ K_S[-1], so ch = 1 - exp(-3h).
        let (x, s) = elliptic_cy3();
        let pushed = pushforward_ch(&x, &s, &SheafClass::new(x.one())).unwrap();
        let h = s.named("h").unwrap();
        let expected = s.sub(&s.one(), &s.exp(&s.scale(&h, &q(-3))));
        assert_eq!(pushed.ch, expected);
        assert_eq!(pushed.rank(), q(0));
        assert_eq!(chi_grr(&s, &pushed), q(0));
    }

    #[test]
    fn pushforward_preserves_chi() {
        let (x, s) = elliptic_cy3();
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        for _ in 0..20 {
            let f = SheafClass::new(random_class(&x, &mut rng));
            let g = pushforward_ch(&x, &s, &f).unwrap();
            assert_eq!(chi_grr(&s, &g), chi_grr(&x, &f));
        }
    }

    #[test]
    fn fiber_class_pushes_to_point() {
        let (x, s) = elliptic_cy3();
        let f = x.named("F").unwrap();
        assert_eq!(pushforward_class(&x, &s, &f).unwrap(), s.zero());
        let pt = x.named("pt").unwrap();
        assert_eq!(pushforward_class(&x, &s, &pt).unwrap(), s.named("pt").unwrap());
    }

    #[test]
    fn twists_multiply_by_base_exponential() {
        let (x, s) = elliptic_cy3();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = s.named("h").unwrap();
        for d in [-3i64, 1, 5] {
            let mut t = TemplateSet::new();
            let mut ch = random_class(&x, &mut rng);
            ch[0] = q(1);
            ch[x.index_of("sigma").unwrap()] = q(d);
            t.insert(1, d, SheafClass::new(ch));
            let v = FiberClass::new(1, d, "X").unwrap();
            let base = p_class_ch(&x, &s, &t, &v, &s.zero()).unwrap();
            assert_eq!(base.rank(), q(d));
            for k in [-2i64, 1, 4] {
                let tw = s.scale(&h, &q(k));
                let twisted = p_class_ch(&x, &s, &t, &v, &tw).unwrap();
                assert_eq!(twisted.ch, s.mul(&base.ch, &s.exp(&tw)));
            }
        }
        let missing = p_class_ch(&x, &s, &TemplateSet::new(), &FiberClass::new(2, 3, "X").unwrap(), &s.zero());
        assert!(matches!(missing, Err(Error::MissingTemplate(_))));
    }

    #[test]
    fn dual_template_gives_dual_shift() {
        // Relative duality with ω_{X/S} = π^*O(3): -ch(π_! F^∨)^∨ = ch(π_! F) exp(c1(S)).
        let (x, s) = elliptic_cy3();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let f = SheafClass::new(random_class(&x, &mut rng));
            let a = pushforward_ch(&x, &s, &f).unwrap();
            let b = pushforward_ch(&x, &s, &dual(&x, &f)).unwrap();
            let lhs = shift(&dual(&s, &b));
            assert_eq!(lhs.ch, s.mul(&a.ch, &s.exp(s.c1())));
        }
    }

    #[test]
    fn chern_character_expansion() {
        let (x, _) = elliptic_cy3();
        let z = x.zero();
        assert_eq!(chern_to_ch(&x, q(1), &z, &z, &z).unwrap().ch, x.one());
        let d = x.class(&[("sigma", q(2)), ("H", q(-1))]).unwrap();
        let line = chern_to_ch(&x, q(1), &d, &z, &z).unwrap();
        assert_eq!(line.ch, x.exp(&d));
        let dd = x.mul(&d, &d);
        assert_eq!(line.part(&x, 2), x.scale(&dd, &q_frac(1, 2)));
        assert_eq!(line.part(&x, 3), x.scale(&x.mul(&dd, &d), &q_frac(1, 6)));
        let c2 = x.named("F").unwrap();
        let rk2 = chern_to_ch(&x, q(2), &z, &c2, &z).unwrap();
        assert_eq!(rk2.part(&x, 2), x.scale(&c2, &q(-1)));
        assert!(matches!(chern_to_ch(&x, q(1), &c2, &z, &z), Err(Error::Grading(_))));
    }

    #[test]
    fn cubic_form_is_symmetric_and_kills_pullback_cube() {
        let (x, _) = elliptic_cy3();
        let hh = x.named("H").unwrap();
        assert_eq!(cubic_form(&x, &hh, &hh, &hh).unwrap(), q(0));
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let divisor = |rng: &mut ChaCha8Rng| {
            x.class(&[("sigma", q(rng.gen_range(-5..=5))), ("H", q(rng.gen_range(-5..=5)))]).unwrap()
        };
        for _ in 0..20 {
            let d = [divisor(&mut rng), divisor(&mut rng), divisor(&mut rng)];
            let v = cubic_form(&x, &d[0], &d[1], &d[2]).unwrap();
            for p in [[0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
                assert_eq!(cubic_form(&x, &d[p[0]], &d[p[1]], &d[p[2]]).unwrap(), v);
            }
            let sum = x.add(&d[0], &d[1]);
            assert_eq!(
                cubic_form(&x, &sum, &d[1], &d[2]).unwrap(),
                v.clone() + cubic_form(&x, &d[1], &d[1], &d[2]).unwrap()
            );
        }
        let s = x.named("sigma").unwrap();
        assert_eq!(cubic_form(&x, &s, &s, &s).unwrap(), q(9));
        assert_eq!(c2_pair(&x, &s).unwrap(), q(-6));
        assert_eq!(c2_pair(&x, &hh).unwrap(), q(36));
        assert!(matches!(c2_pair(&x, &x.one()), Err(Error::Grading(_))));
    }
}

#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::*;
    use crate::arith::q;
    use crate::grr::presets::elliptic_cy3;

    fn class(len: usize) -> impl Strategy<Value = Class> {
        proptest::collection::vec((-20i64..=20, 1i64..=6), len).prop_map(|v| v.into_iter().map(|(a, b)| Q::new(a.into(), b.into())).collect())
    }

    proptest! {
        #[test]
        fn pushforward_preserves_chi(ch in class(6)) {
            let (x, s) = elliptic_cy3();
            let f = SheafClass::new(ch);
            prop_assert_eq!(chi_grr(&s, &pushforward_ch(&x, &s, &f).unwrap()), chi_grr(&x, &f));
        }

        #[test]
        fn cubic_form_is_trilinear(a in -5i64..=5, b in -5i64..=5, c in -5i64..=5, d in -5i64..=5) {
            let (x, _) = elliptic_cy3();
            let s = x.named("sigma").unwrap();
            let h = x.named("H").unwrap();
            let d1 = x.add(&x.scale(&s, &q(a)), &x.scale(&h, &q(b)));
            let d2 = x.add(&x.scale(&s, &q(c)), &x.scale(&h, &q(d)));
            let lhs = cubic_form(&x, &x.add(&d1, &d2), &d1, &d2).unwrap();
            let rhs = cubic_form(&x, &d1, &d1, &d2).unwrap() + cubic_form(&x, &d2, &d1, &d2).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(cubic_form(&x, &d1, &d2, &d2).unwrap(), cubic_form(&x, &d2, &d1, &d2).unwrap());
        }
    }
}
