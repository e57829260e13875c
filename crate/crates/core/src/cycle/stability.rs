//! Bounded search for destabilizing subsheaves, and the stability verdict.
//!
//! Candidates come in three families:
//!
//! * rank-one sheaves `F` on a connected subcurve with an injective map
//!   `F → E`;
//! * `E|_Y(-ends)`, the largest subsheaf of `E` supported on a proper chain
//!   `Y`;
//! * kernels of maps `E → Q` onto a rank-one sheaf on a subcurve, found as
//!   injective maps of rank-one sheaves into `E^∨`.
//!
//! A full-cycle rank-one candidate carries a gluing parameter `λ`. Its node
//! system is a pencil `A0 + λ A1`; a map exists for some `λ` either because
//! it exists generically or because `λ` is a root of the gcd of the
//! maximal nonvanishing minors, and in the latter case the witness lives in
//! `Q[x]/(m)` for a square-free factor `m` of that gcd.

use num_traits::One;
use serde::{Deserialize, Serialize};

use super::hom::{test_sheaf_system, NodeSystem};
use super::sheaf::{euler_char, slope_mu, CycleBundle, Lambda, PolarizedCycle, RankOneTestSheaf, Support};
use crate::arith::field::{Field, NumberField, ZeroDivisor};
use crate::arith::linalg::{nullspace, Mat};
use crate::arith::poly::Poly;
use crate::arith::polymat::{generic_rank, pencil, rank_drop_locus};
use crate::arith::{q, Q};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// A rank-one sheaf mapping injectively into `E`.
    SubSheaf,
    /// `E|_Y(-ends)` for a proper chain `Y`.
    RestrictedSubBundle,
    /// The kernel of `E → Q`, where the test sheaf maps injectively into
    /// `E^∨` and `Q` is its dual twisted down at the ends.
    QuotientKernel,
}

/// Coefficients of a map from a rank-one sheaf, in `Q[x]/(m)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    /// Minimal data for the gluing parameter: `λ` is the class of `x`.
    /// Absent when no parameter is involved.
    pub modulus: Option<Poly>,
    /// `[position][row][power]`.
    pub coefficients: Vec<Vec<Vec<Poly>>>,
    /// Dimension of the Hom space the witness was drawn from.
    pub hom_dim: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Destabilizer {
    pub family: Family,
    /// The test sheaf; for restricted sub-bundles, the support and the
    /// multidegree of `E` on it.
    pub sheaf: RankOneTestSheaf,
    pub chi: i64,
    pub weight: i64,
    pub slope: Q,
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DestabilizerSearch {
    pub slope: Q,
    /// Candidates with slope at least `μ(E)`, in enumeration order.
    pub candidates: Vec<Destabilizer>,
    /// The slope window forced degrees outside `[-B, B]`.
    pub bound_too_small: bool,
    /// Whether every saturated subsheaf type is covered.
    pub complete: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Stable,
    StrictlySemistable,
    Unstable,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilityReport {
    pub verdict: Verdict,
    pub slope: Q,
    pub certificate: Option<Destabilizer>,
    pub bound_too_small: bool,
    pub complete: bool,
}

fn ceil_q(x: &Q) -> i64 {
    let c = x.ceil().to_integer();
    i64::try_from(c).expect("slope window fits in i64")
}

fn support_weight(c: &PolarizedCycle, s: Support) -> i64 {
    let w = c.component_weights();
    s.components(c.n).iter().map(|&j| w[j]).sum()
}

/// Every multidegree in the box `lo..=hi` whose sum is at least `min_sum`.
fn boxes(lo: &[i64], hi: &[i64], min_sum: i64) -> Vec<Vec<i64>> {
    if lo.iter().zip(hi).any(|(l, h)| l > h) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = lo.to_vec();
    loop {
        if cur.iter().sum::<i64>() >= min_sum {
            out.push(cur.clone());
        }
        let mut i = 0;
        loop {
            if i == cur.len() {
                return out;
            }
            if cur[i] < hi[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = lo[i];
            i += 1;
        }
    }
}

fn elem(k: &NumberField, x: &Q, y: &Q, lambda: &Poly) -> Poly {
    k.add(&Poly::constant(x.clone()), &k.mul(&Poly::constant(y.clone()), lambda))
}

enum Search {
    Found(Witness),
    NotFound,
}

/// Looks for a kernel vector of the pencil over `Q[x]/(m)` that is nonzero
/// at every position for every root of `m`, splitting `m` when a zero
/// divisor shows up.
fn witness_over(sys: &NodeSystem, m: &Poly, record_modulus: bool) -> Search {
    let mut pending = vec![m.monic()];
    while let Some(m) = pending.pop() {
        match witness_at(sys, &m, record_modulus) {
            Ok(Some(w)) => return Search::Found(w),
            Ok(None) => {}
            Err(ZeroDivisor(g)) => {
                let g = Poly::gcd(&g, &m);
                let (rest, _) = m.div_rem(&g);
                pending.push(rest.monic());
                pending.push(g);
            }
        }
    }
    Search::NotFound
}

fn witness_at(sys: &NodeSystem, m: &Poly, record_modulus: bool) -> std::result::Result<Option<Witness>, ZeroDivisor> {
    let k = NumberField::new(m);
    let lambda = k.generator();
    let a: Mat<Poly> = sys
        .a0
        .iter()
        .zip(&sys.a1)
        .map(|(r0, r1)| r0.iter().zip(r1).map(|(x, y)| elem(&k, x, y, &lambda)).collect())
        .collect();
    let basis = nullspace(&k, &a, sys.ncols)?;
    if basis.is_empty() {
        return Ok(None);
    }
    let tries = sys.positions.len() * basis.len() + 1;
    for t in 0..tries as i64 {
        let mut v = vec![Poly::zero(); sys.ncols];
        let mut pow = Poly::one();
        for b in &basis {
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi = k.add(vi, &k.mul(&pow, bi));
            }
            pow = k.mul(&pow, &Poly::constant(q(t)));
        }
        let mut ok = true;
        for range in &sys.positions {
            let g = v[range.clone()].iter().fold(m.clone(), |acc, c| Poly::gcd(&acc, c));
            if g.is_constant() {
                continue;
            }
            if g.degree() == m.degree() {
                ok = false;
                break;
            }
            return Err(ZeroDivisor(g));
        }
        if ok {
            let coefficients = sys
                .unpack(&v)
                .into_iter()
                .map(|pos| pos.into_iter().map(|mut row| row.remove(0)).collect())
                .collect();
            return Ok(Some(Witness {
                modulus: record_modulus.then(|| m.clone()),
                coefficients,
                hom_dim: basis.len(),
            }));
        }
    }
    Ok(None)
}

/// Decides whether the rank-one sheaf maps injectively into `dst` (for some
/// gluing parameter when it is generic) and returns a witness.
fn injective_witness(f: &RankOneTestSheaf, dst: &CycleBundle) -> Result<Option<(Witness, Lambda)>> {
    let sys = test_sheaf_system(f, dst)?;
    if !sys.is_symbolic() {
        return Ok(match witness_over(&sys, &Poly::x(), false) {
            Search::Found(w) => Some((w, f.lambda.clone())),
            Search::NotFound => None,
        });
    }
    let p = pencil(&sys.a0, &sys.a1);
    let rho = generic_rank(&p, sys.ncols).rank;
    let generically = rho < sys.ncols
        && sys.positions.iter().all(|range| {
            let mut pt = p.clone();
            for c in range.clone() {
                let mut row = vec![Poly::zero(); sys.ncols];
                row[c] = Poly::one();
                pt.push(row);
            }
            generic_rank(&pt, sys.ncols).rank > rho
        });
    if generically {
        for i in 1..=64 {
            let l = if i % 2 == 1 { q((i + 1) / 2) } else { q(-i / 2) };
            let m = Poly::linear(-l.clone(), Q::one());
            if let Search::Found(mut w) = witness_over(&sys, &m, true) {
                w.modulus = Some(m);
                return Ok(Some((w, Lambda::Value(l))));
            }
        }
    }
    let (_, g) = rank_drop_locus(&p, sys.ncols);
    let (g, _) = g.strip_x();
    let m = g.squarefree();
    if m.is_constant() {
        return Ok(None);
    }
    Ok(match witness_over(&sys, &m, true) {
        Search::Found(w) => {
            let modulus = w.modulus.clone().expect("recorded");
            let lambda = if modulus.degree() == Some(1) {
                Lambda::Value(-modulus.coeff(0))
            } else {
                Lambda::Generic
            };
            Some((w, lambda))
        }
        Search::NotFound => None,
    })
}

/// Rank-one sheaves on each connected support mapping injectively into
/// `dst` with `χ ≥ threshold(W_Y)`.
fn rank_one_family(
    dst: &CycleBundle,
    c: &PolarizedCycle,
    bound: i64,
    supports: &[Support],
    threshold: impl Fn(i64) -> Q,
    mut emit: impl FnMut(RankOneTestSheaf, Witness),
    too_small: &mut bool,
) -> Result<()> {
    let n = dst.n();
    for &s in supports {
        let comps = s.components(n);
        let chain = i64::from(s.is_chain());
        let chi_min = ceil_q(&threshold(support_weight(c, s)));
        let upper: Vec<i64> = comps.iter().map(|&j| dst.max_entry(j)).collect();
        let top: i64 = upper.iter().sum::<i64>() + chain;
        if top < chi_min {
            continue;
        }
        let lower: Vec<i64> = upper
            .iter()
            .map(|&u| chi_min - chain - (top - chain - u))
            .collect();
        if lower.iter().any(|&l| l < -bound) || upper.iter().any(|&u| u > bound) {
            *too_small = true;
        }
        let lo: Vec<i64> = lower.iter().map(|&l| l.max(-bound)).collect();
        let hi: Vec<i64> = upper.iter().map(|&u| u.min(bound)).collect();
        let lambda = match s {
            Support::Cycle => Lambda::Generic,
            Support::Chain { .. } => Lambda::Value(Q::one()),
        };
        for degrees in boxes(&lo, &hi, chi_min - chain) {
            let f = RankOneTestSheaf::new(n, s, degrees, lambda.clone())?;
            if let Some((w, l)) = injective_witness(&f, dst)? {
                emit(RankOneTestSheaf { lambda: l, ..f }, w);
            }
        }
    }
    Ok(())
}

pub fn enumerate_destabilizers(e: &CycleBundle, c: &PolarizedCycle, bound: i64) -> Result<DestabilizerSearch> {
    c.validate()?;
    let mu = slope_mu(e, c)?;
    let n = e.n();
    let r = e.rank() as i64;
    let total_w: i64 = c.component_weights().iter().sum();
    let mut out = Vec::new();
    let mut too_small = false;

    let proper_chains: Vec<Support> = Support::all(n)
        .into_iter()
        .filter(|s| matches!(s, Support::Chain { len, .. } if *len < n))
        .collect();

    let subs: Vec<Support> = Support::all(n)
        .into_iter()
        .filter(|s| r > 1 || s.is_chain())
        .collect();
    rank_one_family(
        e,
        c,
        bound,
        &subs,
        |w| &mu * q(w),
        |f, w| {
            let chi = euler_char(&f);
            let weight = support_weight(c, f.support);
            out.push(Destabilizer {
                family: Family::SubSheaf,
                slope: Q::new(chi.into(), weight.into()),
                sheaf: f,
                chi,
                weight,
                witness: Some(w),
            });
        },
        &mut too_small,
    )?;

    if r > 1 {
        for &s in &proper_chains {
            let comps = s.components(n);
            let md = e.multidegree();
            let degrees: Vec<i64> = comps.iter().map(|&j| md[j]).collect();
            let chi = degrees.iter().sum::<i64>() - r;
            let weight = r * support_weight(c, s);
            if weight == 0 {
                continue;
            }
            let slope = Q::new(chi.into(), weight.into());
            if slope >= mu {
                out.push(Destabilizer {
                    family: Family::RestrictedSubBundle,
                    sheaf: RankOneTestSheaf::new(n, s, degrees, Lambda::Value(Q::one()))?,
                    chi,
                    weight,
                    slope,
                    witness: None,
                });
            }
        }

        let dual = e.dual();
        let chi_e = euler_char(e);
        let quotients: Vec<Support> = if r == 2 { proper_chains.clone() } else { Support::all(n) };
        rank_one_family(
            &dual,
            c,
            bound,
            &quotients,
            |wy| &mu * q(r * total_w - wy) - q(chi_e),
            |f, w| {
                let chi = chi_e + euler_char(&f);
                let weight = r * total_w - support_weight(c, f.support);
                out.push(Destabilizer {
                    family: Family::QuotientKernel,
                    slope: Q::new(chi.into(), weight.into()),
                    sheaf: f,
                    chi,
                    weight,
                    witness: Some(w),
                });
            },
            &mut too_small,
        )?;
    }

    Ok(DestabilizerSearch {
        slope: mu,
        candidates: out,
        bound_too_small: too_small,
        complete: r == 1 || (r == 2 && n <= 2),
    })
}

pub fn is_stable(e: &CycleBundle, c: &PolarizedCycle, bound: i64) -> Result<StabilityReport> {
    let search = enumerate_destabilizers(e, c, bound)?;
    let mut best: Option<Destabilizer> = None;
    for d in search.candidates {
        if best.as_ref().is_none_or(|b| d.slope > b.slope) {
            best = Some(d);
        }
    }
    let verdict = match &best {
        Some(d) if d.slope > search.slope => Verdict::Unstable,
        Some(_) => Verdict::StrictlySemistable,
        None => Verdict::Stable,
    };
    Ok(StabilityReport {
        verdict,
        slope: search.slope,
        certificate: best,
        bound_too_small: search.bound_too_small,
        complete: search.complete,
    })
}

/// Rechecks a certificate from scratch: the witness against the node
/// conditions (by direct matrix arithmetic, not the assembled system), its
/// nonvanishing on every component, and the slope arithmetic. Returns a
/// description of the first failed check.
pub fn verify_certificate(e: &CycleBundle, c: &PolarizedCycle, d: &Destabilizer) -> std::result::Result<(), String> {
    let mu = slope_mu(e, c).map_err(|x| x.to_string())?;
    let n = e.n();
    let r = e.rank() as i64;
    let weights = c.component_weights();
    let comps = d.sheaf.support.components(n);
    let w_y: i64 = comps.iter().map(|&j| weights[j]).sum();
    let (chi, weight) = match d.family {
        Family::SubSheaf => (euler_char(&d.sheaf), w_y),
        Family::QuotientKernel => (euler_char(e) + euler_char(&d.sheaf), r * weights.iter().sum::<i64>() - w_y),
        Family::RestrictedSubBundle => {
            let Support::Chain { len, .. } = d.sheaf.support else {
                return Err("restricted sub-bundle on the full cycle".into());
            };
            if len >= n {
                return Err("restricted sub-bundle is not proper".into());
            }
            let md = e.multidegree();
            if comps.iter().map(|&j| md[j]).collect::<Vec<_>>() != d.sheaf.degrees {
                return Err("recorded multidegree differs from E on the chain".into());
            }
            (d.sheaf.degrees.iter().sum::<i64>() - r, r * w_y)
        }
    };
    if chi != d.chi || weight != d.weight {
        return Err(format!("recomputed (chi, weight) = ({chi}, {weight})"));
    }
    if weight <= 0 {
        return Err("nonpositive weight".into());
    }
    let slope = Q::new(chi.into(), weight.into());
    if slope != d.slope {
        return Err(format!("recomputed slope {slope}"));
    }
    if slope < mu {
        return Err(format!("slope {slope} is below mu(E) = {mu}"));
    }
    match d.family {
        Family::RestrictedSubBundle => Ok(()),
        Family::SubSheaf => check_witness(e, d),
        Family::QuotientKernel => check_witness(&e.dual(), d),
    }
}

fn check_witness(dst: &CycleBundle, d: &Destabilizer) -> std::result::Result<(), String> {
    let w = d.witness.as_ref().ok_or("missing witness")?;
    let f = &d.sheaf;
    let m = w.modulus.clone().unwrap_or_else(Poly::x);
    if m.degree().unwrap_or(0) == 0 {
        return Err("constant modulus".into());
    }
    let k = NumberField::new(&m);
    let lambda = match &f.lambda {
        Lambda::Value(l) => Poly::constant(l.clone()).rem(&m),
        Lambda::Generic => k.generator(),
    };
    if f.support == Support::Cycle && !Poly::gcd(&lambda, &m).is_constant() {
        return Err("gluing parameter vanishes".into());
    }
    let comps = f.support.components(f.n);
    let len = comps.len();
    if w.coefficients.len() != len {
        return Err("witness has the wrong number of positions".into());
    }
    let rd = dst.rank();
    let mut at_zero = Vec::with_capacity(len);
    let mut at_inf = Vec::with_capacity(len);
    for (t, &j) in comps.iter().enumerate() {
        let rows = &w.coefficients[t];
        if rows.len() != rd {
            return Err(format!("position {t} has {} rows", rows.len()));
        }
        let mut z = Vec::with_capacity(rd);
        let mut i = Vec::with_capacity(rd);
        for (b, coeffs) in rows.iter().enumerate() {
            let delta = dst.splits()[j][b] - f.degrees[t];
            if delta < 0 {
                if coeffs.iter().any(|x| !x.is_zero()) {
                    return Err(format!("entry ({t}, {b}) must vanish by degree"));
                }
                z.push(Poly::zero());
                i.push(Poly::zero());
                continue;
            }
            if coeffs.len() as i64 > delta + 1 {
                return Err(format!("entry ({t}, {b}) exceeds degree {delta}"));
            }
            z.push(coeffs.first().cloned().unwrap_or_default().rem(&m));
            i.push(coeffs.get(delta as usize).cloned().unwrap_or_default().rem(&m));
        }
        let g = rows.iter().flatten().fold(m.clone(), |acc, x| Poly::gcd(&acc, x));
        if !g.is_constant() {
            return Err(format!("witness vanishes on component {j} at a root of {g}"));
        }
        at_zero.push(z);
        at_inf.push(i);
    }
    let glued = |t: usize| match f.support {
        Support::Cycle => true,
        Support::Chain { .. } => t + 1 < len,
    };
    for t in (0..len).filter(|&t| glued(t)) {
        let next = (t + 1) % len;
        let g_dst = &dst.gluings()[comps[t]];
        let g_src = if f.support == Support::Cycle && t + 1 == len {
            lambda.clone()
        } else {
            k.one()
        };
        for b in 0..rd {
            let lhs = (0..rd).fold(Poly::zero(), |acc, x| {
                k.add(&acc, &k.mul(&Poly::constant(g_dst[b][x].clone()), &at_inf[t][x]))
            });
            let rhs = k.mul(&at_zero[next][b], &g_src);
            if !k.sub(&lhs, &rhs).is_zero() {
                return Err(format!("node condition fails after position {t}, row {b}"));
            }
        }
    }
    if f.support.is_chain()
        && (at_zero[0].iter().any(|x| !x.is_zero()) || at_inf[len - 1].iter().any(|x| !x.is_zero()))
    {
        return Err("chain witness does not vanish at the ends".into());
    }
    Ok(())
}
