//! Recovers the cubic form and `c2` pairings of a Calabi–Yau threefold `M`,
//! elliptic over a surface, from pushforward identities `P_X = π_{M*}(F)`.
//!
//! Each sample gives the base character `A` of the `X` side and the Chern
//! character of `F` as a product of factors `r exp(D / r)`. Pairing both
//! sides of `ch(π_! F) = π_*(ch F · td_{M/S})` with `1, h, h²` gives three
//! equations, affine in the unknown intersection numbers.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::chern::todd;
use super::ring::{Class, RingSpec};
use super::symbolic::{MPoly, TOP_MONOMIALS};
use crate::arith::linalg::{rref, solve_q, Solution};
use crate::arith::field::Rationals;
use crate::arith::Q;
use crate::error::{Error, Result};

/// `rank · exp((theta Θ + h H) / rank)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Factor {
    pub rank: Q,
    pub theta: Q,
    pub h: Q,
}

impl Factor {
    pub fn character(&self) -> Result<MPoly> {
        if self.rank.is_zero() {
            return Err(Error::Config("factor of rank zero".into()));
        }
        let d = MPoly::divisor(&self.theta / &self.rank, &self.h / &self.rank);
        Ok(d.exp().scale(&self.rank))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub label: String,
    pub factors: Vec<Factor>,
    /// Base character of the `X` side, in the base ring's basis.
    pub x_side: Class,
    /// Multiple of `h` by which the `X` side is twisted relative to
    /// `π_{M*}(F)`.
    pub twist: Q,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Solved,
    Underdetermined,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualEquation {
    pub coefficients: BTreeMap<String, String>,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub unknowns: Vec<String>,
    pub equations: usize,
    pub rank: usize,
    /// Unknowns pinned by the system.
    pub values: BTreeMap<String, String>,
    pub unresolved: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub particular: Option<BTreeMap<String, String>>,
    pub null_directions: Vec<BTreeMap<String, String>>,
    /// Reduced equations in the unresolved unknowns.
    pub residual: Vec<ResidualEquation>,
    pub structural: BTreeMap<String, String>,
    pub twist_handling: String,
}

const TWIST_NOTE: &str = "each sample declares its twist t; the X side is multiplied by exp(-t h) before comparison";

/// The base's hyperplane class and `∫ h²`.
fn hyperplane(base: &RingSpec) -> Result<(usize, Q)> {
    if base.dim() != 2 {
        return Err(Error::Config(format!("base {} is not a surface", base.name())));
    }
    let h: Vec<usize> = (0..base.len()).filter(|&i| base.basis()[i].degree == 2).collect();
    if h.len() != 1 {
        return Err(Error::Config(format!(
            "base {} must have exactly one degree-2 generator, found {}",
            base.name(),
            h.len()
        )));
    }
    let hc = base.basis_class(h[0]);
    let hh = base.integrate(&base.mul(&hc, &hc));
    if hh.is_zero() {
        return Err(Error::Config("the base hyperplane class has zero self-intersection".into()));
    }
    Ok((h[0], hh))
}

/// `π^* y` on `M`, with `π^* h = H` and `π^* pt = H² / ∫h²`.
fn pull_to_m(base: &RingSpec, h: usize, hh: &Q, y: &Class) -> MPoly {
    let top = base.point_index();
    MPoly::constant(y[0].clone())
        .add(&MPoly::monomial((0, 1, 0), y[h].clone()))
        .add(&MPoly::monomial((0, 2, 0), &y[top] / hh))
}

/// Assembled linear system over all six top monomials.
struct System {
    rows: Vec<Vec<Q>>,
    rhs: Vec<Q>,
}

fn assemble(base: &RingSpec, samples: &[Sample]) -> Result<System> {
    let (h, hh) = hyperplane(base)?;
    let td_m = MPoly::one().add(&MPoly::monomial((0, 0, 1), Q::new(1.into(), 12.into())));
    let td_rel = td_m.mul(&pull_to_m(base, h, &hh, &base.inverse_unipotent(&todd(base))));
    let hc = base.basis_class(h);
    let tests = [base.one(), hc.clone(), base.mul(&hc, &hc)];
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for s in samples {
        if s.x_side.len() != base.len() {
            return Err(Error::Config(format!(
                "sample {}: X side has {} coordinates, base has {}",
                s.label,
                s.x_side.len(),
                base.len()
            )));
        }
        let mut ch = MPoly::one();
        for f in &s.factors {
            ch = ch.mul(&f.character()?);
        }
        let integrand = ch.mul(&td_rel);
        let untwisted = base.mul(&s.x_side, &base.exp(&base.scale(&hc, &-s.twist.clone())));
        for (k, y) in tests.iter().enumerate() {
            rows.push(integrand.mul(&MPoly::monomial((0, k as u32, 0), Q::one())).integral_form());
            rhs.push(base.integrate(&base.mul(&untwisted, y)));
        }
    }
    Ok(System { rows, rhs })
}

fn named(names: &[String], v: &[Q]) -> BTreeMap<String, String> {
    names.iter().zip(v).map(|(n, x)| (n.clone(), x.to_string())).collect()
}

/// Solves for the top monomials not fixed by `constraints`. `H^3 = 0` is
/// always imposed; a conflicting value for it is a configuration error.
pub fn solve_moduli_invariants(
    base: &RingSpec,
    samples: &[Sample],
    constraints: &BTreeMap<String, Q>,
) -> Result<SolveReport> {
    let mut fixed: BTreeMap<String, Q> = BTreeMap::new();
    fixed.insert("H^3".into(), Q::zero());
    for (name, v) in constraints {
        if !TOP_MONOMIALS.iter().any(|(n, _)| n == name) {
            return Err(Error::Config(format!("unknown invariant {name}")));
        }
        if name == "H^3" && !v.is_zero() {
            return Err(Error::Config("H^3 vanishes for a class pulled back from a surface".into()));
        }
        fixed.insert(name.clone(), v.clone());
    }
    let free: Vec<usize> = (0..TOP_MONOMIALS.len())
        .filter(|&i| !fixed.contains_key(TOP_MONOMIALS[i].0))
        .collect();
    let names: Vec<String> = free.iter().map(|&i| TOP_MONOMIALS[i].0.to_string()).collect();

    let sys = assemble(base, samples)?;
    let mut a = Vec::with_capacity(sys.rows.len());
    let mut b = Vec::with_capacity(sys.rows.len());
    for (row, r) in sys.rows.iter().zip(&sys.rhs) {
        let mut rhs = r.clone();
        for (i, (name, _)) in TOP_MONOMIALS.iter().enumerate() {
            if let Some(v) = fixed.get(*name) {
                rhs -= &row[i] * v;
            }
        }
        a.push(free.iter().map(|&i| row[i].clone()).collect::<Vec<Q>>());
        b.push(rhs);
    }

    let n = names.len();
    let structural = fixed.iter().map(|(k, v)| (k.clone(), v.to_string())).collect();
    let (particular, kernel, rank) = match solve_q(&a, &b, n) {
        Solution::Inconsistent { rank } => return Err(Error::InconsistentSystem { rank }),
        Solution::Solved { particular, kernel, rank } => (particular, kernel, rank),
    };
    let pinned: Vec<bool> = (0..n).map(|i| kernel.iter().all(|k| k[i].is_zero())).collect();
    let values = (0..n)
        .filter(|&i| pinned[i])
        .map(|i| (names[i].clone(), particular[i].to_string()))
        .collect();
    let unresolved: Vec<String> = (0..n).filter(|&i| !pinned[i]).map(|i| names[i].clone()).collect();
    if kernel.is_empty() {
        return Ok(SolveReport {
            status: SolveStatus::Solved,
            unknowns: names,
            equations: a.len(),
            rank,
            values,
            unresolved,
            particular: None,
            null_directions: Vec::new(),
            residual: Vec::new(),
            structural,
            twist_handling: TWIST_NOTE.into(),
        });
    }

    let mut aug: Vec<Vec<Q>> = a
        .iter()
        .zip(&b)
        .map(|(row, r)| row.iter().cloned().chain(std::iter::once(r.clone())).collect())
        .collect();
    let pivots = rref(&Rationals, &mut aug, n + 1).expect("Q is a field");
    let residual = aug
        .iter()
        .take(pivots.len())
        .filter(|row| (0..n).any(|i| !pinned[i] && !row[i].is_zero()))
        .map(|row| ResidualEquation {
            coefficients: (0..n)
                .filter(|&i| !row[i].is_zero())
                .map(|i| (names[i].clone(), row[i].to_string()))
                .collect(),
            rhs: row[n].to_string(),
        })
        .collect();
    Ok(SolveReport {
        status: SolveStatus::Underdetermined,
        unknowns: names.clone(),
        equations: a.len(),
        rank,
        values,
        unresolved,
        particular: Some(named(&names, &particular)),
        null_directions: kernel
            .iter()
            .map(|k| {
                names
                    .iter()
                    .zip(k)
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(n, x)| (n.clone(), x.to_string()))
                    .collect()
            })
            .collect(),
        residual,
        structural,
        twist_handling: TWIST_NOTE.into(),
    })
}
