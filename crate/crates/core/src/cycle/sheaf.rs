//! Sheaves on a Kodaira `I_n` fiber: a cycle of `n` rational curves where
//! the point at infinity of component `j` is glued to the origin of
//! component `j + 1 (mod n)`.
//!
//! On each component a locally free sheaf splits as `⊕ O(k_i)`; a section of
//! `O(k)` is a polynomial of degree at most `k` in the affine coordinate,
//! evaluated at the origin by its constant coefficient and at infinity by
//! its `z^k` coefficient. Gluing matrices identify the fiber at infinity of
//! component `j` with the fiber at the origin of component `j + 1`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::linalg::{rank_q, Mat};
use crate::arith::{q, Q};
use crate::error::{Error, Result};

/// A smooth marked point with its multiplicity in the polarization
/// `L = O(Σ a_i P_i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Mark {
    pub component: usize,
    /// Affine coordinate; nonzero, so distinct from both nodes.
    pub coordinate: Q,
    pub weight: i64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolarizedCycle {
    pub n: usize,
    pub marks: Vec<Mark>,
}

impl PolarizedCycle {
    pub fn new(n: usize, marks: Vec<Mark>) -> Result<Self> {
        let c = PolarizedCycle { n, marks };
        c.validate()?;
        Ok(c)
    }

    /// One marked point (coordinate 1) per component with the given weights.
    pub fn with_weights(weights: &[i64]) -> Result<Self> {
        let marks = weights
            .iter()
            .enumerate()
            .map(|(j, &w)| Mark {
                component: j,
                coordinate: Q::one(),
                weight: w,
            })
            .collect();
        PolarizedCycle::new(weights.len(), marks)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::HypothesisViolation("cycle needs at least one component".into()));
        }
        for m in &self.marks {
            if m.component >= self.n {
                return Err(Error::HypothesisViolation(format!(
                    "marked point on component {} of an I_{} cycle",
                    m.component, self.n
                )));
            }
            if m.weight <= 0 {
                return Err(Error::HypothesisViolation(format!(
                    "polarization weight {} is not positive",
                    m.weight
                )));
            }
            if m.coordinate.is_zero() {
                return Err(Error::HypothesisViolation(
                    "marked point sits on a node".into(),
                ));
            }
        }
        Ok(())
    }

    /// Total weight of the marks lying on each component.
    pub fn component_weights(&self) -> Vec<i64> {
        let mut w = vec![0; self.n];
        for m in &self.marks {
            w[m.component] += m.weight;
        }
        w
    }
}

/// A locally free sheaf on `I_n`, presented by splitting types and gluings.
#[derive(Clone, Debug, PartialEq)]
pub struct CycleBundle {
    n: usize,
    rank: usize,
    splits: Vec<Vec<i64>>,
    gluings: Vec<Mat<Q>>,
}

impl CycleBundle {
    pub fn new(splits: Vec<Vec<i64>>, gluings: Vec<Mat<Q>>) -> Result<Self> {
        let n = splits.len();
        if n == 0 {
            return Err(Error::InvalidBundle("no components".into()));
        }
        let rank = splits[0].len();
        if rank == 0 {
            return Err(Error::InvalidRank(0));
        }
        if splits.iter().any(|s| s.len() != rank) {
            return Err(Error::InvalidBundle("splitting types of unequal length".into()));
        }
        if gluings.len() != n {
            return Err(Error::InvalidBundle(format!(
                "{} gluing matrices for {} nodes",
                gluings.len(),
                n
            )));
        }
        for (j, g) in gluings.iter().enumerate() {
            if g.len() != rank || g.iter().any(|row| row.len() != rank) {
                return Err(Error::InvalidBundle(format!("gluing {j} is not {rank}x{rank}")));
            }
            if rank_q(g, rank) != rank {
                return Err(Error::InvalidBundle(format!("gluing {j} is not invertible")));
            }
        }
        Ok(CycleBundle {
            n,
            rank,
            splits,
            gluings,
        })
    }

    /// `O^rank` with identity gluings.
    pub fn trivial(n: usize, rank: usize) -> Self {
        CycleBundle::new(vec![vec![0; rank]; n], vec![identity(rank); n]).unwrap()
    }

    /// Line bundle of the given multidegree whose gluing is `λ` at the last
    /// node and 1 elsewhere.
    pub fn line(multidegree: &[i64], lambda: Q) -> Result<Self> {
        let n = multidegree.len();
        let mut gluings = vec![identity(1); n];
        if n > 0 {
            gluings[n - 1] = vec![vec![lambda]];
        }
        CycleBundle::new(multidegree.iter().map(|&k| vec![k]).collect(), gluings)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn splits(&self) -> &[Vec<i64>] {
        &self.splits
    }

    pub fn gluings(&self) -> &[Mat<Q>] {
        &self.gluings
    }

    pub fn multidegree(&self) -> Vec<i64> {
        self.splits.iter().map(|s| s.iter().sum()).collect()
    }

    pub fn total_degree(&self) -> i64 {
        self.multidegree().iter().sum()
    }

    /// Largest splitting entry on component `j`.
    pub fn max_entry(&self, j: usize) -> i64 {
        *self.splits[j].iter().max().unwrap()
    }

    /// Dual bundle: negated splitting types, inverse-transposed gluings.
    pub fn dual(&self) -> CycleBundle {
        CycleBundle {
            n: self.n,
            rank: self.rank,
            splits: self.splits.iter().map(|s| s.iter().map(|k| -k).collect()).collect(),
            gluings: self
                .gluings
                .iter()
                .map(|g| transpose(&inverse(g)))
                .collect(),
        }
    }

    /// Tensor product; summand `(a, b)` sits at index `a * rank(other) + b`.
    pub fn tensor(&self, other: &CycleBundle) -> Result<CycleBundle> {
        if self.n != other.n {
            return Err(Error::InvalidBundle("tensor of bundles on different cycles".into()));
        }
        let splits = self
            .splits
            .iter()
            .zip(&other.splits)
            .map(|(s, t)| s.iter().flat_map(|a| t.iter().map(move |b| a + b)).collect())
            .collect();
        let gluings = self
            .gluings
            .iter()
            .zip(&other.gluings)
            .map(|(g, h)| kronecker(g, h))
            .collect();
        Ok(CycleBundle {
            n: self.n,
            rank: self.rank * other.rank,
            splits,
            gluings,
        })
    }

    /// Determinant line bundle, gluing by the determinants of the gluings.
    pub fn det(&self) -> CycleBundle {
        let gluings = self.gluings.iter().map(|g| vec![vec![determinant(g)]]).collect();
        CycleBundle {
            n: self.n,
            rank: 1,
            splits: self.multidegree().into_iter().map(|k| vec![k]).collect(),
            gluings,
        }
    }
}

/// Where a rank-one test sheaf lives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Support {
    /// The whole cycle, locally free.
    Cycle,
    /// Components `start, start + 1, …` (`len` of them, mod `n`), glued at
    /// their interior nodes only. With `len = n` this is the partial
    /// normalization at the node preceding `start`.
    Chain { start: usize, len: usize },
}

impl Support {
    pub fn len(&self, n: usize) -> usize {
        match self {
            Support::Cycle => n,
            Support::Chain { len, .. } => *len,
        }
    }

    /// Component indices in order along the support.
    pub fn components(&self, n: usize) -> Vec<usize> {
        match self {
            Support::Cycle => (0..n).collect(),
            Support::Chain { start, len } => (0..*len).map(|t| (start + t) % n).collect(),
        }
    }

    pub fn is_chain(&self) -> bool {
        matches!(self, Support::Chain { .. })
    }

    /// Every connected support of a cycle with `n` components.
    pub fn all(n: usize) -> Vec<Support> {
        let mut out = vec![Support::Cycle];
        for len in 1..=n {
            for start in 0..n {
                out.push(Support::Chain { start, len });
            }
        }
        out
    }
}

/// Gluing parameter of a full-cycle rank-one sheaf.
#[derive(Clone, Debug, PartialEq)]
pub enum Lambda {
    Value(Q),
    /// A transcendental parameter.
    Generic,
}

/// Rank-one torsion-free sheaf on a connected subcurve: a line bundle on a
/// chain, or on the full cycle with gluing `λ` at the last node.
#[derive(Clone, Debug, PartialEq)]
pub struct RankOneTestSheaf {
    pub n: usize,
    pub support: Support,
    /// Degrees along the support, in the order of [`Support::components`].
    pub degrees: Vec<i64>,
    pub lambda: Lambda,
}

impl RankOneTestSheaf {
    pub fn new(n: usize, support: Support, degrees: Vec<i64>, lambda: Lambda) -> Result<Self> {
        if let Support::Chain { start, len } = support {
            if start >= n || len == 0 || len > n {
                return Err(Error::InvalidBundle(format!(
                    "chain (start {start}, length {len}) on I_{n}"
                )));
            }
        }
        if degrees.len() != support.len(n) {
            return Err(Error::InvalidBundle("multidegree does not match support".into()));
        }
        if let Lambda::Value(l) = &lambda {
            if l.is_zero() {
                return Err(Error::InvalidBundle("gluing parameter must be nonzero".into()));
            }
        }
        Ok(RankOneTestSheaf {
            n,
            support,
            degrees,
            lambda,
        })
    }

    pub fn chain(n: usize, start: usize, degrees: Vec<i64>) -> Result<Self> {
        let len = degrees.len();
        RankOneTestSheaf::new(n, Support::Chain { start, len }, degrees, Lambda::Value(Q::one()))
    }

    pub fn degree(&self) -> i64 {
        self.degrees.iter().sum()
    }

    /// Rank at a smooth point of component `j`.
    pub fn rank_on(&self, j: usize) -> usize {
        usize::from(self.support.components(self.n).contains(&j))
    }
}

/// Either kind of sheaf, for the slope and Euler characteristic.
#[derive(Clone, Copy, Debug)]
pub enum SheafRef<'a> {
    Bundle(&'a CycleBundle),
    TestSheaf(&'a RankOneTestSheaf),
}

impl<'a> From<&'a CycleBundle> for SheafRef<'a> {
    fn from(e: &'a CycleBundle) -> Self {
        SheafRef::Bundle(e)
    }
}

impl<'a> From<&'a RankOneTestSheaf> for SheafRef<'a> {
    fn from(f: &'a RankOneTestSheaf) -> Self {
        SheafRef::TestSheaf(f)
    }
}

/// χ = degree on the genus-one cycle, degree + rank on a genus-zero chain.
pub fn euler_char<'a>(f: impl Into<SheafRef<'a>>) -> i64 {
    match f.into() {
        SheafRef::Bundle(e) => e.total_degree(),
        SheafRef::TestSheaf(t) => t.degree() + i64::from(t.support.is_chain()),
    }
}

/// `μ_L(F) = χ(F) / Σ a_i rk_{P_i}(F)`.
pub fn slope_mu<'a>(f: impl Into<SheafRef<'a>>, c: &PolarizedCycle) -> Result<Q> {
    let f = f.into();
    let (n, chi) = match f {
        SheafRef::Bundle(e) => (e.n(), euler_char(e)),
        SheafRef::TestSheaf(t) => (t.n, euler_char(t)),
    };
    if n != c.n {
        return Err(Error::HypothesisViolation("sheaf and polarization live on different cycles".into()));
    }
    let denom: i64 = c
        .marks
        .iter()
        .map(|m| {
            let rk = match f {
                SheafRef::Bundle(e) => e.rank(),
                SheafRef::TestSheaf(t) => t.rank_on(m.component),
            };
            m.weight * rk as i64
        })
        .sum();
    if denom == 0 {
        return Err(Error::ZeroDenominator);
    }
    Ok(Q::new(chi.into(), denom.into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Definiteness {
    Ample,
    AntiAmple,
    Neither,
}

/// Ample on a cycle means positive degree on every component.
pub fn classify(multidegree: &[i64]) -> Definiteness {
    if multidegree.iter().all(|&k| k > 0) {
        Definiteness::Ample
    } else if multidegree.iter().all(|&k| k < 0) {
        Definiteness::AntiAmple
    } else {
        Definiteness::Neither
    }
}

/// The determinant as a full-cycle rank-one sheaf, with its classification.
pub fn det_bundle(e: &CycleBundle) -> (RankOneTestSheaf, Definiteness) {
    let md = e.multidegree();
    let lambda = e
        .gluings()
        .iter()
        .fold(Q::one(), |acc, g| acc * determinant(g));
    let class = classify(&md);
    let sheaf = RankOneTestSheaf::new(e.n(), Support::Cycle, md, Lambda::Value(lambda))
        .expect("determinant of invertible gluings is nonzero");
    (sheaf, class)
}

/// One marked point per component weighted by `|deg|` of `det E` or
/// `-det E`, whichever is ample.
pub fn induced_polarization(det: &RankOneTestSheaf) -> Result<PolarizedCycle> {
    if det.support != Support::Cycle || classify(&det.degrees) == Definiteness::Neither {
        return Err(Error::NotDefinite(det.degrees.clone()));
    }
    let weights: Vec<i64> = det.degrees.iter().map(|k| k.abs()).collect();
    PolarizedCycle::with_weights(&weights)
}

/// Evenly distributed splitting with a cyclic permutation gluing scaled by
/// `λ` at the last node; a stand-in for the Atiyah bundles.
pub fn make_cyclic_bundle(n: usize, rank: i64, degree: i64, lambda: Q) -> Result<CycleBundle> {
    if rank <= 0 {
        return Err(Error::InvalidRank(rank));
    }
    if n == 0 {
        return Err(Error::InvalidBundle("no components".into()));
    }
    if lambda.is_zero() {
        return Err(Error::InvalidBundle("gluing parameter must be nonzero".into()));
    }
    let r = rank as usize;
    let slots = (n * r) as i64;
    let base = degree.div_euclid(slots);
    let extra = degree.rem_euclid(slots);
    let splits = (0..n)
        .map(|j| {
            (0..r)
                .map(|i| base + i64::from(((j * r + i) as i64) < extra))
                .collect()
        })
        .collect();
    let mut gluings = vec![identity(r); n];
    gluings[n - 1] = (0..r)
        .map(|i| {
            (0..r)
                .map(|k| if k == (i + 1) % r { lambda.clone() } else { Q::zero() })
                .collect()
        })
        .collect();
    CycleBundle::new(splits, gluings)
}

pub fn identity(r: usize) -> Mat<Q> {
    (0..r)
        .map(|i| (0..r).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect()
}

pub fn transpose(m: &Mat<Q>) -> Mat<Q> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn matmul(a: &Mat<Q>, b: &Mat<Q>) -> Mat<Q> {
    let k = b.len();
    let cols = if k == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..k).fold(Q::zero(), |acc, t| acc + &row[t] * &b[t][j]))
                .collect()
        })
        .collect()
}

pub fn kronecker(a: &Mat<Q>, b: &Mat<Q>) -> Mat<Q> {
    let (ra, rb) = (a.len(), b.len());
    (0..ra * rb)
        .map(|i| {
            (0..ra * rb)
                .map(|j| &a[i / rb][j / rb] * &b[i % rb][j % rb])
                .collect()
        })
        .collect()
}

/// Gauss–Jordan inverse; panics on a singular matrix.
pub fn inverse(m: &Mat<Q>) -> Mat<Q> {
    let r = m.len();
    let mut aug: Mat<Q> = m
        .iter()
        .zip(identity(r))
        .map(|(row, id)| row.iter().cloned().chain(id).collect())
        .collect();
    let pivots = crate::arith::linalg::rref(&crate::arith::field::Rationals, &mut aug, 2 * r)
        .expect("Q is a field");
    assert!(pivots.len() >= r && pivots[r - 1] < r, "singular matrix");
    aug.into_iter().map(|row| row[r..].to_vec()).collect()
}

pub fn determinant(m: &Mat<Q>) -> Q {
    let r = m.len();
    let mut a = m.clone();
    let mut det = Q::one();
    for col in 0..r {
        let Some(p) = (col..r).find(|&i| !a[i][col].is_zero()) else {
            return Q::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        det *= &a[col][col];
        let inv = Q::one() / &a[col][col];
        for i in col + 1..r {
            let f = &a[i][col] * &inv;
            if f.is_zero() {
                continue;
            }
            for j in col..r {
                let t = &f * &a[col][j];
                a[i][j] -= t;
            }
        }
    }
    det
}

/// Integer matrix helper for tests and generators.
pub fn int_matrix(rows: &[&[i64]]) -> Mat<Q> {
    rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q_frac;

    #[test]
    fn euler_characteristics() {
        assert_eq!(euler_char(&CycleBundle::trivial(2, 1)), 0);
        assert_eq!(euler_char(&CycleBundle::line(&[1, 0], q(1)).unwrap()), 1);
        let chain = RankOneTestSheaf::chain(2, 0, vec![-1]).unwrap();
        assert_eq!(euler_char(&chain), 0);
    }

    #[test]
    fn slopes() {
        let c1 = PolarizedCycle::with_weights(&[1]).unwrap();
        assert_eq!(slope_mu(&CycleBundle::trivial(1, 1), &c1).unwrap(), q(0));

        let c2 = PolarizedCycle::with_weights(&[1, 1]).unwrap();
        let e = CycleBundle::new(
            vec![vec![0, 1], vec![0, 0]],
            vec![identity(2), identity(2)],
        )
        .unwrap();
        assert_eq!(slope_mu(&e, &c2).unwrap(), q_frac(1, 4));

        let chain = RankOneTestSheaf::chain(2, 0, vec![0]).unwrap();
        assert_eq!(slope_mu(&chain, &c2).unwrap(), q(1));

        let miss = PolarizedCycle::new(
            2,
            vec![Mark { component: 1, coordinate: q(1), weight: 1 }],
        )
        .unwrap();
        assert_eq!(slope_mu(&chain, &miss), Err(Error::ZeroDenominator));
    }

    #[test]
    fn determinant_classification() {
        let e = CycleBundle::new(vec![vec![0, 1], vec![0, 1]], vec![identity(2), identity(2)]).unwrap();
        let (d, class) = det_bundle(&e);
        assert_eq!(d.degrees, vec![1, 1]);
        assert_eq!(class, Definiteness::Ample);
        assert_eq!(det_bundle(&CycleBundle::trivial(2, 2)).1, Definiteness::Neither);
        let e = CycleBundle::new(vec![vec![1, 1], vec![-1, 0]], vec![identity(2), identity(2)]).unwrap();
        assert_eq!(det_bundle(&e).1, Definiteness::Neither);
    }

    #[test]
    fn induced_polarizations() {
        let mk = |degs: Vec<i64>| {
            RankOneTestSheaf::new(degs.len(), Support::Cycle, degs, Lambda::Value(q(1))).unwrap()
        };
        assert_eq!(induced_polarization(&mk(vec![1, 1])).unwrap().component_weights(), vec![1, 1]);
        assert_eq!(induced_polarization(&mk(vec![-2, -1])).unwrap().component_weights(), vec![2, 1]);
        assert_eq!(induced_polarization(&mk(vec![1, 0])), Err(Error::NotDefinite(vec![1, 0])));
    }

    #[test]
    fn dual_is_involutive() {
        let e = CycleBundle::new(
            vec![vec![2, -1], vec![0, 3]],
            vec![int_matrix(&[&[1, 2], &[3, 4]]), int_matrix(&[&[0, 1], &[1, 1]])],
        )
        .unwrap();
        assert_eq!(e.dual().dual(), e);
        assert_eq!(e.dual().total_degree(), -e.total_degree());
    }

    #[test]
    fn cyclic_bundle_shape() {
        let e = make_cyclic_bundle(1, 2, 1, q(3)).unwrap();
        assert_eq!(e.splits(), &[vec![1, 0]]);
        assert_eq!(e.gluings()[0], int_matrix(&[&[0, 3], &[3, 0]]));
        let l = make_cyclic_bundle(2, 1, 0, q(5)).unwrap();
        assert_eq!(l, CycleBundle::line(&[0, 0], q(5)).unwrap());
        assert_eq!(make_cyclic_bundle(1, 0, 0, q(1)), Err(Error::InvalidRank(0)));
    }

    #[test]
    fn linear_algebra_helpers() {
        let m = int_matrix(&[&[2, 1], &[7, 4]]);
        assert_eq!(determinant(&m), q(1));
        assert_eq!(matmul(&m, &inverse(&m)), identity(2));
        assert_eq!(determinant(&kronecker(&m, &m)), q(1));
    }
}
