//! Finite graded presentations of even-degree cohomology rings.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::linalg::rank_q;
use crate::arith::Q;
use crate::error::{Error, Result};

/// A cohomology class as coordinates in the ring's basis.
pub type Class = Vec<Q>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub name: String,
    /// Real degree: 0, 2, 4 or 6.
    pub degree: u32,
}

/// Images of the basis of a fibration's total space under `π_*`, and of the
/// base basis under `π^*`.
#[derive(Clone, Debug, PartialEq)]
pub struct FibrationData {
    pub base: String,
    pub pushforward: Option<Vec<Class>>,
    pub pullback: Option<Vec<Class>>,
    pub relative_todd: Option<Class>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RingSpec {
    name: String,
    basis: Vec<BasisElement>,
    index: BTreeMap<String, usize>,
    /// `table[i][j]` is the product of basis elements `i` and `j`.
    table: Vec<Vec<Class>>,
    top: usize,
    c1: Class,
    c2: Class,
    c3: Class,
    calabi_yau: bool,
    /// Declared values of `∫ b_i b_j`, checked against the table.
    declared_pairing: Vec<(usize, usize, Q)>,
    fibration: Option<FibrationData>,
}

/// Incremental construction of a [`RingSpec`] by name.
#[derive(Clone, Debug, Default)]
pub struct RingBuilder {
    name: String,
    basis: Vec<BasisElement>,
    products: Vec<(String, String, Vec<(String, Q)>)>,
    chern: [Vec<(String, Q)>; 3],
    calabi_yau: bool,
    pairing: Vec<(String, String, Q)>,
    base: Option<String>,
    pushforward: Option<Vec<(String, Vec<(String, Q)>)>>,
    pullback: Option<Vec<(String, Vec<(String, Q)>)>>,
    relative_todd: Option<Vec<(String, Q)>>,
}

fn terms(t: &[(&str, Q)]) -> Vec<(String, Q)> {
    t.iter().map(|(n, c)| (n.to_string(), c.clone())).collect()
}

impl RingBuilder {
    pub fn new(name: &str) -> Self {
        RingBuilder {
            name: name.to_string(),
            ..Default::default()
        }
    }

    pub fn basis(mut self, name: &str, degree: u32) -> Self {
        self.basis.push(BasisElement {
            name: name.to_string(),
            degree,
        });
        self
    }

    pub fn product(mut self, a: &str, b: &str, result: &[(&str, Q)]) -> Self {
        self.products.push((a.to_string(), b.to_string(), terms(result)));
        self
    }

    pub fn product_terms(mut self, a: String, b: String, result: Vec<(String, Q)>) -> Self {
        self.products.push((a, b, result));
        self
    }

    /// Chern class `c_k` of the tangent bundle, `k` in 1..=3.
    pub fn chern(mut self, k: usize, class: Vec<(String, Q)>) -> Self {
        self.chern[k - 1] = class;
        self
    }

    pub fn calabi_yau(mut self, cy: bool) -> Self {
        self.calabi_yau = cy;
        self
    }

    pub fn pairing(mut self, a: String, b: String, value: Q) -> Self {
        self.pairing.push((a, b, value));
        self
    }

    pub fn fibration(
        mut self,
        base: String,
        pushforward: Option<Vec<(String, Vec<(String, Q)>)>>,
        pullback: Option<Vec<(String, Vec<(String, Q)>)>>,
        relative_todd: Option<Vec<(String, Q)>>,
    ) -> Self {
        self.base = Some(base);
        self.pushforward = pushforward;
        self.pullback = pullback;
        self.relative_todd = relative_todd;
        self
    }

    /// Checks names and shapes. Pushforward and pullback rows are resolved
    /// against `base` when given, and kept by name otherwise.
    pub fn build_over(self, base: Option<&RingSpec>) -> Result<RingSpec> {
        if self.basis.is_empty() {
            return Err(Error::Config("empty basis".into()));
        }
        let mut index = BTreeMap::new();
        for (i, b) in self.basis.iter().enumerate() {
            if ![0, 2, 4, 6].contains(&b.degree) {
                return Err(Error::Config(format!("basis element {} has degree {}", b.name, b.degree)));
            }
            if index.insert(b.name.clone(), i).is_some() {
                return Err(Error::Config(format!("duplicate basis element {}", b.name)));
            }
        }
        if self.basis[0].degree != 0 || self.basis.iter().skip(1).any(|b| b.degree == 0) {
            return Err(Error::Config("the unit must be the only degree-0 element and come first".into()));
        }
        let top_degree = self.basis.iter().map(|b| b.degree).max().unwrap();
        let tops: Vec<usize> = (0..self.basis.len())
            .filter(|&i| self.basis[i].degree == top_degree)
            .collect();
        if tops.len() != 1 {
            return Err(Error::Config("top degree must be one-dimensional".into()));
        }
        let len = self.basis.len();
        let resolve = |t: &[(String, Q)], idx: &BTreeMap<String, usize>, len: usize| -> Result<Class> {
            let mut c = vec![Q::zero(); len];
            for (name, v) in t {
                let i = idx
                    .get(name)
                    .ok_or_else(|| Error::Config(format!("unknown basis element {name}")))?;
                c[*i] += v;
            }
            Ok(c)
        };
        let mut table = vec![vec![vec![Q::zero(); len]; len]; len];
        let mut declared = vec![vec![false; len]; len];
        for i in 0..len {
            table[0][i][i] = Q::one();
            table[i][0][i] = Q::one();
        }
        for (a, b, res) in &self.products {
            let ia = *index.get(a).ok_or_else(|| Error::Config(format!("unknown basis element {a}")))?;
            let ib = *index.get(b).ok_or_else(|| Error::Config(format!("unknown basis element {b}")))?;
            if declared[ia][ib] {
                return Err(Error::Config(format!("product {a} * {b} declared twice")));
            }
            let c = resolve(res, &index, len)?;
            declared[ia][ib] = true;
            table[ia][ib] = c.clone();
            if !declared[ib][ia] {
                table[ib][ia] = c;
            }
        }
        let [c1, c2, c3] = [
            resolve(&self.chern[0], &index, len)?,
            resolve(&self.chern[1], &index, len)?,
            resolve(&self.chern[2], &index, len)?,
        ];
        let mut declared_pairing = Vec::new();
        for (a, b, v) in &self.pairing {
            let ia = *index.get(a).ok_or_else(|| Error::Config(format!("unknown basis element {a}")))?;
            let ib = *index.get(b).ok_or_else(|| Error::Config(format!("unknown basis element {b}")))?;
            declared_pairing.push((ia, ib, v.clone()));
        }
        let fibration = match self.base {
            None => None,
            Some(base_name) => {
                let pushforward = match (&self.pushforward, base) {
                    (Some(rows), Some(b)) => {
                        let mut images = vec![vec![Q::zero(); b.len()]; len];
                        for (src, img) in rows {
                            let i = *index
                                .get(src)
                                .ok_or_else(|| Error::Config(format!("unknown basis element {src}")))?;
                            images[i] = resolve(img, &b.index, b.len())?;
                        }
                        Some(images)
                    }
                    (Some(_), None) => return Err(Error::Config("pushforward table needs its base ring".into())),
                    (None, _) => None,
                };
                let pullback = match (&self.pullback, base) {
                    (Some(rows), Some(b)) => {
                        let mut images = vec![vec![Q::zero(); len]; b.len()];
                        images[0][0] = Q::one();
                        for (src, img) in rows {
                            let i = *b
                                .index
                                .get(src)
                                .ok_or_else(|| Error::Config(format!("unknown base element {src}")))?;
                            images[i] = resolve(img, &index, len)?;
                        }
                        Some(images)
                    }
                    (Some(_), None) => return Err(Error::Config("pullback table needs its base ring".into())),
                    (None, _) => None,
                };
                let relative_todd = self
                    .relative_todd
                    .as_ref()
                    .map(|t| resolve(t, &index, len))
                    .transpose()?;
                Some(FibrationData {
                    base: base_name,
                    pushforward,
                    pullback,
                    relative_todd,
                })
            }
        };
        Ok(RingSpec {
            name: self.name,
            basis: self.basis,
            index,
            table,
            top: tops[0],
            c1,
            c2,
            c3,
            calabi_yau: self.calabi_yau,
            declared_pairing,
            fibration,
        })
    }

    pub fn build(self) -> Result<RingSpec> {
        self.build_over(None)
    }
}

impl RingSpec {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Complex dimension.
    pub fn dim(&self) -> u32 {
        self.basis[self.top].degree / 2
    }

    pub fn point_index(&self) -> usize {
        self.top
    }

    pub fn c1(&self) -> &Class {
        &self.c1
    }

    pub fn c2(&self) -> &Class {
        &self.c2
    }

    pub fn c3(&self) -> &Class {
        &self.c3
    }

    pub fn is_calabi_yau(&self) -> bool {
        self.calabi_yau
    }

    pub fn fibration(&self) -> Option<&FibrationData> {
        self.fibration.as_ref()
    }

    pub fn table(&self) -> &[Vec<Class>] {
        &self.table
    }

    pub fn declared_pairing(&self) -> &[(usize, usize, Q)] {
        &self.declared_pairing
    }

    pub fn zero(&self) -> Class {
        vec![Q::zero(); self.len()]
    }

    pub fn one(&self) -> Class {
        self.basis_class(0)
    }

    pub fn basis_class(&self, i: usize) -> Class {
        let mut c = self.zero();
        c[i] = Q::one();
        c
    }

    /// The class of a named basis element.
    pub fn named(&self, name: &str) -> Result<Class> {
        let i = self
            .index_of(name)
            .ok_or_else(|| Error::Config(format!("{} has no basis element {name}", self.name)))?;
        Ok(self.basis_class(i))
    }

    /// Class from `(name, coefficient)` pairs.
    pub fn class(&self, t: &[(&str, Q)]) -> Result<Class> {
        let mut c = self.zero();
        for (n, v) in t {
            let i = self
                .index_of(n)
                .ok_or_else(|| Error::Config(format!("{} has no basis element {n}", self.name)))?;
            c[i] += v;
        }
        Ok(c)
    }

    pub fn add(&self, a: &Class, b: &Class) -> Class {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn sub(&self, a: &Class, b: &Class) -> Class {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn scale(&self, a: &Class, s: &Q) -> Class {
        a.iter().map(|x| x * s).collect()
    }

    pub fn mul(&self, a: &Class, b: &Class) -> Class {
        let mut out = self.zero();
        for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                let xy = x * y;
                for (o, t) in out.iter_mut().zip(&self.table[i][j]) {
                    if !t.is_zero() {
                        *o += &xy * t;
                    }
                }
            }
        }
        out
    }

    /// Degree of the top-degree part.
    pub fn integrate(&self, a: &Class) -> Q {
        a[self.top].clone()
    }

    /// The part of real degree `deg`.
    pub fn part(&self, a: &Class, deg: u32) -> Class {
        a.iter()
            .zip(&self.basis)
            .map(|(x, b)| if b.degree == deg { x.clone() } else { Q::zero() })
            .collect()
    }

    pub fn is_homogeneous(&self, a: &Class, deg: u32) -> bool {
        a.iter().zip(&self.basis).all(|(x, b)| x.is_zero() || b.degree == deg)
    }

    pub fn check_degree(&self, a: &Class, deg: u32, what: &str) -> Result<()> {
        if a.len() != self.len() {
            return Err(Error::Grading(format!("{what} has {} coordinates, ring has {}", a.len(), self.len())));
        }
        if self.is_homogeneous(a, deg) {
            Ok(())
        } else {
            Err(Error::Grading(format!("{what} is not of degree {deg}")))
        }
    }

    /// `Σ a^k / k!` for a class without constant term.
    pub fn exp(&self, a: &Class) -> Class {
        let mut out = self.one();
        let mut term = self.one();
        for k in 1..=self.dim() {
            term = self.scale(&self.mul(&term, a), &Q::new(1.into(), k.into()));
            out = self.add(&out, &term);
        }
        out
    }

    /// Multiplicative inverse of a class with constant term 1.
    pub fn inverse_unipotent(&self, a: &Class) -> Class {
        debug_assert!(a[0].is_one());
        let nil = self.sub(a, &self.one());
        let mut out = self.one();
        let mut term = self.one();
        for _ in 1..=self.dim() {
            term = self.scale(&self.mul(&term, &nil), &-Q::one());
            out = self.add(&out, &term);
        }
        out
    }

    /// Negates the parts of degree `2k` with `k` odd.
    pub fn dual(&self, a: &Class) -> Class {
        a.iter()
            .zip(&self.basis)
            .map(|(x, b)| if b.degree % 4 == 2 { -x } else { x.clone() })
            .collect()
    }

    /// Renders a class as `c*name + ...`.
    pub fn display(&self, a: &Class) -> String {
        let parts: Vec<String> = a
            .iter()
            .zip(&self.basis)
            .filter(|(x, _)| !x.is_zero())
            .map(|(x, b)| format!("{x}*{}", b.name))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    /// Named coordinates of a class, for reports.
    pub fn named_coordinates(&self, a: &Class) -> BTreeMap<String, String> {
        a.iter()
            .zip(&self.basis)
            .filter(|(x, _)| !x.is_zero())
            .map(|(x, b)| (b.name.clone(), x.to_string()))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingReport {
    pub ring: String,
    pub valid: bool,
    pub violations: Vec<Violation>,
    pub warnings: Vec<String>,
}

impl RingReport {
    fn violation(&mut self, kind: &str, detail: String) {
        self.violations.push(Violation {
            kind: kind.to_string(),
            detail,
        });
    }
}

/// Checks grading, commutativity, associativity, the unit, and the
/// Poincaré pairing; a supplied base ring also enables the fibration checks.
pub fn validate_ring(r: &RingSpec, base: Option<&RingSpec>) -> RingReport {
    let mut rep = RingReport {
        ring: r.name.clone(),
        ..Default::default()
    };
    let n = r.len();
    let names = |i: usize| r.basis[i].name.as_str();
    for i in 0..n {
        for j in 0..n {
            let p = &r.table[i][j];
            let want = r.basis[i].degree + r.basis[j].degree;
            if !r.is_homogeneous(p, want) {
                rep.violation("grading", format!("{} * {} leaves degree {want}", names(i), names(j)));
            }
            if j > i && r.table[i][j] != r.table[j][i] {
                rep.violation("commutativity", format!("{} * {} != {} * {}", names(i), names(j), names(j), names(i)));
            }
        }
        if r.table[0][i] != r.basis_class(i) || r.table[i][0] != r.basis_class(i) {
            rep.violation("unit", format!("unit does not fix {}", names(i)));
        }
    }
    for i in 0..n {
        for j in 0..n {
            let ij = &r.table[i][j];
            for k in 0..n {
                let left = r.mul(ij, &r.basis_class(k));
                let right = r.mul(&r.basis_class(i), &r.table[j][k]);
                if left != right {
                    rep.violation(
                        "associativity",
                        format!("({} * {}) * {} != {} * ({} * {})", names(i), names(j), names(k), names(i), names(j), names(k)),
                    );
                }
            }
        }
    }
    let top = r.basis[r.top].degree;
    for deg in (0..=top).step_by(2) {
        let rows: Vec<usize> = (0..n).filter(|&i| r.basis[i].degree == deg).collect();
        let cols: Vec<usize> = (0..n).filter(|&i| r.basis[i].degree == top - deg).collect();
        if rows.len() != cols.len() {
            rep.violation(
                "pairing",
                format!("degrees {deg} and {} have dimensions {} and {}", top - deg, rows.len(), cols.len()),
            );
            continue;
        }
        let m: Vec<Vec<Q>> = rows
            .iter()
            .map(|&i| cols.iter().map(|&j| r.table[i][j][r.top].clone()).collect())
            .collect();
        if rank_q(&m, cols.len()) != rows.len() {
            rep.violation("pairing", format!("pairing between degrees {deg} and {} is degenerate", top - deg));
        }
        for (a, row) in rows.iter().zip(&m) {
            for (b, v) in cols.iter().zip(row) {
                if !v.is_integer() {
                    rep.violation("pairing", format!("{} . {} = {v} is not an integer", names(*a), names(*b)));
                }
            }
        }
    }
    for (i, j, v) in &r.declared_pairing {
        let actual = r.table[*i][*j][r.top].clone();
        if actual != *v {
            rep.violation(
                "pairing",
                format!("declared {} . {} = {v} but the table gives {actual}", names(*i), names(*j)),
            );
        }
    }
    for (k, c) in [&r.c1, &r.c2, &r.c3].into_iter().enumerate() {
        let deg = 2 * (k as u32 + 1);
        if deg <= top && !r.is_homogeneous(c, deg) {
            rep.violation("chern", format!("c{} is not of degree {deg}", k + 1));
        }
    }
    if r.calabi_yau && r.c1.iter().any(|x| !x.is_zero()) {
        rep.warnings.push("declared Calabi-Yau but c1 is nonzero".into());
    }
    if let (Some(f), Some(b)) = (&r.fibration, base) {
        validate_fibration(r, f, b, &mut rep);
    }
    rep.valid = rep.violations.is_empty();
    rep
}

fn validate_fibration(r: &RingSpec, f: &FibrationData, b: &RingSpec, rep: &mut RingReport) {
    if let Some(push) = &f.pushforward {
        for (i, img) in push.iter().enumerate() {
            let deg = r.basis[i].degree;
            let ok = if deg < 2 {
                img.iter().all(|x| x.is_zero())
            } else {
                b.is_homogeneous(img, deg - 2)
            };
            if !ok {
                rep.violation("pushforward", format!("image of {} is not of degree {}", r.basis[i].name, deg.saturating_sub(2)));
            }
        }
    }
    if let Some(pull) = &f.pullback {
        for i in 0..b.len() {
            if !r.is_homogeneous(&pull[i], b.basis[i].degree) {
                rep.violation("pullback", format!("pullback of {} changes degree", b.basis[i].name));
            }
            for j in 0..b.len() {
                let lhs = pull_class(pull, &b.table[i][j], r);
                let rhs = r.mul(&pull[i], &pull[j]);
                if lhs != rhs {
                    rep.violation(
                        "pullback",
                        format!("pullback is not multiplicative on {} * {}", b.basis[i].name, b.basis[j].name),
                    );
                }
            }
        }
        if let Some(push) = &f.pushforward {
            for x in 0..r.len() {
                for y in 0..b.len() {
                    let lhs = push_class(push, &r.mul(&r.basis_class(x), &pull[y]), b);
                    let rhs = b.mul(&push[x], &b.basis_class(y));
                    if lhs != rhs {
                        rep.violation(
                            "projection-formula",
                            format!("pi_*({} * pi^*{}) != pi_*({}) * {}", r.basis[x].name, b.basis[y].name, r.basis[x].name, b.basis[y].name),
                        );
                    }
                }
            }
        }
    }
}

pub(crate) fn pull_class(pull: &[Class], y: &Class, total: &RingSpec) -> Class {
    let mut out = total.zero();
    for (c, img) in y.iter().zip(pull) {
        if !c.is_zero() {
            out = total.add(&out, &total.scale(img, c));
        }
    }
    out
}

pub(crate) fn push_class(push: &[Class], x: &Class, base: &RingSpec) -> Class {
    let mut out = base.zero();
    for (c, img) in x.iter().zip(push) {
        if !c.is_zero() {
            out = base.add(&out, &base.scale(img, c));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;

    fn plane(hh: i64) -> RingSpec {
        RingBuilder::new("plane")
            .basis("1", 0)
            .basis("h", 2)
            .basis("pt", 4)
            .product("h", "h", &[("pt", q(hh))])
            .chern(1, vec![("h".into(), q(3))])
            .chern(2, vec![("pt".into(), q(3))])
            .build()
            .unwrap()
    }

    #[test]
    fn plane_is_valid() {
        let rep = validate_ring(&plane(1), None);
        assert!(rep.valid, "{:?}", rep.violations);
        assert!(rep.warnings.is_empty());
    }

    #[test]
    fn declared_pairing_conflict() {
        let r = RingBuilder::new("bad")
            .basis("1", 0)
            .basis("h", 2)
            .basis("pt", 4)
            .product("h", "h", &[("pt", q(2))])
            .pairing("h".into(), "h".into(), q(1))
            .build()
            .unwrap();
        let rep = validate_ring(&r, None);
        assert!(!rep.valid);
        assert!(rep.violations.iter().any(|v| v.kind == "pairing"));
    }

    #[test]
    fn calabi_yau_with_first_chern_class_warns() {
        let r = RingBuilder::new("cy?")
            .basis("1", 0)
            .basis("D", 2)
            .basis("C", 4)
            .basis("pt", 6)
            .product("D", "D", &[("C", q(5))])
            .product("D", "C", &[("pt", q(1))])
            .chern(1, vec![("D".into(), q(1))])
            .calabi_yau(true)
            .build()
            .unwrap();
        let rep = validate_ring(&r, None);
        assert_eq!(rep.warnings.len(), 1);
    }

    #[test]
    fn broken_grading_and_commutativity_are_reported() {
        let r = RingBuilder::new("broken")
            .basis("1", 0)
            .basis("a", 2)
            .basis("b", 2)
            .basis("pt", 4)
            .product("a", "b", &[("pt", q(1))])
            .product("b", "a", &[("pt", q(2))])
            .product("a", "a", &[("a", q(1))])
            .build()
            .unwrap();
        let rep = validate_ring(&r, None);
        let kinds: Vec<&str> = rep.violations.iter().map(|v| v.kind.as_str()).collect();
        assert!(kinds.contains(&"grading"));
        assert!(kinds.contains(&"commutativity"));
    }

    #[test]
    fn structural_errors() {
        assert!(RingBuilder::new("x").basis("h", 2).build().is_err());
        assert!(RingBuilder::new("x").basis("1", 0).basis("a", 4).basis("b", 4).build().is_err());
        assert!(RingBuilder::new("x")
            .basis("1", 0)
            .basis("pt", 2)
            .product("pt", "q", &[])
            .build()
            .is_err());
    }

    #[test]
    fn exponential_and_inverse() {
        let p = plane(1);
        let h = p.named("h").unwrap();
        let e = p.exp(&h);
        assert_eq!(e, vec![q(1), q(1), Q::new(1.into(), 2.into())]);
        let inv = p.inverse_unipotent(&e);
        assert_eq!(p.mul(&e, &inv), p.one());
        assert_eq!(p.exp(&p.scale(&h, &q(-1))), inv);
    }
}
