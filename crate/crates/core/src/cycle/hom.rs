//! Morphisms as solutions of the node-condition linear system.
//!
//! A morphism `S → D` is a matrix of polynomials on each component, entry
//! `(b, a)` of degree at most `l_b - k_a`. At a node joining position `t` to
//! position `t'` it must satisfy `G_D · Φ_t(∞) = Φ_{t'}(0) · G_S`. A source
//! supported on a chain maps into the subsheaf of `D` vanishing at the chain
//! ends, so `Φ(0)` at the first position and `Φ(∞)` at the last vanish.

use std::ops::Range;

use num_traits::{One, Zero};

use super::sheaf::{CycleBundle, Lambda, RankOneTestSheaf, Support};
use crate::arith::field::{Field, Rationals};
use crate::arith::linalg::{nullspace, Mat};
use crate::arith::poly::Poly;
use crate::arith::Q;
use crate::error::{Error, Result};

/// Gluing of the source sheaf across one node.
#[derive(Clone, Debug)]
enum SourceGluing {
    Fixed(Mat<Q>),
    /// The 1×1 gluing `λ`, kept symbolic.
    Symbolic,
}

/// One polynomial entry of `Φ_t` and the unknowns holding its coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub position: usize,
    pub row: usize,
    pub col: usize,
    pub offset: usize,
    pub degree: usize,
}

/// The linear system `(a0 + λ a1) v = 0` whose solutions are the morphisms.
#[derive(Clone, Debug)]
pub struct NodeSystem {
    pub a0: Mat<Q>,
    pub a1: Mat<Q>,
    pub ncols: usize,
    pub blocks: Vec<Block>,
    /// Columns belonging to each position along the source support.
    pub positions: Vec<Range<usize>>,
    /// Component under each position.
    pub components: Vec<usize>,
    pub src_rank: usize,
    pub dst_rank: usize,
}

impl NodeSystem {
    pub fn is_symbolic(&self) -> bool {
        self.a1.iter().flatten().any(|x| !x.is_zero())
    }

    /// `a0 + λ a1` at a rational value of `λ`.
    pub fn at(&self, lambda: &Q) -> Mat<Q> {
        self.a0
            .iter()
            .zip(&self.a1)
            .map(|(r0, r1)| r0.iter().zip(r1).map(|(x, y)| x + lambda * y).collect())
            .collect()
    }

    /// Splits a solution vector into per-position matrices of coefficient
    /// lists (`[position][row][col][power]`).
    pub fn unpack<E: Clone>(&self, v: &[E]) -> Vec<Vec<Vec<Vec<E>>>> {
        let mut out: Vec<Vec<Vec<Vec<E>>>> = self
            .positions
            .iter()
            .map(|_| vec![vec![Vec::new(); self.src_rank]; self.dst_rank])
            .collect();
        for b in &self.blocks {
            out[b.position][b.row][b.col] = v[b.offset..=b.offset + b.degree].to_vec();
        }
        out
    }
}

struct Layout<'a> {
    components: Vec<usize>,
    src_splits: Vec<&'a [i64]>,
    /// Gluing leaving each position, if that node belongs to the support.
    gluings: Vec<Option<SourceGluing>>,
    src_rank: usize,
    chain: bool,
}

fn build(layout: Layout<'_>, dst: &CycleBundle) -> NodeSystem {
    let len = layout.components.len();
    let rs = layout.src_rank;
    let rd = dst.rank();
    let mut blocks = Vec::new();
    let mut positions = Vec::with_capacity(len);
    let mut index = vec![vec![vec![None; rs]; rd]; len];
    let mut ncols = 0;
    for t in 0..len {
        let start = ncols;
        let dst_split = &dst.splits()[layout.components[t]];
        for (row, &l) in dst_split.iter().enumerate() {
            for (col, &k) in layout.src_splits[t].iter().enumerate() {
                if l >= k {
                    let degree = (l - k) as usize;
                    index[t][row][col] = Some(blocks.len());
                    blocks.push(Block {
                        position: t,
                        row,
                        col,
                        offset: ncols,
                        degree,
                    });
                    ncols += degree + 1;
                }
            }
        }
        positions.push(start..ncols);
    }
    let top = |t: usize, row: usize, col: usize| {
        index[t][row][col].map(|i: usize| blocks[i].offset + blocks[i].degree)
    };
    let bottom = |t: usize, row: usize, col: usize| index[t][row][col].map(|i: usize| blocks[i].offset);

    let mut a0 = Vec::new();
    let mut a1 = Vec::new();
    let zero_row = || vec![Q::zero(); ncols];
    for t in 0..len {
        let Some(g_src) = &layout.gluings[t] else { continue };
        let next = (t + 1) % len;
        let g_dst = &dst.gluings()[layout.components[t]];
        for row in 0..rd {
            for col in 0..rs {
                let mut e0 = zero_row();
                let mut e1 = zero_row();
                for (mid, g) in g_dst[row].iter().enumerate() {
                    if let (false, Some(c)) = (g.is_zero(), top(t, mid, col)) {
                        e0[c] += g;
                    }
                }
                match g_src {
                    SourceGluing::Fixed(m) => {
                        for (mid, m_row) in m.iter().enumerate() {
                            if let (false, Some(c)) = (m_row[col].is_zero(), bottom(next, row, mid)) {
                                e0[c] -= &m_row[col];
                            }
                        }
                    }
                    SourceGluing::Symbolic => {
                        if let Some(c) = bottom(next, row, 0) {
                            e1[c] -= Q::one();
                        }
                    }
                }
                a0.push(e0);
                a1.push(e1);
            }
        }
    }
    if layout.chain {
        for row in 0..rd {
            for col in 0..rs {
                for c in [bottom(0, row, col), top(len - 1, row, col)].into_iter().flatten() {
                    let mut e = zero_row();
                    e[c] = Q::one();
                    a0.push(e);
                    a1.push(zero_row());
                }
            }
        }
    }
    NodeSystem {
        a0,
        a1,
        ncols,
        blocks,
        positions,
        components: layout.components,
        src_rank: rs,
        dst_rank: rd,
    }
}

fn same_cycle(n1: usize, n2: usize) -> Result<()> {
    if n1 == n2 {
        Ok(())
    } else {
        Err(Error::HypothesisViolation(format!(
            "sheaves live on I_{n1} and I_{n2}"
        )))
    }
}

/// Node system for `Hom(src, dst)` between locally free sheaves.
pub fn bundle_system(src: &CycleBundle, dst: &CycleBundle) -> Result<NodeSystem> {
    same_cycle(src.n(), dst.n())?;
    let n = src.n();
    let layout = Layout {
        components: (0..n).collect(),
        src_splits: src.splits().iter().map(|s| s.as_slice()).collect(),
        gluings: src.gluings().iter().map(|g| Some(SourceGluing::Fixed(g.clone()))).collect(),
        src_rank: src.rank(),
        chain: false,
    };
    Ok(build(layout, dst))
}

/// Node system for `Hom(F, dst)` with `F` a rank-one sheaf on a subcurve; a
/// generic gluing parameter becomes the pencil variable.
pub fn test_sheaf_system(src: &RankOneTestSheaf, dst: &CycleBundle) -> Result<NodeSystem> {
    same_cycle(src.n, dst.n())?;
    let n = src.n;
    let components = src.support.components(n);
    let len = components.len();
    let degrees: Vec<[i64; 1]> = src.degrees.iter().map(|&k| [k]).collect();
    let gluings = (0..len)
        .map(|t| match src.support {
            Support::Chain { .. } if t + 1 == len => None,
            Support::Chain { .. } => Some(SourceGluing::Fixed(vec![vec![Q::one()]])),
            Support::Cycle if t + 1 < len => Some(SourceGluing::Fixed(vec![vec![Q::one()]])),
            Support::Cycle => Some(match &src.lambda {
                Lambda::Value(l) => SourceGluing::Fixed(vec![vec![l.clone()]]),
                Lambda::Generic => SourceGluing::Symbolic,
            }),
        })
        .collect();
    let layout = Layout {
        components,
        src_splits: degrees.iter().map(|d| d.as_slice()).collect(),
        gluings,
        src_rank: 1,
        chain: src.support.is_chain(),
    };
    Ok(build(layout, dst))
}

/// Dimension of a Hom space, with a basis of per-component polynomial
/// matrices when computed over the rationals.
#[derive(Clone, Debug, PartialEq)]
pub struct HomReport {
    pub dimension: usize,
    pub basis: Option<Vec<Vec<Mat<Poly>>>>,
}

fn to_field<F: Field>(f: &F, m: &Mat<Q>) -> Result<Mat<F::Elem>> {
    m.iter()
        .map(|row| {
            row.iter()
                .map(|x| {
                    f.from_q(x).ok_or_else(|| {
                        Error::HypothesisViolation(format!("entry {x} is undefined in the chosen field"))
                    })
                })
                .collect()
        })
        .collect()
}

/// Nullity of a numeric node system over the given field.
pub fn nullity_in<F: Field>(f: &F, sys: &NodeSystem) -> Result<usize> {
    debug_assert!(!sys.is_symbolic());
    let m = to_field(f, &sys.a0)?;
    let basis = nullspace(f, &m, sys.ncols).expect("prime and rational fields have no zero divisors");
    Ok(basis.len())
}

pub fn hom(e: &CycleBundle, f: &CycleBundle) -> Result<HomReport> {
    let sys = bundle_system(e, f)?;
    let basis = nullspace(&Rationals, &sys.a0, sys.ncols).expect("Q is a field");
    let maps = basis
        .iter()
        .map(|v| {
            sys.unpack(v)
                .into_iter()
                .map(|m| {
                    m.into_iter()
                        .map(|row| row.into_iter().map(Poly::new).collect())
                        .collect()
                })
                .collect()
        })
        .collect();
    Ok(HomReport {
        dimension: basis.len(),
        basis: Some(maps),
    })
}

pub fn hom_dim(e: &CycleBundle, f: &CycleBundle) -> Result<usize> {
    hom_dim_in(&Rationals, e, f)
}

pub fn hom_dim_in<F: Field>(field: &F, e: &CycleBundle, f: &CycleBundle) -> Result<usize> {
    nullity_in(field, &bundle_system(e, f)?)
}

/// `h^0(E) = dim Hom(O, E)`.
pub fn h0(e: &CycleBundle) -> usize {
    hom_dim(&CycleBundle::trivial(e.n(), 1), e).expect("same cycle")
}

/// `h^1(E) = dim Hom(E, O)`, the dualizing sheaf of a genus-one cycle being
/// trivial.
pub fn h1(e: &CycleBundle) -> usize {
    hom_dim(e, &CycleBundle::trivial(e.n(), 1)).expect("same cycle")
}

pub fn is_simple(e: &CycleBundle) -> bool {
    hom_dim(e, e).expect("same cycle") == 1
}

pub fn is_simple_in<F: Field>(field: &F, e: &CycleBundle) -> Result<bool> {
    Ok(hom_dim_in(field, e, e)? == 1)
}
