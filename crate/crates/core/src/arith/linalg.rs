//! Gaussian elimination over any [`Field`]: rank, null spaces and solving.

use super::field::{Field, Rationals, ZeroDivisor};
use super::Q;

/// Row-major dense matrix.
pub type Mat<E> = Vec<Vec<E>>;

/// Reduces `m` (with `ncols` columns) to reduced row echelon form in place
/// and returns the pivot columns.
pub fn rref<F: Field>(f: &F, m: &mut Mat<F::Elem>, ncols: usize) -> Result<Vec<usize>, ZeroDivisor> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&i| !f.is_zero(&m[i][col])) else {
            continue;
        };
        m.swap(row, p);
        let inv = f.inv(&m[row][col])?;
        for x in m[row][col..].iter_mut() {
            *x = f.mul(x, &inv);
        }
        let pivot_row = m[row].clone();
        for (i, r) in m.iter_mut().enumerate() {
            if i == row || f.is_zero(&r[col]) {
                continue;
            }
            let factor = r[col].clone();
            for c in col..ncols {
                if !f.is_zero(&pivot_row[c]) {
                    r[c] = f.sub(&r[c], &f.mul(&factor, &pivot_row[c]));
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    Ok(pivots)
}

pub fn rank<F: Field>(f: &F, m: &Mat<F::Elem>, ncols: usize) -> Result<usize, ZeroDivisor> {
    let mut work = m.clone();
    Ok(rref(f, &mut work, ncols)?.len())
}

/// Basis of `{v : m v = 0}`, one vector per free column.
pub fn nullspace<F: Field>(
    f: &F,
    m: &Mat<F::Elem>,
    ncols: usize,
) -> Result<Vec<Vec<F::Elem>>, ZeroDivisor> {
    let mut work = m.clone();
    let pivots = rref(f, &mut work, ncols)?;
    let mut is_pivot = vec![None; ncols];
    for (r, &c) in pivots.iter().enumerate() {
        is_pivot[c] = Some(r);
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| is_pivot[c].is_none()) {
        let mut v = vec![f.zero(); ncols];
        v[free] = f.one();
        for (c, pr) in is_pivot.iter().enumerate() {
            if let Some(r) = pr {
                v[c] = f.neg(&work[*r][free]);
            }
        }
        basis.push(v);
    }
    Ok(basis)
}

/// `m v` for a column vector `v`.
pub fn apply<F: Field>(f: &F, m: &Mat<F::Elem>, v: &[F::Elem]) -> Vec<F::Elem> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))
        })
        .collect()
}

pub fn nullspace_q(m: &Mat<Q>, ncols: usize) -> Vec<Vec<Q>> {
    nullspace(&Rationals, m, ncols).expect("Q is a field")
}

pub fn rank_q(m: &Mat<Q>, ncols: usize) -> usize {
    rank(&Rationals, m, ncols).expect("Q is a field")
}

/// Outcome of solving `a x = b` exactly.
#[derive(Clone, Debug, PartialEq)]
pub enum Solution {
    /// One particular solution plus a basis of the homogeneous solutions.
    Solved { particular: Vec<Q>, kernel: Vec<Vec<Q>>, rank: usize },
    Inconsistent { rank: usize },
}

pub fn solve_q(a: &Mat<Q>, b: &[Q], ncols: usize) -> Solution {
    assert_eq!(a.len(), b.len());
    let mut aug: Mat<Q> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&Rationals, &mut aug, ncols + 1).expect("Q is a field");
    let rank = pivots.iter().filter(|&&c| c < ncols).count();
    if pivots.contains(&ncols) {
        return Solution::Inconsistent { rank };
    }
    let mut particular = vec![Q::from_integer(0.into()); ncols];
    for (r, &c) in pivots.iter().enumerate() {
        particular[c] = aug[r][ncols].clone();
    }
    Solution::Solved {
        particular,
        kernel: nullspace_q(a, ncols),
        rank,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::field::PrimeField;
    use crate::arith::q;

    fn m(rows: &[&[i64]]) -> Mat<Q> {
        rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    #[test]
    fn nullspace_vectors_are_annihilated() {
        let a = m(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let ns = nullspace_q(&a, 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(apply(&Rationals, &a, v).iter().all(|x| *x == q(0)));
        }
        assert_eq!(rank_q(&a, 4), 2);
    }

    #[test]
    fn rank_drops_mod_p() {
        // det = 7
        let a = m(&[&[3, 1], &[1, 5]]);
        assert_eq!(rank_q(&a, 2), 2);
        let f = PrimeField::new(7).unwrap();
        let ap: Mat<u64> = a
            .iter()
            .map(|r| r.iter().map(|x| f.from_q(x).unwrap()).collect())
            .collect();
        assert_eq!(rank(&f, &ap, 2).unwrap(), 1);
    }

    #[test]
    fn solve_detects_inconsistency() {
        let a = m(&[&[1, 1], &[2, 2]]);
        assert!(matches!(
            solve_q(&a, &[q(1), q(3)], 2),
            Solution::Inconsistent { rank: 1 }
        ));
        match solve_q(&a, &[q(1), q(2)], 2) {
            Solution::Solved { kernel, rank, .. } => {
                assert_eq!(rank, 1);
                assert_eq!(kernel.len(), 1);
            }
            other => panic!("{other:?}"),
        }
    }
}
