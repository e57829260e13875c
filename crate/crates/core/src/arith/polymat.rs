//! Matrices over `Q[x]`: generic rank and the gcd of maximal minors.
//!
//! Rows are reduced with unimodular Euclidean operations only, which leave
//! the ideal generated by the maximal minors unchanged. When the matrix has
//! full column rank the reduced form is `[T; 0]` with `T` upper triangular,
//! so the gcd of all maximal minors is the product of the diagonal of `T`.

use super::linalg::Mat;
use super::poly::Poly;
use super::Q;

#[derive(Clone, Debug, PartialEq)]
pub struct GenericRank {
    /// Rank over the field of rational functions `Q(x)`.
    pub rank: usize,
    pub ncols: usize,
    /// Monic gcd of the maximal minors; only defined at full column rank.
    pub minor_gcd: Option<Poly>,
}

impl GenericRank {
    pub fn full_column_rank(&self) -> bool {
        self.rank == self.ncols
    }
}

/// The pencil `a0 + x a1` as a polynomial matrix.
pub fn pencil(a0: &Mat<Q>, a1: &Mat<Q>) -> Mat<Poly> {
    a0.iter()
        .zip(a1)
        .map(|(r0, r1)| {
            r0.iter()
                .zip(r1)
                .map(|(c0, c1)| Poly::linear(c0.clone(), c1.clone()))
                .collect()
        })
        .collect()
}

pub fn generic_rank(m: &Mat<Poly>, ncols: usize) -> GenericRank {
    let (_, diag) = echelon(m, ncols);
    let rank = diag.len();
    let minor_gcd = (rank == ncols).then(|| {
        diag.iter()
            .fold(Poly::one(), |acc, d| &acc * d)
            .monic()
    });
    GenericRank {
        rank,
        ncols,
        minor_gcd,
    }
}

/// Generic rank `ρ` together with the monic gcd of all `ρ × ρ` minors: the
/// values of `x` where the rank drops are exactly its roots.
pub fn rank_drop_locus(m: &Mat<Poly>, ncols: usize) -> (usize, Poly) {
    let (reduced, diag) = echelon(m, ncols);
    let rho = diag.len();
    if rho == 0 {
        return (0, Poly::one());
    }
    let transposed: Mat<Poly> = (0..ncols)
        .map(|c| reduced[..rho].iter().map(|row| row[c].clone()).collect())
        .collect();
    let g = generic_rank(&transposed, rho);
    (rho, g.minor_gcd.expect("echelon rows are independent"))
}

/// Unimodular row echelon form; returns the reduced matrix and its pivots.
fn echelon(m: &Mat<Poly>, ncols: usize) -> (Mat<Poly>, Vec<Poly>) {
    let mut m = m.clone();
    let mut row = 0;
    let mut diag = Vec::new();
    for col in 0..ncols {
        if row == m.len() {
            break;
        }
        loop {
            let best = (row..m.len())
                .filter(|&i| !m[i][col].is_zero())
                .min_by_key(|&i| m[i][col].degree());
            let Some(best) = best else { break };
            m.swap(row, best);
            let mut done = true;
            for k in row + 1..m.len() {
                if m[k][col].is_zero() {
                    continue;
                }
                let (quo, _) = m[k][col].div_rem(&m[row][col]);
                let pivot_row = m[row].clone();
                for (c, p) in pivot_row.iter().enumerate().skip(col) {
                    if !p.is_zero() {
                        m[k][c] = &m[k][c] - &(&quo * p);
                    }
                }
                if !m[k][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if !m[row][col].is_zero() {
            diag.push(m[row][col].clone());
            row += 1;
        }
    }
    (m, diag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;

    fn qm(rows: &[&[i64]]) -> Mat<Q> {
        rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    #[test]
    fn single_column_gcd() {
        // column (x - 2, 2x - 4): rank 1, minors gcd x - 2
        let a0 = qm(&[&[-2], &[-4]]);
        let a1 = qm(&[&[1], &[2]]);
        let g = generic_rank(&pencil(&a0, &a1), 1);
        assert!(g.full_column_rank());
        assert_eq!(g.minor_gcd.unwrap(), Poly::linear(q(-2), q(1)));
    }

    #[test]
    fn coprime_minors_give_constant() {
        // column (x, x - 1): gcd 1
        let a0 = qm(&[&[0], &[-1]]);
        let a1 = qm(&[&[1], &[1]]);
        let g = generic_rank(&pencil(&a0, &a1), 1);
        assert!(g.minor_gcd.unwrap().is_constant());
    }

    #[test]
    fn determinant_of_square_pencil() {
        // [[x, 1], [1, x]] has det x^2 - 1
        let a0 = qm(&[&[0, 1], &[1, 0]]);
        let a1 = qm(&[&[1, 0], &[0, 1]]);
        let g = generic_rank(&pencil(&a0, &a1), 2);
        assert_eq!(g.minor_gcd.unwrap(), Poly::new(vec![q(-1), q(0), q(1)]));
    }

    #[test]
    fn drop_locus_of_rank_deficient_pencil() {
        // diag(x - 1, x - 1) over a zero row: the only 2x2 minor is (x - 1)^2
        let a0 = qm(&[&[-1, 0], &[0, -1], &[0, 0]]);
        let a1 = qm(&[&[1, 0], &[0, 1], &[0, 0]]);
        let (rho, g) = rank_drop_locus(&pencil(&a0, &a1), 2);
        assert_eq!(rho, 2);
        assert_eq!(g, Poly::new(vec![q(1), q(-2), q(1)]));

        // rank-1 pencil whose entries share the factor x - 3
        let a0 = qm(&[&[-3, -6], &[-6, -12]]);
        let a1 = qm(&[&[1, 2], &[2, 4]]);
        let (rho, g) = rank_drop_locus(&pencil(&a0, &a1), 2);
        assert_eq!(rho, 1);
        assert_eq!(g, Poly::linear(q(-3), q(1)));
    }

    #[test]
    fn rank_deficient_pencil() {
        let a0 = qm(&[&[1, 2], &[2, 4]]);
        let a1 = qm(&[&[1, 2], &[0, 0]]);
        let g = generic_rank(&pencil(&a0, &a1), 2);
        assert_eq!(g.rank, 1);
        assert!(g.minor_gcd.is_none());
    }
}
