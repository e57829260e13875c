//! Seeded random bundles for scans and property checks.

use rand::seq::SliceRandom;
use rand::Rng;

use super::sheaf::{determinant, identity, CycleBundle};
use crate::arith::linalg::Mat;
use crate::arith::{q, q_frac, Q};

/// Shape of a random gluing matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GluingKind {
    Identity,
    ScaledPermutation,
    Diagonal,
    UpperTriangular,
    Dense,
}

const KINDS: [GluingKind; 5] = [
    GluingKind::Identity,
    GluingKind::ScaledPermutation,
    GluingKind::Diagonal,
    GluingKind::UpperTriangular,
    GluingKind::Dense,
];

fn small_nonzero<R: Rng>(rng: &mut R) -> Q {
    let num = *[-3, -2, -1, 1, 2, 3].choose(rng).unwrap();
    q_frac(num, rng.gen_range(1..=3))
}

fn small<R: Rng>(rng: &mut R) -> Q {
    q_frac(rng.gen_range(-3..=3), rng.gen_range(1..=3))
}

pub fn random_gluing<R: Rng>(rng: &mut R, rank: usize, kind: GluingKind) -> Mat<Q> {
    loop {
        let mut m = identity(rank);
        match kind {
            GluingKind::Identity => {}
            GluingKind::ScaledPermutation => {
                let mut perm: Vec<usize> = (0..rank).collect();
                perm.shuffle(rng);
                let scale = small_nonzero(rng);
                for (i, row) in m.iter_mut().enumerate() {
                    for (j, x) in row.iter_mut().enumerate() {
                        *x = if perm[i] == j { scale.clone() } else { q(0) };
                    }
                }
            }
            GluingKind::Diagonal => {
                for (i, row) in m.iter_mut().enumerate() {
                    row[i] = small_nonzero(rng);
                }
            }
            GluingKind::UpperTriangular => {
                for (i, row) in m.iter_mut().enumerate() {
                    for (j, x) in row.iter_mut().enumerate() {
                        if j > i {
                            *x = small(rng);
                        } else if j == i {
                            *x = small_nonzero(rng);
                        }
                    }
                }
            }
            GluingKind::Dense => {
                for x in m.iter_mut().flatten() {
                    *x = small(rng);
                }
            }
        }
        if determinant(&m) != q(0) {
            return m;
        }
    }
}

fn random_kind<R: Rng>(rng: &mut R) -> GluingKind {
    *KINDS.choose(rng).unwrap()
}

/// Splitting entries drawn uniformly from `[-max_entry, max_entry]`.
pub fn random_bundle<R: Rng>(rng: &mut R, n: usize, rank: usize, max_entry: i64) -> CycleBundle {
    let splits = (0..n)
        .map(|_| (0..rank).map(|_| rng.gen_range(-max_entry..=max_entry)).collect())
        .collect();
    let gluings = (0..n)
        .map(|_| {
            let kind = random_kind(rng);
            random_gluing(rng, rank, kind)
        })
        .collect();
    CycleBundle::new(splits, gluings).expect("generated data is well formed")
}

/// Spreads `total` over `parts` slots as evenly as possible, then moves a
/// few units between random slots.
fn perturbed_partition<R: Rng>(rng: &mut R, total: i64, parts: usize, moves: usize, cap: i64) -> Vec<i64> {
    let p = parts as i64;
    let mut v: Vec<i64> = (0..p)
        .map(|i| total.div_euclid(p) + i64::from(i < total.rem_euclid(p)))
        .collect();
    if parts < 2 {
        return v;
    }
    for _ in 0..rng.gen_range(0..=moves) {
        let from = rng.gen_range(0..parts);
        let to = rng.gen_range(0..parts);
        if from != to && v[from] > -cap && v[to] < cap {
            v[from] -= 1;
            v[to] += 1;
        }
    }
    v
}

/// A bundle of the given total degree with a randomly perturbed
/// multidegree and splitting type.
pub fn random_bundle_of_degree<R: Rng>(rng: &mut R, n: usize, rank: usize, total: i64) -> CycleBundle {
    let cap = (total.abs() + 3).max(3);
    let multidegree = perturbed_partition(rng, total, n, 2, cap);
    let splits = multidegree
        .iter()
        .map(|&dj| perturbed_partition(rng, dj, rank, 3, cap))
        .collect();
    let gluings = (0..n)
        .map(|_| {
            let kind = random_kind(rng);
            random_gluing(rng, rank, kind)
        })
        .collect();
    CycleBundle::new(splits, gluings).expect("generated data is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_bundles_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for i in 0..100 {
            let n = 1 + i % 3;
            let r = 1 + i % 3;
            let e = random_bundle(&mut rng, n, r, 3);
            assert!(e.splits().iter().flatten().all(|k| k.abs() <= 3));
            let d = (i as i64 % 7) - 3;
            let e = random_bundle_of_degree(&mut rng, n, r, d);
            assert_eq!(e.total_degree(), d);
        }
    }

    #[test]
    fn same_seed_same_bundle() {
        let a = random_bundle(&mut ChaCha8Rng::seed_from_u64(5), 2, 2, 3);
        let b = random_bundle(&mut ChaCha8Rng::seed_from_u64(5), 2, 2, 3);
        assert_eq!(a, b);
    }
}
