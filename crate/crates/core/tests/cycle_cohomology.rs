use fiberwise_core::arith::q;
use fiberwise_core::cycle::generate::{random_bundle, random_bundle_of_degree};
use fiberwise_core::cycle::{
    h0, h1, hom_dim, is_simple, is_stable, make_cyclic_bundle, agreement_scan, slope_mu, verify_certificate, CycleBundle,
    FieldChoice, PolarizedCycle, ScanConfig, Verdict,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn riemann_roch_serre_duality_and_hom_bundles() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..60 {
        let n = rng.gen_range(1..=3);
        let (re, rf) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        let e = random_bundle(&mut rng, n, re, 3);
        let f = random_bundle(&mut rng, n, rf, 3);
        assert_eq!(h0(&e) as i64 - h1(&e) as i64, e.total_degree());
        assert_eq!(h1(&e), hom_dim(&e, &CycleBundle::trivial(n, 1)).unwrap());
        assert_eq!(hom_dim(&e, &f).unwrap(), h0(&f.tensor(&e.dual()).unwrap()));
    }
}

#[test]
fn line_bundles_of_nonzero_degree() {
    for d in [-3i64, -1, 1, 4] {
        let l = CycleBundle::line(&[d], q(5)).unwrap();
        assert_eq!(h0(&l), d.max(0) as usize);
        assert_eq!(h1(&l), (-d).max(0) as usize);
    }
    let l = CycleBundle::line(&[0, 0], q(2)).unwrap();
    assert_eq!((h0(&l), h1(&l)), (0, 0));
    let o = CycleBundle::line(&[0, 0], q(1)).unwrap();
    assert_eq!((h0(&o), h1(&o)), (1, 1));
}

#[test]
fn coprime_cyclic_bundles_are_simple_and_stable() {
    for (r, d) in [(2i64, 1i64), (2, -3), (3, 1), (3, 2)] {
        let e = make_cyclic_bundle(1, r, d, q(7)).unwrap();
        assert!(is_simple(&e), "({r}, {d})");
        let c = PolarizedCycle::with_weights(&[1]).unwrap();
        let rep = is_stable(&e, &c, 5).unwrap();
        assert_eq!(rep.verdict, Verdict::Stable);
        assert_eq!(rep.slope, slope_mu(&e, &c).unwrap());
    }
}

#[test]
fn destabilizers_come_with_valid_certificates() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut seen = 0;
    for _ in 0..40 {
        let d = rng.gen_range(1..=4);
        let e = random_bundle_of_degree(&mut rng, 2, 2, d);
        let c = PolarizedCycle::with_weights(&[1, 2]).unwrap();
        let rep = is_stable(&e, &c, 5).unwrap();
        if let Some(cert) = rep.certificate {
            seen += 1;
            assert!(rep.verdict != Verdict::Stable);
            verify_certificate(&e, &c, &cert).unwrap();
        }
    }
    assert!(seen > 0);
}

#[test]
fn scan_agrees_on_rank_two_cycles_of_length_three() {
    let cfg = ScanConfig {
        cycle_sizes: vec![3],
        rank: 2,
        degrees: vec![-3, -1, 1, 3],
        samples: 30,
        seed: 5,
        bound: 5,
        require_definite: true,
        field: FieldChoice::Prime(1_000_003),
    };
    let rep = agreement_scan(&cfg, 2).unwrap();
    assert_eq!(rep.aggregate.disagreements, 0, "{:?}", rep.aggregate.counterexamples);
    assert_eq!(rep.aggregate.certificate_failures, 0);
}
