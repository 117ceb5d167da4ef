use std::time::Instant;

use expgirth_core::cycles::girth;
use expgirth_core::generators::random_regular;
use expgirth_core::sparsify::{moser_tardos_sparsify, surviving_short_cycles, SparsifyParams};
use expgirth_core::verify::verify_theorem2_inequality;
use expgirth_core::Seed;

#[test]
fn output_passes_post_run_audit() {
    for seed in 0..4 {
        let g = random_regular(200, 8, Seed(seed)).unwrap();
        let params = SparsifyParams::new(5, 1.0, Seed(100 + seed));
        let out = moser_tardos_sparsify(&g, &params).unwrap();
        assert!(!out.budget_exhausted);
        assert!(out.certified.girth_certified && out.certified.sets_audited_to_s_max);
        assert!(out.girth.is_none_or(|k| k >= 5));
        assert_eq!(out.girth, girth(&out.h));
        assert!(surviving_short_cycles(&g, &out.h, 5).unwrap().is_empty());
        assert!(verify_theorem2_inequality(&g, &out.h, 1.0, 6).unwrap().pass);
    }
}

#[test]
fn same_seed_same_subgraph() {
    let g = random_regular(300, 6, Seed(1)).unwrap();
    let params = SparsifyParams::new(6, 1.5, Seed(42));
    let a = moser_tardos_sparsify(&g, &params).unwrap();
    let b = moser_tardos_sparsify(&g, &params).unwrap();
    assert_eq!(a.h.edges(), b.h.edges());
    assert_eq!(a.rounds, b.rounds);
    let c = moser_tardos_sparsify(&g, &SparsifyParams::new(6, 1.5, Seed(43))).unwrap();
    assert_ne!(a.h.edges(), c.h.edges());
}

#[test]
fn dense_host_with_live_set_events() {
    let g = random_regular(80, 64, Seed(2)).unwrap();
    let mut params = SparsifyParams::new(3, 32.0, Seed(5));
    params.s_max = 2;
    let out = moser_tardos_sparsify(&g, &params).unwrap();
    assert!(out.universe.set_events > 0);
    assert!(out.certified.sets_audited_to_s_max);
    assert!(
        verify_theorem2_inequality(&g, &out.h, 32.0, 2)
            .unwrap()
            .pass
    );
}

#[test]
fn large_instance_certifies_girth() {
    let g = random_regular(2000, 16, Seed(0)).unwrap();
    let t = Instant::now();
    let out = moser_tardos_sparsify(&g, &SparsifyParams::new(6, 1.0, Seed(0))).unwrap();
    eprintln!("{:?} rounds={} {:?}", t.elapsed(), out.rounds, out.universe);
    assert!(out.certified.girth_certified);
    assert!(out.girth.is_none_or(|k| k >= 6));
    assert!(out.lll_precheck.pass);
}
