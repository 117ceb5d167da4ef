mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use expgirth_core::cycles::enumerate_short_cycles;
use expgirth_core::generators::random_regular;
use expgirth_core::graph::induced_components;
use expgirth_core::lll::{
    cycle_vbl, event_cycle_holds, event_set_holds, prob_cycle_bound, set_vbl, undirect, Orientation,
};
use expgirth_core::verify::{cheeger_exact, verify_theorem2_inequality};
use expgirth_core::{edge_boundary, Cycle, Graph, Seed, VertexSet};

fn regular_graph() -> impl Strategy<Value = Graph> {
    (3usize..6, 6usize..15, any::<u64>()).prop_filter_map("n d odd", |(d, n, seed)| {
        (d < n && (n * d) % 2 == 0).then(|| random_regular(n, d, Seed(seed)).unwrap())
    })
}

fn graph_and_set() -> impl Strategy<Value = (Graph, VertexSet)> {
    regular_graph().prop_flat_map(|g| {
        let n = g.n();
        (Just(g), proptest::collection::vec(any::<bool>(), n)).prop_map(|(g, bits)| {
            let n = g.n();
            (g, VertexSet::from_members(n, (0..n).filter(|&i| bits[i])))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn boundary_is_symmetric((g, s) in graph_and_set()) {
        prop_assert_eq!(edge_boundary(&g, &s), edge_boundary(&g, &s.complement()));
        prop_assert_eq!(edge_boundary(&g, &s), common::boundary(&g, s.members()));
    }

    #[test]
    fn boundary_and_out_directions_add_over_components(
        (g, s) in graph_and_set(),
        seed in any::<u64>(),
    ) {
        let o = Orientation::sample(&g, g.degree().unwrap() as f64 / 2.0, Seed(seed)).unwrap();
        let out = |m: &[usize]| set_vbl(&g, m).into_iter().filter(|&v| o.is_present(v)).count();
        let comps = induced_components(&g, &s);
        let total: usize = comps.iter().map(|c| c.len()).sum();
        prop_assert_eq!(total, s.len());
        let b: usize = comps.iter().map(|c| edge_boundary(&g, c)).sum();
        prop_assert_eq!(b, edge_boundary(&g, &s));
        let od: usize = comps.iter().map(|c| out(c.members())).sum();
        prop_assert_eq!(od, out(s.members()));
    }

    #[test]
    fn per_vertex_counts_sum_to_k_times_total(g in regular_graph()) {
        let cycles = enumerate_short_cycles(&g, 7).unwrap();
        let totals = cycles.totals_by_length();
        let per_vertex = cycles.per_vertex_counts(g.n());
        for (&k, &t) in &totals {
            let sum: u64 = per_vertex.iter().map(|m| m.get(&k).copied().unwrap_or(0)).sum();
            prop_assert_eq!(sum, k as u64 * t);
        }
    }

    #[test]
    fn cycle_canonical_form_ignores_rotation_and_direction(
        g in regular_graph(),
        shift in 0usize..8,
        reverse in any::<bool>(),
    ) {
        for c in enumerate_short_cycles(&g, 6).unwrap().cycles() {
            let mut vs = c.vertices().to_vec();
            let r = shift % vs.len();
            vs.rotate_left(r);
            if reverse {
                vs.reverse();
            }
            prop_assert_eq!(&Cycle::new(&g, &vs).unwrap(), c);
        }
    }

    #[test]
    fn flips_outside_vbl_never_change_events(
        (g, s) in graph_and_set(),
        seed in any::<u64>(),
        flips in proptest::collection::vec(any::<prop::sample::Index>(), 1..20),
    ) {
        prop_assume!(!s.is_empty());
        let d = g.degree().unwrap() as f64;
        // δ above d/2 only so that set events are not trivially false.
        let delta = 10.0 * d;
        let mut o = Orientation::sample(&g, d / 2.0, Seed(seed)).unwrap();
        let svbl: BTreeSet<usize> = set_vbl(&g, s.members()).into_iter().collect();
        let cycles = enumerate_short_cycles(&g, 6).unwrap();
        let before_set = event_set_holds(&g, &o, &s, delta);
        let before_cycles: Vec<bool> =
            cycles.cycles().iter().map(|c| event_cycle_holds(&g, &o, c)).collect();
        for ix in &flips {
            let var = ix.index(o.num_variables());
            if !svbl.contains(&var) {
                o.flip(var);
                prop_assert_eq!(event_set_holds(&g, &o, &s, delta), before_set);
            }
        }
        let base = Orientation::sample(&g, d / 2.0, Seed(seed)).unwrap();
        for (c, &before) in cycles.cycles().iter().zip(&before_cycles) {
            let cvbl: BTreeSet<usize> = cycle_vbl(&g, c).into_iter().collect();
            let mut o2 = base.clone();
            for ix in &flips {
                let var = ix.index(o2.num_variables());
                if !cvbl.contains(&var) {
                    o2.flip(var);
                    prop_assert_eq!(event_cycle_holds(&g, &o2, c), before);
                }
            }
        }
    }

    #[test]
    fn sampling_is_monotone_in_delta(
        g in regular_graph(),
        seed in any::<u64>(),
        a in 0.0f64..1.0,
        b in 0.0f64..1.0,
    ) {
        let half = g.degree().unwrap() as f64 / 2.0;
        let (lo, hi) = (a.min(b) * half, a.max(b) * half);
        let small = Orientation::sample(&g, lo, Seed(seed)).unwrap();
        let large = Orientation::sample(&g, hi, Seed(seed)).unwrap();
        for v in 0..small.num_variables() {
            prop_assert!(!small.is_present(v) || large.is_present(v));
        }
        prop_assert!(undirect(&g, &small).is_spanning_subgraph_of(&undirect(&g, &large)));
    }

    #[test]
    fn edge_list_round_trips(g in regular_graph()) {
        let text = g.to_edge_list();
        let back = Graph::parse_edge_list(&text).unwrap();
        prop_assert_eq!(back.edges(), g.edges());
        prop_assert_eq!(back.to_edge_list(), text);
    }

    #[test]
    fn boundary_inequality_is_monotone_in_h(
        g in regular_graph(),
        keep_a in proptest::collection::vec(any::<bool>(), 40),
        keep_b in proptest::collection::vec(any::<bool>(), 40),
        delta_frac in 0.05f64..1.0,
    ) {
        let delta = delta_frac * 12.0 * g.degree().unwrap() as f64;
        let small = g.spanning_subgraph(|e| keep_a[e % 40] && keep_b[e % 40]);
        let large = g.spanning_subgraph(|e| keep_a[e % 40]);
        let a = verify_theorem2_inequality(&g, &small, delta, 4).unwrap();
        let b = verify_theorem2_inequality(&g, &large, delta, 4).unwrap();
        prop_assert!(b.worst.unwrap().slack >= a.worst.unwrap().slack - 1e-9);
        prop_assert!(!a.pass || b.pass);
    }

    #[test]
    fn exact_cheeger_matches_brute_force(g in regular_graph()) {
        let r = cheeger_exact(&g).unwrap();
        prop_assert_eq!(r.value, common::cheeger(&g));
    }

    #[test]
    fn cycle_probability_never_exceeds_bound(
        d in 3usize..200,
        frac in 0.0f64..=0.5,
        k in 3usize..12,
    ) {
        let c = prob_cycle_bound(d, frac * d as f64, k);
        prop_assert!(c.exact <= c.bound);
    }
}
