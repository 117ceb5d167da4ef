//! Moser–Tardos resampling over the short-cycle and small-set events.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use serde::Serialize;

use crate::connected::visit_all_connected_sets;
use crate::cycles::{enumerate_short_cycles_capped, girth, CycleSet, DEFAULT_ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::generators::Seed;
use crate::graph::{edge_boundary_sorted, Cycle, Graph, VertexSet};
use crate::lll::{
    cycle_vbl, lll_condition_check, max_set_threshold, set_threshold, set_vbl, undirect, x_cycle,
    x_set, EventKind, EventRecord, LllCheck, Orientation,
};

pub const DEFAULT_S_MAX: usize = 6;
pub const DEFAULT_MAX_ROUNDS: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SparsifyParams {
    /// Girth target: every cycle shorter than `g` must be destroyed.
    pub g: usize,
    pub delta: f64,
    /// Largest connected-set size whose event is audited.
    pub s_max: usize,
    pub seed: Seed,
    /// Resampling budget.
    pub max_rounds: u64,
    /// Cap on enumerated cycles and connected sets.
    pub enumeration_cap: usize,
}

impl SparsifyParams {
    pub fn new(g: usize, delta: f64, seed: Seed) -> Self {
        SparsifyParams {
            g,
            delta,
            s_max: DEFAULT_S_MAX,
            seed,
            max_rounds: DEFAULT_MAX_ROUNDS,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
        }
    }

    pub fn validate(&self, d: usize) -> Result<()> {
        if self.g < 3 {
            return Err(Error::InvalidParameter(format!(
                "girth target must be at least 3, got {}",
                self.g
            )));
        }
        if !(self.delta > 0.0 && 2.0 * self.delta <= d as f64) {
            return Err(Error::InvalidParameter(format!(
                "δ must satisfy 0 < δ <= d/2 = {}, got {}",
                d as f64 / 2.0,
                self.delta
            )));
        }
        if self.s_max == 0 {
            return Err(Error::InvalidParameter("s_max must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct KindTally {
    pub cycle: u64,
    pub set: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Certification {
    /// No short cycle survives: `girth(H) >= g`.
    pub girth_certified: bool,
    /// No set event holds for any connected set of size `<= s_max`.
    pub sets_audited_to_s_max: bool,
}

/// Size of the event universe handed to the resampler.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Universe {
    pub cycle_events: usize,
    pub set_events: usize,
    /// Set sizes whose threshold is negative for every connected set; those
    /// events can never hold and are not materialized.
    pub vacuous_set_sizes: Vec<usize>,
    /// Connected sets of live sizes whose own threshold is negative.
    pub vacuous_sets_skipped: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SparsifyOutcome {
    #[serde(skip)]
    pub h: Graph,
    pub girth: Option<usize>,
    pub rounds: u64,
    pub resamples_by_kind: KindTally,
    pub initial_violations: KindTally,
    pub violated_after: KindTally,
    pub certified: Certification,
    pub budget_exhausted: bool,
    pub delta: f64,
    pub g: usize,
    pub s_max: usize,
    pub seed: Seed,
    pub max_rounds: u64,
    pub universe: Universe,
    /// Sum of `x(A) / (1 - x(A))` over the universe: the expected-resample
    /// bound when the local-lemma condition holds.
    pub expected_resample_bound: f64,
    pub lll_precheck: LllCheck,
}

enum Event {
    Cycle { edges: Vec<usize> },
    Set { threshold: f64 },
}

struct Universes {
    events: Vec<Event>,
    vbl: Vec<Vec<usize>>,
    records: Vec<EventKind>,
    n_cycles: usize,
    info: Universe,
    x_sum: f64,
}

/// Runs Moser–Tardos on `g`.
///
/// All variables are sampled, then while some event holds the one with the
/// lowest index (cycles first, then sets, each in lexicographic order) has
/// its variables redrawn and only the events sharing one of them are
/// re-evaluated. A final full pass audits every event against the returned
/// orientation.
pub fn moser_tardos_sparsify(g: &Graph, params: &SparsifyParams) -> Result<SparsifyOutcome> {
    let d = g.degree().ok_or(Error::NotRegular)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    params.validate(d)?;
    let s_max = params.s_max.min(g.n());

    let cycles = enumerate_short_cycles_capped(g, params.g, params.enumeration_cap)?;
    let lll_precheck = lll_condition_check(
        d,
        params.delta,
        params.g,
        &cycles.max_per_vertex_counts(g.n()),
        g.n(),
    );
    let u = build_universe(g, d, params, s_max, cycles)?;

    let mut var_events: Vec<Vec<u32>> = vec![Vec::new(); 2 * g.m()];
    for (i, vars) in u.vbl.iter().enumerate() {
        for &v in vars {
            var_events[v].push(i as u32);
        }
    }

    let mut orientation = Orientation::sample(g, params.delta, params.seed)?;
    let holds = |o: &Orientation, i: usize| -> bool {
        match &u.events[i] {
            Event::Cycle { edges } => edges.iter().all(|&e| o.edge_present(e)),
            Event::Set { threshold } => {
                let out = u.vbl[i].iter().filter(|&&v| o.is_present(v)).count();
                out as f64 <= *threshold
            }
        }
    };
    let tally = |set: &BTreeSet<u32>| {
        let cycle = set.range(..u.n_cycles as u32).count() as u64;
        KindTally {
            cycle,
            set: set.len() as u64 - cycle,
        }
    };

    let mut violated: BTreeSet<u32> = (0..u.events.len())
        .filter(|&i| holds(&orientation, i))
        .map(|i| i as u32)
        .collect();
    let initial_violations = tally(&violated);

    let mut rounds = 0u64;
    let mut resamples = KindTally::default();
    let mut stamp = vec![0u64; u.events.len()];
    while let Some(&first) = violated.first() {
        if rounds == params.max_rounds {
            break;
        }
        rounds += 1;
        let first = first as usize;
        if first < u.n_cycles {
            resamples.cycle += 1;
        } else {
            resamples.set += 1;
        }
        orientation.resample(&u.vbl[first]);
        for &v in &u.vbl[first] {
            for &j in &var_events[v] {
                if stamp[j as usize] == rounds {
                    continue;
                }
                stamp[j as usize] = rounds;
                if holds(&orientation, j as usize) {
                    violated.insert(j);
                } else {
                    violated.remove(&j);
                }
            }
        }
    }

    let audit: BTreeSet<u32> = (0..u.events.len())
        .filter(|&i| holds(&orientation, i))
        .map(|i| i as u32)
        .collect();
    debug_assert_eq!(audit, violated);
    let violated_after = tally(&audit);
    let h = undirect(g, &orientation);
    let h_girth = girth(&h);

    Ok(SparsifyOutcome {
        girth: h_girth,
        rounds,
        resamples_by_kind: resamples,
        initial_violations,
        violated_after,
        certified: Certification {
            girth_certified: violated_after.cycle == 0 && h_girth.is_none_or(|x| x >= params.g),
            sets_audited_to_s_max: violated_after.set == 0,
        },
        budget_exhausted: !audit.is_empty(),
        delta: params.delta,
        g: params.g,
        s_max,
        seed: params.seed,
        max_rounds: params.max_rounds,
        universe: u.info,
        expected_resample_bound: u.x_sum,
        lll_precheck,
        h,
    })
}

fn build_universe(
    g: &Graph,
    d: usize,
    params: &SparsifyParams,
    s_max: usize,
    cycles: CycleSet,
) -> Result<Universes> {
    let mut events = Vec::new();
    let mut vbl = Vec::new();
    let mut records = Vec::new();
    let mut x_sum = 0.0;
    for c in cycles.into_vec() {
        let edges = c.edge_ids(g);
        vbl.push(cycle_vbl(g, &c));
        if let Ok(x) = x_cycle(d, params.delta, c.len()) {
            x_sum += x / (1.0 - x);
        } else {
            x_sum = f64::INFINITY;
        }
        events.push(Event::Cycle { edges });
        records.push(EventKind::Cycle(c));
    }
    let n_cycles = events.len();

    let live: Vec<bool> = (0..=s_max)
        .map(|s| s > 0 && max_set_threshold(s, d, params.delta) >= 0.0)
        .collect();
    let vacuous_set_sizes: Vec<usize> = (1..=s_max).filter(|&s| !live[s]).collect();
    let mut skipped = 0u64;
    if let Some(top) = (1..=s_max).rev().find(|&s| live[s]) {
        let mut sets: Vec<(Vec<usize>, f64)> = Vec::new();
        let mut visited = 0usize;
        let flow = visit_all_connected_sets(g, top, |members| {
            visited += 1;
            if visited > params.enumeration_cap {
                return ControlFlow::Break(());
            }
            if live[members.len()] {
                let b = edge_boundary_sorted(g, members);
                let t = set_threshold(b, members.len(), d, params.delta);
                if t >= 0.0 {
                    sets.push((members.to_vec(), t));
                } else {
                    skipped += 1;
                }
            }
            ControlFlow::Continue(())
        });
        if flow.is_break() {
            return Err(Error::ResourceLimit {
                what: "connected-set enumeration",
                cap: params.enumeration_cap,
            });
        }
        sets.sort_by(|a, b| a.0.cmp(&b.0));
        for (members, threshold) in sets {
            vbl.push(set_vbl(g, &members));
            let x = x_set(d, members.len());
            x_sum += x / (1.0 - x);
            events.push(Event::Set { threshold });
            records.push(EventKind::Set(VertexSet::from_members(g.n(), members)));
        }
    }

    let info = Universe {
        cycle_events: n_cycles,
        set_events: events.len() - n_cycles,
        vacuous_set_sizes,
        vacuous_sets_skipped: skipped,
    };
    Ok(Universes {
        events,
        vbl,
        records,
        n_cycles,
        info,
        x_sum,
    })
}

/// The materialized event universe of a run, as [`EventRecord`]s.
pub fn event_universe(g: &Graph, params: &SparsifyParams) -> Result<Vec<EventRecord>> {
    let d = g.degree().ok_or(Error::NotRegular)?;
    params.validate(d)?;
    let cycles = enumerate_short_cycles_capped(g, params.g, params.enumeration_cap)?;
    let u = build_universe(g, d, params, params.s_max.min(g.n()), cycles)?;
    u.records
        .into_iter()
        .map(|kind| match kind {
            EventKind::Cycle(c) => EventRecord::cycle(g, c, params.delta),
            EventKind::Set(s) => EventRecord::set(g, s, params.delta),
        })
        .collect()
}

/// Cycles of `g` shorter than `target` that survive in `h`.
pub fn surviving_short_cycles(g: &Graph, h: &Graph, target: usize) -> Result<Vec<Cycle>> {
    let cycles = enumerate_short_cycles_capped(g, target, DEFAULT_ENUMERATION_CAP)?;
    Ok(cycles
        .into_vec()
        .into_iter()
        .filter(|c| {
            let k = c.len();
            (0..k).all(|i| h.has_edge(c.vertices()[i], c.vertices()[(i + 1) % k]))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{fixture, random_regular, Fixture};

    #[test]
    fn cycle_graph_needs_no_resampling() {
        let g = fixture(Fixture::Cycle(8));
        let out = moser_tardos_sparsify(&g, &SparsifyParams::new(4, 1.0, Seed(3))).unwrap();
        assert_eq!(out.rounds, 0);
        assert_eq!(out.universe.cycle_events, 0);
        assert_eq!(out.universe.set_events, 0);
        assert!(out.certified.girth_certified);
    }

    #[test]
    fn destroys_all_triangles_of_k4() {
        let g = fixture(Fixture::Complete(4));
        for seed in 0..20 {
            let mut p = SparsifyParams::new(4, 1.5, Seed(seed));
            p.s_max = 1;
            let out = moser_tardos_sparsify(&g, &p).unwrap();
            assert!(out.certified.girth_certified);
            assert!(out.girth.is_none_or(|x| x >= 4));
            assert!(out.h.is_spanning_subgraph_of(&g));
        }
    }

    #[test]
    fn zero_budget_reports_exhaustion() {
        let g = fixture(Fixture::Complete(4));
        let p = SparsifyParams {
            max_rounds: 0,
            ..SparsifyParams::new(4, 1.5, Seed(0))
        };
        let out = (0..50)
            .map(|s| {
                moser_tardos_sparsify(
                    &g,
                    &SparsifyParams {
                        seed: Seed(s),
                        ..p.clone()
                    },
                )
                .unwrap()
            })
            .find(|o| o.initial_violations.cycle > 0)
            .expect("some seed leaves a triangle");
        assert!(out.budget_exhausted);
        assert!(!out.certified.girth_certified);
        assert_eq!(out.rounds, 0);
    }

    #[test]
    fn rejects_bad_params() {
        let g = fixture(Fixture::Petersen);
        assert!(moser_tardos_sparsify(&g, &SparsifyParams::new(5, 2.0, Seed(0))).is_err());
        assert!(moser_tardos_sparsify(&g, &SparsifyParams::new(2, 1.0, Seed(0))).is_err());
        let path = fixture(Fixture::Path(5));
        assert!(moser_tardos_sparsify(&path, &SparsifyParams::new(5, 1.0, Seed(0))).is_err());
    }

    #[test]
    fn live_set_events_are_materialized_for_dense_hosts() {
        let g = random_regular(80, 64, Seed(2)).unwrap();
        let mut p = SparsifyParams::new(3, 32.0, Seed(1));
        p.s_max = 2;
        let out = moser_tardos_sparsify(&g, &p).unwrap();
        assert!(out.universe.set_events > 0);
        assert!(out.certified.sets_audited_to_s_max);
    }

    #[test]
    fn universe_records_match_kinds() {
        let g = fixture(Fixture::Complete(4));
        let p = SparsifyParams {
            s_max: 1,
            ..SparsifyParams::new(5, 0.5, Seed(0))
        };
        let events = event_universe(&g, &p).unwrap();
        assert_eq!(events.len(), 7);
        assert!(events.iter().all(|e| matches!(e.kind, EventKind::Cycle(_))));
        assert_eq!(events[0].vbl.len(), 6);
    }
}
