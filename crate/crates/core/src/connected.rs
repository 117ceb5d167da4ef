//! Enumeration of connected induced subgraphs of bounded size.
//!
//! The recursion grows a connected set one frontier vertex at a time. At each
//! level the candidates are tried in order; once a candidate has been tried it
//! is forbidden for the remaining siblings, so each set is reached along
//! exactly one branch.

use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

const FREE: u8 = 0;
const IN_SET: u8 = 1;
const CANDIDATE: u8 = 2;
const FORBIDDEN: u8 = 3;

/// Calls `visit` with the members of every connected set `S` such that
/// `root ∈ S`, `|S| <= s_max`, and no member is below `min_vertex`.
///
/// Members are passed in insertion order, not sorted. Stops early when the
/// visitor breaks.
pub fn visit_connected_sets<F>(
    g: &Graph,
    root: usize,
    s_max: usize,
    min_vertex: usize,
    mut visit: F,
) -> ControlFlow<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    if s_max == 0 || root < min_vertex {
        return ControlFlow::Continue(());
    }
    let mut mark = vec![FREE; g.n()];
    for m in mark.iter_mut().take(min_vertex) {
        *m = FORBIDDEN;
    }
    mark[root] = IN_SET;
    let mut frontier = Vec::new();
    for &w in g.neighbors(root) {
        if mark[w] == FREE {
            mark[w] = CANDIDATE;
            frontier.push(w);
        }
    }
    let mut set = vec![root];
    grow(g, &mut set, &frontier, &mut mark, s_max, &mut visit)
}

fn grow<F>(
    g: &Graph,
    set: &mut Vec<usize>,
    frontier: &[usize],
    mark: &mut [u8],
    s_max: usize,
    visit: &mut F,
) -> ControlFlow<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    visit(set)?;
    if set.len() == s_max {
        return ControlFlow::Continue(());
    }
    let mut flow = ControlFlow::Continue(());
    let mut tried = 0;
    for (i, &w) in frontier.iter().enumerate() {
        mark[w] = IN_SET;
        set.push(w);
        let mut next: Vec<usize> = frontier[i + 1..].to_vec();
        let carried = next.len();
        for &u in g.neighbors(w) {
            if mark[u] == FREE {
                mark[u] = CANDIDATE;
                next.push(u);
            }
        }
        flow = grow(g, set, &next, mark, s_max, visit);
        for &u in &next[carried..] {
            mark[u] = FREE;
        }
        set.pop();
        mark[w] = FORBIDDEN;
        tried = i + 1;
        if flow.is_break() {
            break;
        }
    }
    for &w in &frontier[..tried] {
        mark[w] = CANDIDATE;
    }
    flow
}

/// Every connected set through `v` of size at most `s_max`, each once.
pub fn connected_sets_through(
    g: &Graph,
    v: usize,
    s_max: usize,
    cap: usize,
) -> Result<Vec<VertexSet>> {
    if s_max == 0 || s_max > g.n() {
        return Err(Error::InvalidParameter(format!(
            "s_max must lie in 1..={}, got {s_max}",
            g.n()
        )));
    }
    let mut out = Vec::new();
    let flow = visit_connected_sets(g, v, s_max, 0, |members| {
        if out.len() == cap {
            return ControlFlow::Break(());
        }
        out.push(VertexSet::from_members(g.n(), members.iter().copied()));
        ControlFlow::Continue(())
    });
    if flow.is_break() {
        return Err(Error::ResourceLimit {
            what: "connected-set enumeration",
            cap,
        });
    }
    Ok(out)
}

/// Number of connected sets through `v` of each size `1..=s_max`.
pub fn count_connected_sets_through(g: &Graph, v: usize, s_max: usize) -> Vec<u64> {
    let mut counts = vec![0u64; s_max + 1];
    let _ = visit_connected_sets(g, v, s_max, 0, |members| {
        counts[members.len()] += 1;
        ControlFlow::Continue(())
    });
    counts
}

/// Calls `visit` once per connected set of size `<= s_max` in the whole graph
/// (each set is reported from its minimum vertex), with sorted members.
pub fn visit_all_connected_sets<F>(g: &Graph, s_max: usize, mut visit: F) -> ControlFlow<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    let mut sorted = Vec::with_capacity(s_max);
    for v in 0..g.n() {
        visit_connected_sets(g, v, s_max, v, |members| {
            sorted.clear();
            sorted.extend_from_slice(members);
            sorted.sort_unstable();
            visit(&sorted)
        })?;
    }
    ControlFlow::Continue(())
}

/// Upper bound `d (d-1)^(s-2) C(2s-2, s-1)` on connected sets of size `s`
/// through a vertex of a `d`-regular graph. Defined for `s >= 2`; `s = 1`
/// returns the exact count 1.
pub fn connected_set_bound(d: usize, s: usize) -> f64 {
    match s {
        0 => 0.0,
        1 => 1.0,
        _ => d as f64 * (d as f64 - 1.0).powi(s as i32 - 2) * binomial(2 * s - 2, s - 1),
    }
}

/// The looser form `(4d)^(s-1)` of [`connected_set_bound`].
pub fn connected_set_bound_simple(d: usize, s: usize) -> f64 {
    (4.0 * d as f64).powi(s as i32 - 1)
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{fixture, Fixture};

    #[test]
    fn singleton_and_pairs() {
        let p = fixture(Fixture::Petersen);
        let sets = connected_sets_through(&p, 0, 1, 100).unwrap();
        assert_eq!(sets.len(), 1);
        assert_eq!(sets[0].members(), &[0]);
        assert_eq!(connected_sets_through(&p, 0, 2, 100).unwrap().len(), 4);
    }

    #[test]
    fn complete_graph_counts_are_binomials() {
        // In K_n every set is connected: sets of size s through v number C(n-1, s-1).
        let k6 = fixture(Fixture::Complete(6));
        let counts = count_connected_sets_through(&k6, 3, 6);
        assert_eq!(counts[1..], [1, 5, 10, 10, 5, 1]);
    }

    #[test]
    fn cap_and_range_errors() {
        let k6 = fixture(Fixture::Complete(6));
        assert!(matches!(
            connected_sets_through(&k6, 0, 6, 5),
            Err(Error::ResourceLimit { .. })
        ));
        assert!(connected_sets_through(&k6, 0, 0, 5).is_err());
        assert!(connected_sets_through(&k6, 0, 7, 5).is_err());
    }

    #[test]
    fn global_enumeration_counts_each_set_once() {
        let c6 = fixture(Fixture::Cycle(6));
        let mut count = 0;
        let _ = visit_all_connected_sets(&c6, 3, |_| {
            count += 1;
            ControlFlow::Continue(())
        });
        // 6 singletons, 6 edges, 6 paths of length 2.
        assert_eq!(count, 18);
    }

    #[test]
    fn bound_values() {
        assert_eq!(connected_set_bound(3, 2), 6.0);
        assert_eq!(connected_set_bound(3, 3), 3.0 * 2.0 * 6.0);
        assert!(connected_set_bound(5, 4) <= connected_set_bound_simple(5, 4));
    }
}
