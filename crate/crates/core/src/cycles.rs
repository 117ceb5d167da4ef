//! Girth, short-cycle enumeration, per-vertex cycle counts and diameter.

use std::collections::{BTreeMap, VecDeque};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Cycle, Graph};

/// Default cap on enumerated items (cycles, connected sets).
pub const DEFAULT_ENUMERATION_CAP: usize = 10_000_000;

const UNSEEN: usize = usize::MAX;

/// Length of a shortest cycle, `None` for forests.
pub fn girth(g: &Graph) -> Option<usize> {
    let best = (0..g.n())
        .into_par_iter()
        .map_init(
            || (vec![UNSEEN; g.n()], vec![UNSEEN; g.n()], VecDeque::new()),
            |(dist, parent, queue), root| shortest_cycle_from(g, root, dist, parent, queue),
        )
        .min()
        .unwrap_or(UNSEEN);
    (best != UNSEEN).then_some(best)
}

/// BFS from `root`; the minimum over all roots of the returned value is the
/// girth. Buffers are reset before returning.
fn shortest_cycle_from(
    g: &Graph,
    root: usize,
    dist: &mut [usize],
    parent: &mut [usize],
    queue: &mut VecDeque<usize>,
) -> usize {
    let mut best = UNSEEN;
    let mut touched = vec![root];
    dist[root] = 0;
    queue.clear();
    queue.push_back(root);
    'bfs: while let Some(u) = queue.pop_front() {
        if best != UNSEEN && 2 * dist[u] + 1 >= best {
            break;
        }
        for &w in g.neighbors(u) {
            if dist[w] == UNSEEN {
                dist[w] = dist[u] + 1;
                parent[w] = u;
                touched.push(w);
                queue.push_back(w);
            } else if parent[u] != w {
                best = best.min(dist[u] + dist[w] + 1);
                if best == 3 {
                    break 'bfs;
                }
            }
        }
    }
    for v in touched {
        dist[v] = UNSEEN;
        parent[v] = UNSEEN;
    }
    best
}

/// Exact number of distinct cycles of each length `3..=kmax` through `v`.
///
/// Counts every simple closed path from `v` and halves the total, since each
/// geometric cycle is traversed once in each direction.
pub fn count_cycles_through(g: &Graph, v: usize, kmax: usize) -> BTreeMap<usize, u64> {
    let mut counts = vec![0u64; kmax + 1];
    if kmax >= 3 {
        let mut on_path = vec![false; g.n()];
        on_path[v] = true;
        closed_paths(g, v, v, 0, kmax, &mut on_path, &mut counts);
    }
    (3..=kmax).map(|k| (k, counts[k] / 2)).collect()
}

fn closed_paths(
    g: &Graph,
    origin: usize,
    at: usize,
    len: usize,
    kmax: usize,
    on_path: &mut [bool],
    counts: &mut [u64],
) {
    for &w in g.neighbors(at) {
        if w == origin && len + 1 >= 3 {
            counts[len + 1] += 1;
        } else if !on_path[w] && len + 2 <= kmax {
            on_path[w] = true;
            closed_paths(g, origin, w, len + 1, kmax, on_path, counts);
            on_path[w] = false;
        }
    }
}

/// All cycles shorter than a girth target, each once in canonical form,
/// sorted lexicographically.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CycleSet {
    cycles: Vec<Cycle>,
}

impl CycleSet {
    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn into_vec(self) -> Vec<Cycle> {
        self.cycles
    }

    /// Number of cycles of length `k`, for every length that occurs.
    pub fn totals_by_length(&self) -> BTreeMap<usize, u64> {
        let mut out = BTreeMap::new();
        for c in &self.cycles {
            *out.entry(c.len()).or_insert(0) += 1;
        }
        out
    }

    /// `counts[v][k]`: cycles of length `k` in the set passing through `v`.
    pub fn per_vertex_counts(&self, n: usize) -> Vec<BTreeMap<usize, u64>> {
        let mut out = vec![BTreeMap::new(); n];
        for c in &self.cycles {
            for &v in c.vertices() {
                *out[v].entry(c.len()).or_insert(0) += 1;
            }
        }
        out
    }

    /// Maximum over vertices of the per-vertex count, for each length present.
    pub fn max_per_vertex_counts(&self, n: usize) -> BTreeMap<usize, u64> {
        let mut out = BTreeMap::new();
        for row in self.per_vertex_counts(n) {
            for (k, c) in row {
                let e = out.entry(k).or_insert(0);
                *e = (*e).max(c);
            }
        }
        out
    }
}

pub fn enumerate_short_cycles(g: &Graph, girth_target: usize) -> Result<CycleSet> {
    enumerate_short_cycles_capped(g, girth_target, DEFAULT_ENUMERATION_CAP)
}

/// Every cycle of length `3 <= k < girth_target`.
///
/// Each anchor vertex `a` owns the cycles whose minimum vertex is `a`; the
/// search only walks vertices above `a` and keeps the direction with
/// `v1 < v(k-1)`, so every cycle is produced once.
pub fn enumerate_short_cycles_capped(
    g: &Graph,
    girth_target: usize,
    cap: usize,
) -> Result<CycleSet> {
    if girth_target < 3 {
        return Err(Error::InvalidParameter(format!(
            "girth target must be at least 3, got {girth_target}"
        )));
    }
    let found = AtomicUsize::new(0);
    let overflow = AtomicBool::new(false);
    let per_anchor: Vec<Vec<Cycle>> = (0..g.n())
        .into_par_iter()
        .map(|anchor| {
            let mut out = Vec::new();
            if overflow.load(Ordering::Relaxed) {
                return out;
            }
            let mut path = vec![anchor];
            let mut on_path = vec![false; g.n()];
            on_path[anchor] = true;
            anchored_cycles(g, girth_target, &mut path, &mut on_path, &mut out);
            if found.fetch_add(out.len(), Ordering::Relaxed) + out.len() > cap {
                overflow.store(true, Ordering::Relaxed);
            }
            out
        })
        .collect();
    if overflow.load(Ordering::Relaxed) {
        return Err(Error::ResourceLimit {
            what: "short-cycle enumeration",
            cap,
        });
    }
    let mut cycles: Vec<Cycle> = per_anchor.into_iter().flatten().collect();
    cycles.sort_unstable();
    Ok(CycleSet { cycles })
}

fn anchored_cycles(
    g: &Graph,
    girth_target: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    out: &mut Vec<Cycle>,
) {
    let anchor = path[0];
    let last = *path.last().expect("path starts at the anchor");
    let edges = path.len() - 1;
    for &w in g.neighbors(last) {
        if w == anchor {
            if edges + 1 >= 3 && path[1] < last {
                out.push(Cycle::from_canonical(path.clone()));
            }
        } else if w > anchor && !on_path[w] && edges + 2 < girth_target {
            on_path[w] = true;
            path.push(w);
            anchored_cycles(g, girth_target, path, on_path, out);
            path.pop();
            on_path[w] = false;
        }
    }
}

/// Maximum shortest-path distance, `None` if disconnected.
pub fn diameter(g: &Graph) -> Option<usize> {
    if g.n() == 0 {
        return Some(0);
    }
    (0..g.n())
        .into_par_iter()
        .map(|root| eccentricity(g, root))
        .try_reduce(|| 0, |a, b| Some(a.max(b)))
}

/// Largest BFS distance from `root`, `None` if some vertex is unreachable.
pub fn eccentricity(g: &Graph, root: usize) -> Option<usize> {
    let mut dist = vec![UNSEEN; g.n()];
    dist[root] = 0;
    let mut queue = VecDeque::from([root]);
    let mut reached = 1;
    let mut ecc = 0;
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if dist[w] == UNSEEN {
                dist[w] = dist[u] + 1;
                ecc = dist[w];
                reached += 1;
                queue.push_back(w);
            }
        }
    }
    (reached == g.n()).then_some(ecc)
}
