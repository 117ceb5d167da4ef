//! Brute-force reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use expgirth_core::Graph;

pub fn boundary(g: &Graph, members: &[usize]) -> usize {
    let inside: BTreeSet<usize> = members.iter().copied().collect();
    g.edges()
        .iter()
        .filter(|(u, v)| inside.contains(u) != inside.contains(v))
        .count()
}

/// Every simple cycle of length at most `kmax`, keyed by its sorted edge list.
pub fn cycles_by_edge_set(g: &Graph, kmax: usize) -> BTreeSet<Vec<(usize, usize)>> {
    fn dfs(
        g: &Graph,
        start: usize,
        path: &mut Vec<usize>,
        kmax: usize,
        out: &mut BTreeSet<Vec<(usize, usize)>>,
    ) {
        let last = *path.last().unwrap();
        for &w in g.neighbors(last) {
            if w == start && path.len() >= 3 {
                let mut edges: Vec<(usize, usize)> = path
                    .windows(2)
                    .map(|p| (p[0].min(p[1]), p[0].max(p[1])))
                    .collect();
                edges.push((last.min(start), last.max(start)));
                edges.sort();
                out.insert(edges);
            } else if !path.contains(&w) && path.len() < kmax {
                path.push(w);
                dfs(g, start, path, kmax, out);
                path.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    for s in 0..g.n() {
        dfs(g, s, &mut vec![s], kmax, &mut out);
    }
    out
}

pub fn girth(g: &Graph) -> Option<usize> {
    cycles_by_edge_set(g, g.n()).iter().map(Vec::len).min()
}

/// Cycle counts by length through `v`.
pub fn cycles_through(g: &Graph, v: usize, kmax: usize) -> BTreeMap<usize, u64> {
    let mut out = BTreeMap::new();
    for c in cycles_by_edge_set(g, kmax) {
        if c.iter().any(|&(a, b)| a == v || b == v) {
            *out.entry(c.len()).or_insert(0) += 1;
        }
    }
    out
}

fn connected_within(g: &Graph, mask: u64) -> bool {
    let first = mask.trailing_zeros() as usize;
    let mut seen = 1u64 << first;
    let mut queue = VecDeque::from([first]);
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if mask >> w & 1 == 1 && seen >> w & 1 == 0 {
                seen |= 1 << w;
                queue.push_back(w);
            }
        }
    }
    seen == mask
}

/// Connected vertex sets containing `v` of size at most `s_max`, as sorted
/// member lists. Only for `n <= 20`.
pub fn connected_sets_through(g: &Graph, v: usize, s_max: usize) -> BTreeSet<Vec<usize>> {
    assert!(g.n() <= 20);
    (1u64..1 << g.n())
        .filter(|m| m >> v & 1 == 1 && m.count_ones() as usize <= s_max)
        .filter(|&m| connected_within(g, m))
        .map(|m| (0..g.n()).filter(|&i| m >> i & 1 == 1).collect())
        .collect()
}

/// `min |∂S|/|S|` over `0 < |S| <= n/2`.
pub fn cheeger(g: &Graph) -> f64 {
    let n = g.n();
    let mut best = f64::INFINITY;
    for m in 1u64..1 << n {
        let s = m.count_ones() as usize;
        if 2 * s > n {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|&i| m >> i & 1 == 1).collect();
        best = best.min(boundary(g, &members) as f64 / s as f64);
    }
    best
}

pub fn closed_walks(g: &Graph, v: usize, k: usize) -> u128 {
    let n = g.n();
    let mut a = vec![vec![0u128; n]; n];
    for &(u, w) in g.edges() {
        a[u][w] = 1;
        a[w][u] = 1;
    }
    let mut p: Vec<Vec<u128>> = (0..n)
        .map(|i| (0..n).map(|j| u128::from(i == j)).collect())
        .collect();
    for _ in 0..k {
        p = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|l| p[i][l] * a[l][j]).sum())
                    .collect()
            })
            .collect();
    }
    p[v][v]
}

pub fn diameter(g: &Graph) -> Option<usize> {
    let mut best = 0;
    for s in 0..g.n() {
        let mut dist = vec![usize::MAX; g.n()];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        best = best.max(*dist.iter().max().unwrap());
    }
    (best != usize::MAX).then_some(best)
}
