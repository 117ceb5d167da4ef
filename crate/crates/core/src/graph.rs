//! Simple undirected graphs, vertex sets and the edge-list text format.

use std::fmt::Write as _;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Immutable simple undirected graph.
///
/// Vertices are `0..n`. Edges carry a canonical id: the position of `(u, v)`,
/// `u < v`, in the lexicographically sorted edge list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<usize>>,
    adj_edge: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    degree: Option<usize>,
}

impl Graph {
    /// Builds a graph, rejecting loops, duplicate edges and out-of-range ids.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut list = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!(
                "duplicate edge ({}, {})",
                w[0].0, w[0].1
            )));
        }
        Ok(Self::from_sorted_unique(n, list))
    }

    fn from_sorted_unique(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (id, &(u, v)) in edges.iter().enumerate() {
            adj[u].push((v, id));
            adj[v].push((u, id));
        }
        let mut nbrs = Vec::with_capacity(n);
        let mut eids = Vec::with_capacity(n);
        for mut row in adj {
            row.sort_unstable();
            nbrs.push(row.iter().map(|&(w, _)| w).collect::<Vec<_>>());
            eids.push(row.iter().map(|&(_, e)| e).collect::<Vec<_>>());
        }
        let degree = match nbrs.first() {
            Some(first) if nbrs.iter().all(|r| r.len() == first.len()) => Some(first.len()),
            _ => None,
        };
        Graph {
            n,
            adj: nbrs,
            adj_edge: eids,
            edges,
            degree,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Common degree when the graph is regular.
    pub fn degree(&self) -> Option<usize> {
        self.degree
    }

    pub fn is_regular(&self, d: usize) -> bool {
        self.degree == Some(d)
    }

    pub fn deg(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Sorted neighbour list of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// Edge ids aligned with [`Graph::neighbors`].
    pub fn incident_edges(&self, v: usize) -> &[usize] {
        &self.adj_edge[v]
    }

    /// Canonical edge list, `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> (usize, usize) {
        self.edges[id]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_id(u, v).is_some()
    }

    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        let row = self.adj.get(u)?;
        row.binary_search(&v).ok().map(|i| self.adj_edge[u][i])
    }

    /// Spanning subgraph keeping the edges whose id satisfies `keep`.
    pub fn spanning_subgraph(&self, mut keep: impl FnMut(usize) -> bool) -> Graph {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(id, _)| keep(id))
            .map(|(_, &e)| e)
            .collect();
        Graph::from_sorted_unique(self.n, edges)
    }

    /// True when `self` has the same vertex set as `host` and every edge of
    /// `self` is an edge of `host`.
    pub fn is_spanning_subgraph_of(&self, host: &Graph) -> bool {
        self.n == host.n && self.edges.iter().all(|&(u, v)| host.has_edge(u, v))
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &w in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }

    /// Parses the edge-list text format: a header `n m`, then `m` lines `u v`.
    /// Everything after `#` on a line is ignored, as are blank lines.
    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());

        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 0,
            msg: "missing header line `n m`".into(),
        })?;
        let (n, m) = parse_pair(hline, header)?;

        let mut edges = Vec::with_capacity(m);
        let mut seen = std::collections::HashSet::with_capacity(m);
        for (line, body) in lines {
            let (u, v) = parse_pair(line, body)?;
            if u >= n || v >= n {
                return Err(Error::Parse {
                    line,
                    msg: format!("vertex id out of range (n = {n})"),
                });
            }
            if u == v {
                return Err(Error::Parse {
                    line,
                    msg: format!("self-loop at vertex {u}"),
                });
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::Parse {
                    line,
                    msg: format!("duplicate edge ({u}, {v})"),
                });
            }
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(Error::Parse {
                line: 1,
                msg: format!("header declares {m} edges, found {}", edges.len()),
            });
        }
        Graph::from_edges(n, edges).map_err(|e| Error::Parse {
            line: 0,
            msg: e.to_string(),
        })
    }

    /// Serializes in canonical order: header, then edges sorted with `u < v`.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::with_capacity(12 * (self.edges.len() + 1));
        let _ = writeln!(out, "{} {}", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

fn parse_pair(line: usize, body: &str) -> Result<(usize, usize)> {
    let mut it = body.split_whitespace();
    let mut next = |what: &str| -> Result<usize> {
        let tok = it.next().ok_or_else(|| Error::Parse {
            line,
            msg: format!("missing {what}"),
        })?;
        tok.parse().map_err(|_| Error::Parse {
            line,
            msg: format!("bad integer `{tok}`"),
        })
    };
    let a = next("first field")?;
    let b = next("second field")?;
    if it.next().is_some() {
        return Err(Error::Parse {
            line,
            msg: "trailing fields".into(),
        });
    }
    Ok((a, b))
}

/// Subset of `V(G)` with dense membership and a sorted member list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    n: usize,
    bits: Vec<u64>,
    members: Vec<usize>,
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.members.serialize(s)
    }
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        VertexSet {
            n,
            bits: vec![0; n.div_ceil(64)],
            members: Vec::new(),
        }
    }

    /// Panics if a member is `>= n`.
    pub fn from_members(n: usize, members: impl IntoIterator<Item = usize>) -> Self {
        let mut set = Self::empty(n);
        for v in members {
            assert!(v < n, "vertex {v} out of range for {n} vertices");
            set.bits[v / 64] |= 1 << (v % 64);
        }
        set.members = (0..n).filter(|&v| set.contains(v)).collect();
        set
    }

    /// Set whose members are the one-bits of `mask` (`n <= 64`).
    pub fn from_mask(n: usize, mask: u64) -> Self {
        assert!(n <= 64);
        Self::from_members(n, (0..n).filter(|&v| mask >> v & 1 == 1))
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.n && self.bits[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn complement(&self) -> VertexSet {
        VertexSet::from_members(self.n, (0..self.n).filter(|&v| !self.contains(v)))
    }
}

/// `|∂_G S|`: edges with exactly one endpoint in `S`.
pub fn edge_boundary(g: &Graph, s: &VertexSet) -> usize {
    s.members()
        .iter()
        .map(|&u| g.neighbors(u).iter().filter(|&&w| !s.contains(w)).count())
        .sum()
}

/// Same as [`edge_boundary`] for a sorted slice of members (linear membership
/// scan; meant for the small sets produced by connected-set enumeration).
pub fn edge_boundary_sorted(g: &Graph, members: &[usize]) -> usize {
    members
        .iter()
        .map(|&u| {
            g.neighbors(u)
                .iter()
                .filter(|w| members.binary_search(w).is_err())
                .count()
        })
        .sum()
}

/// Connected components of the subgraph induced on `s`.
pub fn induced_components(g: &Graph, s: &VertexSet) -> Vec<VertexSet> {
    let mut seen = VertexSet::empty(g.n()).bits;
    let mut out = Vec::new();
    for &start in s.members() {
        if seen[start / 64] >> (start % 64) & 1 == 1 {
            continue;
        }
        seen[start / 64] |= 1 << (start % 64);
        let mut comp = vec![start];
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &w in g.neighbors(u) {
                if s.contains(w) && seen[w / 64] >> (w % 64) & 1 == 0 {
                    seen[w / 64] |= 1 << (w % 64);
                    comp.push(w);
                    stack.push(w);
                }
            }
        }
        out.push(VertexSet::from_members(g.n(), comp));
    }
    out
}

/// Ordered cycle `v0 .. v(k-1)` in canonical form: `v0` is the minimum
/// vertex and `v1 < v(k-1)`, which is the lexicographically least of all
/// rotations and reflections.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Cycle(Vec<usize>);

impl Cycle {
    /// Canonicalizes an arbitrary rotation/direction of a cycle. Returns
    /// `None` if the sequence is not a cycle of `g`.
    pub fn new(g: &Graph, vertices: &[usize]) -> Option<Cycle> {
        let k = vertices.len();
        if k < 3 {
            return None;
        }
        let mut sorted = vertices.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        if (0..k).any(|i| !g.has_edge(vertices[i], vertices[(i + 1) % k])) {
            return None;
        }
        Some(Cycle::canonical(vertices))
    }

    fn canonical(vertices: &[usize]) -> Cycle {
        let k = vertices.len();
        let pos = (0..k).min_by_key(|&i| vertices[i]).unwrap_or(0);
        let fwd: Vec<usize> = (0..k).map(|i| vertices[(pos + i) % k]).collect();
        if fwd[1] < fwd[k - 1] {
            Cycle(fwd)
        } else {
            let mut rev = Vec::with_capacity(k);
            rev.push(fwd[0]);
            rev.extend(fwd[1..].iter().rev());
            Cycle(rev)
        }
    }

    /// Trusted constructor for sequences already in canonical form.
    pub(crate) fn from_canonical(vertices: Vec<usize>) -> Cycle {
        debug_assert!(vertices.len() >= 3 && vertices[1] < vertices[vertices.len() - 1]);
        Cycle(vertices)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    /// Edge ids of the cycle in traversal order.
    pub fn edge_ids(&self, g: &Graph) -> Vec<usize> {
        let k = self.0.len();
        (0..k)
            .map(|i| {
                g.edge_id(self.0[i], self.0[(i + 1) % k])
                    .expect("cycle edges belong to the graph")
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c4() -> Graph {
        Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(matches!(
            Graph::from_edges(3, [(0, 0)]),
            Err(Error::InvalidGraph(_))
        ));
        assert!(Graph::from_edges(3, [(0, 1), (1, 0)]).is_err());
        assert!(Graph::from_edges(3, [(0, 3)]).is_err());
    }

    #[test]
    fn regular_degree_detected() {
        assert_eq!(c4().degree(), Some(2));
        let p = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(p.degree(), None);
    }

    #[test]
    fn parse_with_comments() {
        let g = Graph::parse_edge_list("# square\n4 4\n0 1\n1 2 # side\n\n2 3\n3 0\n").unwrap();
        assert_eq!(g, c4());
        assert_eq!(g.to_edge_list(), "4 4\n0 1\n0 3\n1 2\n2 3\n");
    }

    #[test]
    fn parse_errors() {
        assert!(Graph::parse_edge_list("").is_err());
        assert!(Graph::parse_edge_list("3 1\n0 0\n").is_err());
        assert!(Graph::parse_edge_list("3 2\n0 1\n1 0\n").is_err());
        assert!(Graph::parse_edge_list("3 1\n0 5\n").is_err());
        assert!(Graph::parse_edge_list("3 2\n0 1\n").is_err());
        assert!(Graph::parse_edge_list("3 1\n0 x\n").is_err());
    }

    #[test]
    fn boundary_on_c4() {
        let g = c4();
        let s = VertexSet::from_members(4, [0, 1]);
        assert_eq!(edge_boundary(&g, &s), 2);
        assert_eq!(edge_boundary_sorted(&g, &[0, 1]), 2);
        let split = VertexSet::from_members(4, [0, 2]);
        assert_eq!(induced_components(&g, &split).len(), 2);
    }

    #[test]
    fn cycle_canonical_form() {
        let g = c4();
        let a = Cycle::new(&g, &[2, 1, 0, 3]).unwrap();
        let b = Cycle::new(&g, &[3, 0, 1, 2]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.vertices(), &[0, 1, 2, 3]);
        assert!(Cycle::new(&g, &[0, 2, 1, 3]).is_none());
        assert!(Cycle::new(&g, &[0, 1]).is_none());
    }

    #[test]
    fn vertex_set_serializes_as_sorted_ids() {
        let s = VertexSet::from_members(10, [7, 2, 5]);
        assert_eq!(s.members(), &[2, 5, 7]);
        assert_eq!(s.complement().len(), 7);
    }
}
