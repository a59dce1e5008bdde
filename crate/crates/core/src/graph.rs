//! Simple undirected graphs with dense vertex ids.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// An undirected edge stored with `u < v`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
}

impl Edge {
    /// Builds the normalized edge between `a` and `b`. Panics on `a == b`.
    pub fn new(a: usize, b: usize) -> Self {
        assert_ne!(a, b, "self-loop {a}-{a}");
        if a < b {
            Edge { u: a, v: b }
        } else {
            Edge { u: b, v: a }
        }
    }

    pub fn other(&self, w: usize) -> usize {
        if w == self.u {
            self.v
        } else {
            debug_assert_eq!(w, self.v);
            self.u
        }
    }

    pub fn contains(&self, w: usize) -> bool {
        self.u == w || self.v == w
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.u, self.v)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.u, self.v)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0:?}")]
    DuplicateEdge(Edge),
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
}

/// Simple undirected graph on vertices `0..n`.
///
/// Edges are kept sorted; adjacency lists are sorted ascending.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, {:?})", self.n, self.edges)
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from vertex pairs, rejecting loops, duplicates and
    /// out-of-range ids.
    pub fn from_edges<I>(n: usize, pairs: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut seen = BTreeSet::new();
        for (a, b) in pairs {
            for w in [a, b] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            let e = Edge::new(a, b);
            if !seen.insert(e) {
                return Err(GraphError::DuplicateEdge(e));
            }
        }
        Ok(Self::from_sorted_unique(n, seen.into_iter().collect()))
    }

    fn from_sorted_unique(n: usize, edges: Vec<Edge>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for e in &edges {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { n, edges, adj }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| Edge { u, v }))
            .collect();
        Self::from_sorted_unique(n, edges)
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3);
        Self::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle is simple")
    }

    pub fn path(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("path is simple")
    }

    pub fn star(leaves: usize) -> Self {
        Self::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))).expect("star is simple")
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let pairs = (0..a).flat_map(|i| (0..b).map(move |j| (i, a + j)));
        Self::from_edges(a + b, pairs).expect("bipartite graph is simple")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && a < self.n && b < self.n && self.adj[a].binary_search(&b).is_ok()
    }

    /// Index of `e` in [`Graph::edges`].
    pub fn edge_index(&self, e: Edge) -> Option<usize> {
        self.edges.binary_search(&e).ok()
    }

    pub fn is_complete(&self) -> bool {
        self.edges.len() == self.n * self.n.saturating_sub(1) / 2
    }

    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        self.component_of(0).len() == self.n
    }

    /// Vertices reachable from `start`, in BFS order.
    pub fn component_of(&self, start: usize) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        let mut out = vec![start];
        seen[start] = true;
        let mut i = 0;
        while i < out.len() {
            let v = out[i];
            i += 1;
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    out.push(w);
                }
            }
        }
        out
    }

    /// Returns a copy with `extra` edges added; pairs already present are ignored.
    pub fn with_edges<I>(&self, extra: I) -> Self
    where
        I: IntoIterator<Item = Edge>,
    {
        let mut set: BTreeSet<Edge> = self.edges.iter().copied().collect();
        set.extend(extra);
        Self::from_sorted_unique(self.n, set.into_iter().collect())
    }

    /// Subgraph with the given edges (subset of this graph's edges) on the same vertex set.
    pub fn edge_subgraph<I>(&self, keep: I) -> Self
    where
        I: IntoIterator<Item = Edge>,
    {
        let set: BTreeSet<Edge> = keep.into_iter().filter(|e| self.has_edge(e.u, e.v)).collect();
        Self::from_sorted_unique(self.n, set.into_iter().collect())
    }

    /// Relabels vertex `v` to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n);
        let edges: BTreeSet<Edge> = self
            .edges
            .iter()
            .map(|e| Edge::new(perm[e.u], perm[e.v]))
            .collect();
        Self::from_sorted_unique(self.n, edges.into_iter().collect())
    }

    /// Induced subgraph on `vertices`, relabeled densely in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Self {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let edges: BTreeSet<Edge> = self
            .edges
            .iter()
            .filter(|e| index[e.u] != usize::MAX && index[e.v] != usize::MAX)
            .map(|e| Edge::new(index[e.u], index[e.v]))
            .collect();
        Self::from_sorted_unique(vertices.len(), edges.into_iter().collect())
    }

    /// `u` and `v` are twins when swapping them is an automorphism,
    /// i.e. `N(u) \ {v} == N(v) \ {u}`.
    pub fn are_twins(&self, u: usize, v: usize) -> bool {
        if u == v {
            return true;
        }
        let a = self.adj[u].iter().filter(|&&w| w != v);
        let b = self.adj[v].iter().filter(|&&w| w != u);
        a.eq(b)
    }

    /// Partition of the vertices into twin classes; each class sorted, classes
    /// ordered by smallest member.
    pub fn twin_classes(&self) -> Vec<Vec<usize>> {
        let mut class_of = vec![usize::MAX; self.n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for v in 0..self.n {
            if class_of[v] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut members = vec![v];
            class_of[v] = id;
            for w in v + 1..self.n {
                if class_of[w] == usize::MAX && self.are_twins(v, w) {
                    class_of[w] = id;
                    members.push(w);
                }
            }
            classes.push(members);
        }
        classes
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_edges() {
        assert_eq!(Graph::from_edges(3, [(0, 0)]), Err(GraphError::SelfLoop(0)));
        assert_eq!(
            Graph::from_edges(3, [(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge(Edge::new(0, 1)))
        );
        assert_eq!(
            Graph::from_edges(3, [(0, 3)]),
            Err(GraphError::VertexOutOfRange { vertex: 3, n: 3 })
        );
    }

    #[test]
    fn families() {
        assert_eq!(Graph::complete(5).edge_count(), 10);
        assert_eq!(Graph::cycle(5).edge_count(), 5);
        assert_eq!(Graph::path(4).edge_count(), 3);
        assert_eq!(Graph::complete_bipartite(3, 3).edge_count(), 9);
        assert!(Graph::complete(4).is_complete());
        assert!(!Graph::empty(3).is_connected());
        assert!(Graph::empty(1).is_connected());
    }

    #[test]
    fn twins() {
        let k4 = Graph::complete(4);
        assert_eq!(k4.twin_classes(), vec![vec![0, 1, 2, 3]]);
        let p4 = Graph::path(4);
        assert_eq!(p4.twin_classes().len(), 4);
        let star = Graph::star(3);
        assert_eq!(star.twin_classes(), vec![vec![0], vec![1, 2, 3]]);
    }

    #[test]
    fn relabel_and_induced() {
        let g = Graph::path(3);
        let h = g.relabel(&[2, 0, 1]);
        assert!(h.has_edge(2, 0) && h.has_edge(0, 1) && !h.has_edge(2, 1));
        let k = Graph::complete(5).induced(&[4, 2, 0]);
        assert!(k.is_complete() && k.vertex_count() == 3);
    }
}
