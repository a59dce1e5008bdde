//! SPQR trees of biconnected graphs and the st-one-sided dynamic program.
//!
//! The tree is built by repeatedly splitting at separation pairs until every
//! piece is a bond, a cycle or 3-connected, then merging adjacent bonds and
//! adjacent cycles. Every real edge finally hangs off its own Q-node.

mod dp;

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::blockcut::is_biconnected;
use crate::graph::{Edge, Graph};

pub use dp::{planar_strongly_1sided, planar_strongly_1sided_with, st_one_sided, OneSidedWitness};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpqrError {
    #[error("graph is not biconnected")]
    NotBiconnected,
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph is not planar")]
    NotPlanar,
    #[error("vertex {0} is out of range")]
    BadVertex(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum NodeKind {
    S,
    P,
    Q,
    R,
}

/// What a skeleton edge stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Link {
    /// The edge of the graph itself (Q-nodes only).
    Real,
    /// Virtual edge whose twin lives in the given node.
    Node(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SkeletonEdge {
    pub u: usize,
    pub v: usize,
    pub link: Link,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpqrNode {
    pub kind: NodeKind,
    pub edges: Vec<SkeletonEdge>,
}

impl SpqrNode {
    pub fn vertices(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.edges.iter().flat_map(|e| [e.u, e.v]).collect();
        set.into_iter().collect()
    }

    /// Neighboring tree nodes, in skeleton edge order.
    pub fn links(&self) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter_map(|e| match e.link {
            Link::Node(j) => Some(j),
            Link::Real => None,
        })
    }

    /// Skeleton edge whose twin is in node `j`.
    pub fn edge_to(&self, j: usize) -> Option<usize> {
        self.edges.iter().position(|e| e.link == Link::Node(j))
    }
}

/// Unrooted SPQR tree with one Q-node per edge. Nodes are ordered S, P and R
/// nodes first by their sorted vertex lists, then Q-nodes by edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpqrTree {
    pub nodes: Vec<SpqrNode>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tag {
    Real,
    Virt(usize),
}

type Comp = Vec<(usize, usize, Tag)>;

fn comp_vertices(c: &Comp) -> Vec<usize> {
    let set: BTreeSet<usize> = c.iter().flat_map(|&(u, v, _)| [u, v]).collect();
    set.into_iter().collect()
}

fn is_cycle(c: &Comp) -> bool {
    let verts = comp_vertices(c);
    if verts.len() < 3 || c.len() != verts.len() {
        return false;
    }
    let mut deg: BTreeMap<usize, usize> = BTreeMap::new();
    for &(u, v, _) in c {
        *deg.entry(u).or_default() += 1;
        *deg.entry(v).or_default() += 1;
    }
    deg.values().all(|&d| d == 2) && connected(c, &verts)
}

fn connected(c: &Comp, verts: &[usize]) -> bool {
    let mut seen = BTreeSet::from([verts[0]]);
    let mut stack = vec![verts[0]];
    while let Some(x) = stack.pop() {
        for &(u, v, _) in c {
            let y = if u == x {
                v
            } else if v == x {
                u
            } else {
                continue;
            };
            if seen.insert(y) {
                stack.push(y);
            }
        }
    }
    seen.len() == verts.len()
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let nxt = parent[y];
        parent[y] = r;
        y = nxt;
    }
    r
}

/// A split `(a, b, edges of one side)`, or `None` when the component is a
/// bond, a cycle or 3-connected.
fn find_split(c: &Comp) -> Option<(usize, usize, Vec<bool>)> {
    let verts = comp_vertices(c);
    if verts.len() <= 2 || is_cycle(c) {
        return None;
    }
    for (i, &a) in verts.iter().enumerate() {
        for &b in &verts[i + 1..] {
            let mut parent: Vec<usize> = (0..c.len()).collect();
            let mut first_at: BTreeMap<usize, usize> = BTreeMap::new();
            for (k, &(u, v, _)) in c.iter().enumerate() {
                for w in [u, v] {
                    if w == a || w == b {
                        continue;
                    }
                    match first_at.get(&w) {
                        Some(&f) => {
                            let (x, y) = (find(&mut parent, f), find(&mut parent, k));
                            parent[x] = y;
                        }
                        None => {
                            first_at.insert(w, k);
                        }
                    }
                }
            }
            let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for k in 0..c.len() {
                let r = find(&mut parent, k);
                classes.entry(r).or_default().push(k);
            }
            let is_ab = |k: usize| {
                let (u, v, _) = c[k];
                (u == a && v == b) || (u == b && v == a)
            };
            let nonab: Vec<&Vec<usize>> = classes.values().filter(|cl| !is_ab(cl[0])).collect();
            let ab: Vec<usize> = (0..c.len()).filter(|&k| is_ab(k)).collect();
            let side = if nonab.len() >= 2 {
                nonab[0].clone()
            } else if nonab.len() == 1 && ab.len() >= 2 {
                ab
            } else {
                continue;
            };
            let mut part = vec![false; c.len()];
            for k in side {
                part[k] = true;
            }
            return Some((a, b, part));
        }
    }
    None
}

fn kind_of(c: &Comp) -> NodeKind {
    if comp_vertices(c).len() == 2 {
        NodeKind::P
    } else if is_cycle(c) {
        NodeKind::S
    } else {
        NodeKind::R
    }
}

fn split_components(edges: &[Edge]) -> Vec<Comp> {
    let mut work: Vec<Comp> = vec![edges.iter().map(|e| (e.u, e.v, Tag::Real)).collect()];
    let mut done = Vec::new();
    let mut next_virt = 0;
    while let Some(c) = work.pop() {
        match find_split(&c) {
            None => done.push(c),
            Some((a, b, part)) => {
                let tag = Tag::Virt(next_virt);
                next_virt += 1;
                let mut left: Comp = Vec::new();
                let mut right: Comp = Vec::new();
                for (k, &e) in c.iter().enumerate() {
                    if part[k] {
                        left.push(e);
                    } else {
                        right.push(e);
                    }
                }
                left.push((a, b, tag));
                right.push((a, b, tag));
                work.push(left);
                work.push(right);
            }
        }
    }
    // Merge adjacent bonds and adjacent cycles.
    loop {
        let mut merged = false;
        'outer: for i in 0..done.len() {
            let ki = kind_of(&done[i]);
            if ki == NodeKind::R {
                continue;
            }
            for j in i + 1..done.len() {
                if kind_of(&done[j]) != ki {
                    continue;
                }
                let shared = done[i].iter().find_map(|&(_, _, t)| match t {
                    Tag::Virt(x) if done[j].iter().any(|&(_, _, s)| s == t) => Some(x),
                    _ => None,
                });
                if let Some(x) = shared {
                    let other = done.remove(j);
                    let keep = |&(_, _, t): &(usize, usize, Tag)| t != Tag::Virt(x);
                    let mut joined: Comp = done[i].iter().copied().filter(keep).collect();
                    joined.extend(other.into_iter().filter(keep));
                    done[i] = joined;
                    merged = true;
                    break 'outer;
                }
            }
        }
        if !merged {
            break;
        }
    }
    done
}

impl SpqrTree {
    /// SPQR tree of a biconnected graph given by its edges (vertex labels
    /// are arbitrary). A single edge gives one Q-node.
    pub fn from_edges(edges: &[Edge]) -> SpqrTree {
        let mut edges = edges.to_vec();
        edges.sort();
        if edges.len() == 1 {
            let e = edges[0];
            return SpqrTree {
                nodes: vec![SpqrNode {
                    kind: NodeKind::Q,
                    edges: vec![SkeletonEdge {
                        u: e.u,
                        v: e.v,
                        link: Link::Real,
                    }],
                }],
            };
        }
        let mut comps = split_components(&edges);
        for c in comps.iter_mut() {
            for e in c.iter_mut() {
                if e.0 > e.1 {
                    *e = (e.1, e.0, e.2);
                }
            }
            c.sort_by_key(|&(u, v, t)| {
                (
                    u,
                    v,
                    match t {
                        Tag::Real => 0,
                        Tag::Virt(x) => x + 1,
                    },
                )
            });
        }
        comps.sort_by_key(|c| (comp_vertices(c), c.iter().map(|&(u, v, _)| (u, v)).collect::<Vec<_>>()));
        let k = comps.len();
        // Nodes 0..k are the components, then one Q-node per real edge.
        let mut owner: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, c) in comps.iter().enumerate() {
            for &(_, _, t) in c {
                if let Tag::Virt(x) = t {
                    owner.entry(x).or_default().push(i);
                }
            }
        }
        let q_index: BTreeMap<Edge, usize> = edges.iter().enumerate().map(|(i, &e)| (e, k + i)).collect();
        let mut nodes: Vec<SpqrNode> = comps
            .iter()
            .enumerate()
            .map(|(i, c)| SpqrNode {
                kind: kind_of(c),
                edges: c
                    .iter()
                    .map(|&(u, v, t)| SkeletonEdge {
                        u,
                        v,
                        link: match t {
                            Tag::Real => Link::Node(q_index[&Edge::new(u, v)]),
                            Tag::Virt(x) => {
                                let o = &owner[&x];
                                Link::Node(if o[0] == i { o[1] } else { o[0] })
                            }
                        },
                    })
                    .collect(),
            })
            .collect();
        let mut q_nodes: Vec<(usize, SpqrNode)> = Vec::new();
        for (ci, c) in comps.iter().enumerate() {
            for &(u, v, t) in c {
                if t == Tag::Real {
                    q_nodes.push((
                        q_index[&Edge::new(u, v)],
                        SpqrNode {
                            kind: NodeKind::Q,
                            edges: vec![
                                SkeletonEdge { u, v, link: Link::Real },
                                SkeletonEdge {
                                    u,
                                    v,
                                    link: Link::Node(ci),
                                },
                            ],
                        },
                    ));
                }
            }
        }
        q_nodes.sort_by_key(|&(i, _)| i);
        nodes.extend(q_nodes.into_iter().map(|(_, n)| n));
        SpqrTree { nodes }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Tree adjacency lists.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        self.nodes.iter().map(|n| n.links().collect()).collect()
    }

    /// Q-node holding the real edge `e`.
    pub fn q_node(&self, e: Edge) -> Option<usize> {
        self.nodes.iter().position(|n| {
            n.kind == NodeKind::Q && n.edges.iter().any(|s| s.link == Link::Real && Edge::new(s.u, s.v) == e)
        })
    }

    /// Number of nodes of each kind, in S, P, Q, R order.
    pub fn kind_counts(&self) -> [usize; 4] {
        let mut c = [0; 4];
        for n in &self.nodes {
            c[n.kind as usize] += 1;
        }
        c
    }

    /// Checks the structural invariants against the graph with edges `edges`:
    /// skeleton shapes, symmetric twins with equal endpoints, tree shape, no
    /// adjacent S-S or P-P pair, and that joining the skeletons gives back
    /// exactly the edge set.
    pub fn check(&self, edges: &[Edge]) -> Result<(), String> {
        let nn = self.nodes.len();
        let mut links = 0;
        for (i, node) in self.nodes.iter().enumerate() {
            for e in &node.edges {
                if e.u == e.v {
                    return Err(format!("node {i} has a loop"));
                }
                if let Link::Node(j) = e.link {
                    links += 1;
                    let back = self.nodes.get(j).and_then(|o| o.edge_to(i).map(|k| o.edges[k]));
                    match back {
                        Some(t) if Edge::new(t.u, t.v) == Edge::new(e.u, e.v) => {}
                        _ => return Err(format!("twin of node {i} edge in node {j} is missing")),
                    }
                    if node.links().filter(|&x| x == j).count() != 1 {
                        return Err(format!("nodes {i} and {j} share more than one virtual pair"));
                    }
                    let kj = self.nodes[j].kind;
                    if kj == node.kind && matches!(kj, NodeKind::S | NodeKind::P) {
                        return Err(format!("adjacent nodes {i} and {j} have the same kind"));
                    }
                }
            }
            let verts = node.vertices();
            let ok = match node.kind {
                NodeKind::Q => {
                    nn == 1 && node.edges.len() == 1
                        || node.edges.len() == 2
                            && Edge::new(node.edges[0].u, node.edges[0].v) == Edge::new(node.edges[1].u, node.edges[1].v)
                            && node.edges.iter().filter(|e| e.link == Link::Real).count() == 1
                }
                NodeKind::P => verts.len() == 2 && node.edges.len() >= 3,
                NodeKind::S => {
                    let c: Comp = node.edges.iter().map(|e| (e.u, e.v, Tag::Real)).collect();
                    is_cycle(&c)
                }
                NodeKind::R => {
                    let c: Comp = node.edges.iter().map(|e| (e.u, e.v, Tag::Real)).collect();
                    let simple: BTreeSet<Edge> = node.edges.iter().map(|e| Edge::new(e.u, e.v)).collect();
                    verts.len() >= 4 && simple.len() == node.edges.len() && find_split(&c).is_none()
                }
            };
            if !ok {
                return Err(format!("node {i} skeleton does not match kind {:?}", node.kind));
            }
            if node.kind != NodeKind::Q && node.edges.iter().any(|e| e.link == Link::Real) {
                return Err(format!("node {i} holds a real edge"));
            }
        }
        if links / 2 + 1 != nn {
            return Err("tree edge count is not node count minus one".into());
        }
        let adj = self.adjacency();
        let mut seen = vec![false; nn];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err("tree is not connected".into());
        }
        let mut real: Vec<Edge> = self
            .nodes
            .iter()
            .flat_map(|n| n.edges.iter().filter(|e| e.link == Link::Real).map(|e| Edge::new(e.u, e.v)))
            .collect();
        real.sort();
        let mut want = edges.to_vec();
        want.sort();
        if real != want {
            return Err("joined skeletons differ from the graph".into());
        }
        Ok(())
    }
}

/// SPQR tree of a biconnected graph.
pub fn build_spqr(g: &Graph) -> Result<SpqrTree, SpqrError> {
    if !is_biconnected(g) {
        return Err(SpqrError::NotBiconnected);
    }
    Ok(SpqrTree::from_edges(g.edges()))
}
