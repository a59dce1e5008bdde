//! Test corpora: all graphs up to isomorphism and seeded random planar graphs.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{Edge, Graph};
use crate::planarity::is_planar;

/// Upper-triangle adjacency bits, row by row; 0 for graphs with no edges.
fn code(adj: &[u32], perm: &[usize]) -> u64 {
    let n = adj.len();
    let mut inv = vec![0; n];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    let mut c = 0u64;
    let mut bit = 0;
    for i in 0..n {
        for j in i + 1..n {
            if adj[inv[i]] >> inv[j] & 1 == 1 {
                c |= 1 << bit;
            }
            bit += 1;
        }
    }
    c
}

fn adjacency(g: &Graph) -> Vec<u32> {
    (0..g.vertex_count())
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w))
        .collect()
}

/// Isomorphism invariant code: the maximum over relabelings that keep
/// vertices sorted by degree. At most 11 vertices.
pub fn canonical_code(g: &Graph) -> u64 {
    let n = g.vertex_count();
    assert!(n <= 11, "canonical_code supports at most 11 vertices");
    let adj = adjacency(g);
    let mut by_deg: Vec<usize> = (0..n).collect();
    by_deg.sort_by_key(|&v| g.degree(v));
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &v in &by_deg {
        match classes.last_mut() {
            Some(c) if g.degree(c[0]) == g.degree(v) => c.push(v),
            _ => classes.push(vec![v]),
        }
    }
    let mut best = 0;
    let mut perm = vec![0; n];
    fn rec(classes: &mut [Vec<usize>], k: usize, slot: usize, perm: &mut [usize], adj: &[u32], best: &mut u64) {
        if k == classes.len() {
            *best = (*best).max(code(adj, perm));
            return;
        }
        let len = classes[k].len();
        permute(classes, k, 0, len, slot, perm, adj, best);
    }
    #[allow(clippy::too_many_arguments)]
    fn permute(
        classes: &mut [Vec<usize>],
        k: usize,
        i: usize,
        len: usize,
        slot: usize,
        perm: &mut [usize],
        adj: &[u32],
        best: &mut u64,
    ) {
        if i == len {
            for (j, &v) in classes[k].iter().enumerate() {
                perm[v] = slot + j;
            }
            rec(classes, k + 1, slot + len, perm, adj, best);
            return;
        }
        for j in i..len {
            classes[k].swap(i, j);
            permute(classes, k, i + 1, len, slot, perm, adj, best);
            classes[k].swap(i, j);
        }
    }
    rec(&mut classes, 0, 0, &mut perm, &adj, &mut best);
    best
}

/// One representative of every isomorphism class of simple graphs on `n`
/// vertices, built by adding a vertex with every neighborhood.
pub fn all_graphs(n: usize) -> Vec<Graph> {
    let mut level = vec![Graph::empty(0)];
    for k in 1..=n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for g in &level {
            for mask in 0u32..1 << (k - 1) {
                let mut edges: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.u, e.v)).collect();
                edges.extend((0..k - 1).filter(|&w| mask >> w & 1 == 1).map(|w| (w, k - 1)));
                let h = Graph::from_edges(k, edges).expect("valid edges");
                if seen.insert(canonical_code(&h)) {
                    next.push(h);
                }
            }
        }
        level = next;
    }
    level
}

pub fn connected_graphs(n: usize) -> Vec<Graph> {
    all_graphs(n).into_iter().filter(|g| g.is_connected()).collect()
}

pub fn connected_planar_graphs(n: usize) -> Vec<Graph> {
    connected_graphs(n).into_iter().filter(is_planar).collect()
}

/// Connected planar graph: a random spanning tree, then random extra pairs
/// kept while the graph stays planar, up to a random edge count.
pub fn random_planar_graph<R: Rng>(n: usize, rng: &mut R) -> Graph {
    let mut label: Vec<usize> = (0..n).collect();
    label.shuffle(rng);
    let mut edges: Vec<Edge> = (1..n).map(|i| Edge::new(label[i], label[rng.gen_range(0..i)])).collect();
    let max = if n >= 3 { 3 * n - 6 } else { n.saturating_sub(1) };
    let target = rng.gen_range(edges.len()..=max);
    let mut pairs: Vec<Edge> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| Edge::new(a, b)))
        .filter(|e| !edges.contains(e))
        .collect();
    pairs.shuffle(rng);
    for e in pairs {
        if edges.len() >= target {
            break;
        }
        edges.push(e);
        let g = Graph::from_edges(n, edges.iter().map(|e| (e.u, e.v))).expect("valid edges");
        if !is_planar(&g) {
            edges.pop();
        }
    }
    Graph::from_edges(n, edges.iter().map(|e| (e.u, e.v))).expect("valid edges")
}

/// Every Hamiltonian path as a vertex sequence, by backtracking; each
/// undirected path appears once per direction.
pub fn hamiltonian_paths(g: &Graph) -> Vec<Vec<usize>> {
    fn rec(g: &Graph, path: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if path.len() == g.vertex_count() {
            out.push(path.clone());
            return;
        }
        let v = *path.last().expect("nonempty");
        for &w in g.neighbors(v) {
            if !used[w] {
                used[w] = true;
                path.push(w);
                rec(g, path, used, out);
                path.pop();
                used[w] = false;
            }
        }
    }
    let n = g.vertex_count();
    let mut out = Vec::new();
    let mut used = vec![false; n];
    for s in 0..n {
        used[s] = true;
        let mut path = vec![s];
        rec(g, &mut path, &mut used, &mut out);
        used[s] = false;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_counts() {
        let counts: Vec<usize> = (1..=6).map(|n| all_graphs(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 4, 11, 34, 156]);
        let connected: Vec<usize> = (1..=6).map(|n| connected_graphs(n).len()).collect();
        assert_eq!(connected, vec![1, 1, 2, 6, 21, 112]);
    }

    #[test]
    fn hamiltonian_path_counts() {
        assert_eq!(hamiltonian_paths(&Graph::complete(4)).len(), 24);
        assert_eq!(hamiltonian_paths(&Graph::cycle(5)).len(), 10);
        assert!(hamiltonian_paths(&Graph::star(3)).is_empty());
        assert_eq!(hamiltonian_paths(&Graph::path(1)), vec![vec![0]]);
    }

    #[test]
    fn code_is_invariant() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4)]).unwrap();
        let h = g.relabel(&[3, 1, 4, 0, 2]);
        assert_eq!(canonical_code(&g), canonical_code(&h));
        assert_ne!(canonical_code(&g), canonical_code(&Graph::cycle(5)));
    }

    #[test]
    fn random_planar_is_planar_and_connected() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        for n in 1..10 {
            let g = random_planar_graph(n, &mut rng);
            assert_eq!(g.vertex_count(), n);
            assert!(g.is_connected() && is_planar(&g));
        }
    }
}
