//! Planarity testing with an embedding certificate.
//!
//! Each biconnected block is embedded with the face-by-face path addition
//! method of Demoucron, Malgrange and Pertuiset; block embeddings are spliced
//! at cut vertices. Every returned rotation system passes the Euler check.

use std::collections::{HashMap, HashSet};

use crate::blockcut::biconnected_blocks;
use crate::graph::{Edge, Graph};
use crate::rotation::RotationSystem;

/// Returns a plane rotation system of `g`, or `None` when `g` is not planar.
pub fn planar_embedding(g: &Graph) -> Option<RotationSystem> {
    let n = g.vertex_count();
    let mut rot: Vec<Vec<usize>> = vec![Vec::new(); n];
    for block in biconnected_blocks(g) {
        let local = embed_block(&block)?;
        for (v, list) in local {
            rot[v].extend(list);
        }
    }
    let r = RotationSystem::new(g, rot).expect("block rotations cover every edge");
    debug_assert!(r.is_plane());
    Some(r)
}

pub fn is_planar(g: &Graph) -> bool {
    planar_embedding(g).is_some()
}

/// Embeds one biconnected block given by its edges. Returns the rotation of
/// each block vertex.
pub(crate) fn embed_block(edges: &[Edge]) -> Option<HashMap<usize, Vec<usize>>> {
    let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
    for e in edges {
        adj.entry(e.u).or_default().push(e.v);
        adj.entry(e.v).or_default().push(e.u);
    }
    for list in adj.values_mut() {
        list.sort_unstable();
    }
    if edges.len() == 1 {
        let e = edges[0];
        return Some(HashMap::from([(e.u, vec![e.v]), (e.v, vec![e.u])]));
    }
    // Quick reject by edge count.
    let nv = adj.len();
    if nv >= 3 && edges.len() > 3 * nv - 6 {
        return None;
    }

    let cycle = find_cycle(&adj);
    let mut in_h: HashSet<usize> = cycle.iter().copied().collect();
    let mut h_edges: HashSet<Edge> = HashSet::new();
    for i in 0..cycle.len() {
        h_edges.insert(Edge::new(cycle[i], cycle[(i + 1) % cycle.len()]));
    }
    let mut faces: Vec<Vec<usize>> = vec![cycle.clone(), cycle.iter().rev().copied().collect()];

    while h_edges.len() < edges.len() {
        let fragments = fragments(&adj, edges, &in_h, &h_edges);
        let mut chosen: Option<(usize, usize)> = None;
        for (fi, frag) in fragments.iter().enumerate() {
            let admissible: Vec<usize> = faces
                .iter()
                .enumerate()
                .filter(|(_, f)| frag.attachments.iter().all(|a| f.contains(a)))
                .map(|(i, _)| i)
                .collect();
            match admissible.len() {
                0 => return None,
                1 => {
                    chosen = Some((fi, admissible[0]));
                    break;
                }
                _ => {
                    if chosen.is_none() {
                        chosen = Some((fi, admissible[0]));
                    }
                }
            }
        }
        let (fi, face_idx) = chosen.expect("at least one fragment remains");
        let path = fragment_path(&adj, &fragments[fi], &in_h);
        for w in &path {
            in_h.insert(*w);
        }
        for pair in path.windows(2) {
            h_edges.insert(Edge::new(pair[0], pair[1]));
        }
        let face = faces.swap_remove(face_idx);
        let (f1, f2) = split_face(&face, &path);
        faces.push(f1);
        faces.push(f2);
    }

    // Face a,b,c means dart a->b is followed by b->c, i.e. c follows a
    // counterclockwise around b.
    let mut succ: HashMap<(usize, usize), usize> = HashMap::new();
    for f in &faces {
        let k = f.len();
        for i in 0..k {
            let a = f[i];
            let b = f[(i + 1) % k];
            let c = f[(i + 2) % k];
            succ.insert((b, a), c);
        }
    }
    let mut out = HashMap::new();
    for (&v, nbrs) in &adj {
        let mut list = Vec::with_capacity(nbrs.len());
        let mut cur = nbrs[0];
        for _ in 0..nbrs.len() {
            list.push(cur);
            cur = *succ.get(&(v, cur))?;
        }
        if cur != nbrs[0] {
            return None;
        }
        out.insert(v, list);
    }
    Some(out)
}

fn find_cycle(adj: &HashMap<usize, Vec<usize>>) -> Vec<usize> {
    // DFS from the smallest vertex until a back edge closes a cycle.
    let start = *adj.keys().min().expect("non-empty block");
    let mut parent: HashMap<usize, usize> = HashMap::new();
    let mut depth: HashMap<usize, usize> = HashMap::new();
    let mut stack = vec![(start, usize::MAX)];
    while let Some((v, p)) = stack.pop() {
        if depth.contains_key(&v) {
            continue;
        }
        let d = if p == usize::MAX { 0 } else { depth[&p] + 1 };
        depth.insert(v, d);
        parent.insert(v, p);
        for &w in &adj[&v] {
            if w == p {
                continue;
            }
            if let Some(&dw) = depth.get(&w) {
                if dw < d {
                    let mut cyc = vec![v];
                    let mut x = v;
                    while x != w {
                        x = parent[&x];
                        cyc.push(x);
                    }
                    return cyc;
                }
            } else {
                stack.push((w, v));
            }
        }
    }
    unreachable!("biconnected block with two or more edges has a cycle")
}

struct Fragment {
    attachments: Vec<usize>,
    /// Chord fragment: a single edge between two embedded vertices.
    chord: Option<Edge>,
    /// Component fragment: its non-embedded vertices.
    inner: Vec<usize>,
}

fn fragments(
    adj: &HashMap<usize, Vec<usize>>,
    edges: &[Edge],
    in_h: &HashSet<usize>,
    h_edges: &HashSet<Edge>,
) -> Vec<Fragment> {
    let mut out = Vec::new();
    for e in edges {
        if !h_edges.contains(e) && in_h.contains(&e.u) && in_h.contains(&e.v) {
            out.push(Fragment {
                attachments: vec![e.u, e.v],
                chord: Some(*e),
                inner: Vec::new(),
            });
        }
    }
    let mut seen: HashSet<usize> = HashSet::new();
    let mut verts: Vec<usize> = adj.keys().copied().collect();
    verts.sort_unstable();
    for v in verts {
        if in_h.contains(&v) || seen.contains(&v) {
            continue;
        }
        let mut inner = vec![v];
        let mut attach: Vec<usize> = Vec::new();
        seen.insert(v);
        let mut i = 0;
        while i < inner.len() {
            let x = inner[i];
            i += 1;
            for &w in &adj[&x] {
                if in_h.contains(&w) {
                    if !attach.contains(&w) {
                        attach.push(w);
                    }
                } else if seen.insert(w) {
                    inner.push(w);
                }
            }
        }
        attach.sort_unstable();
        out.push(Fragment {
            attachments: attach,
            chord: None,
            inner,
        });
    }
    out
}

/// Path through the fragment between two distinct attachments.
fn fragment_path(
    adj: &HashMap<usize, Vec<usize>>,
    frag: &Fragment,
    in_h: &HashSet<usize>,
) -> Vec<usize> {
    if let Some(e) = frag.chord {
        return vec![e.u, e.v];
    }
    let a = frag.attachments[0];
    let inner: HashSet<usize> = frag.inner.iter().copied().collect();
    // BFS from a through inner vertices to any other attachment.
    let mut prev: HashMap<usize, usize> = HashMap::new();
    let mut queue = std::collections::VecDeque::new();
    for &w in &adj[&a] {
        if inner.contains(&w) && !prev.contains_key(&w) {
            prev.insert(w, a);
            queue.push_back(w);
        }
    }
    while let Some(x) = queue.pop_front() {
        for &w in &adj[&x] {
            if w != a && in_h.contains(&w) {
                let mut path = vec![w, x];
                let mut y = x;
                while y != a {
                    y = prev[&y];
                    path.push(y);
                }
                path.reverse();
                return path;
            }
            if inner.contains(&w) && !prev.contains_key(&w) {
                prev.insert(w, x);
                queue.push_back(w);
            }
        }
    }
    unreachable!("fragment of a biconnected block has two attachments")
}

/// Splits `face` along `path` (whose endpoints lie on the face), keeping the
/// orientation of both halves consistent with the original.
fn split_face(face: &[usize], path: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let k = face.len();
    let x = path[0];
    let y = *path.last().unwrap();
    let i = face.iter().position(|&w| w == x).unwrap();
    let j = face.iter().position(|&w| w == y).unwrap();
    let inner = &path[1..path.len() - 1];
    // x ... y along the face, then back to x along the path.
    let mut f1 = Vec::new();
    let mut t = i;
    loop {
        f1.push(face[t]);
        if t == j {
            break;
        }
        t = (t + 1) % k;
    }
    f1.extend(inner.iter().rev());
    // y ... x along the face, then forward along the path.
    let mut f2 = Vec::new();
    let mut t = j;
    loop {
        f2.push(face[t]);
        if t == i {
            break;
        }
        t = (t + 1) % k;
    }
    f2.extend(inner.iter());
    (f1, f2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_cases() {
        assert!(is_planar(&Graph::complete(4)));
        assert!(!is_planar(&Graph::complete(5)));
        assert!(!is_planar(&Graph::complete_bipartite(3, 3)));
        assert!(is_planar(&Graph::complete_bipartite(2, 5)));
        assert!(is_planar(&Graph::cycle(7)));
        assert!(is_planar(&Graph::path(4)));
        assert!(is_planar(&Graph::empty(3)));
    }

    #[test]
    fn petersen_is_not_planar() {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        let g = Graph::from_edges(10, outer.chain(spokes).chain(inner)).unwrap();
        assert!(!is_planar(&g));
    }

    #[test]
    fn octahedron_and_embedding_certificate() {
        let g = Graph::from_edges(
            6,
            [
                (0, 1), (0, 2), (0, 3), (0, 4),
                (5, 1), (5, 2), (5, 3), (5, 4),
                (1, 2), (2, 3), (3, 4), (4, 1),
            ],
        )
        .unwrap();
        let r = planar_embedding(&g).unwrap();
        assert!(r.is_plane());
        assert_eq!(r.face_count(), 8);
    }

    #[test]
    fn subdivided_k5_is_not_planar() {
        let mut pairs = Vec::new();
        let mut next = 5;
        for u in 0..5 {
            for v in u + 1..5 {
                pairs.push((u, next));
                pairs.push((next, v));
                next += 1;
            }
        }
        let g = Graph::from_edges(next, pairs).unwrap();
        assert!(!is_planar(&g));
    }

    #[test]
    fn cut_vertices_are_spliced() {
        // Two K4s sharing vertex 3, plus a pendant edge.
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for b in [[0, 1, 2, 3], [3, 4, 5, 6]] {
            for i in 0..4 {
                for j in i + 1..4 {
                    pairs.push((b[i], b[j]));
                }
            }
        }
        pairs.push((6, 7));
        let g = Graph::from_edges(8, pairs).unwrap();
        let r = planar_embedding(&g).unwrap();
        assert!(r.is_plane());
    }
}
