//! Between one-page rique layouts and strongly one-sided Hamiltonian paths.
//!
//! A path `v_1, ..., v_n` in a plane graph is strongly one-sided when every
//! edge from an inner vertex `v_i` to a later non-neighbor on the path leaves
//! `v_i` in the same side: counterclockwise strictly between `(v_i,v_{i+1})`
//! and `(v_i,v_{i-1})`, i.e. clockwise between the incoming and outgoing
//! spine edges. The tester also accepts the mirror image.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Edge, Graph};
use crate::layout::{find_pattern, roles_unchecked, EdgeRole, PatternWitness, VertexOrder};
use crate::rotation::RotationSystem;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BridgeError {
    #[error("spine edge {0:?} is missing")]
    MissingSpineEdge(Edge),
    #[error("single page contains a forbidden pattern {0}")]
    PatternPresent(PatternWitness),
    #[error("path is not a Hamiltonian path of the graph")]
    NotHamiltonian,
}

/// Vertex sequence of a Hamiltonian path.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HamPath {
    vertices: Vec<usize>,
}

impl HamPath {
    /// Checks that `vertices` is a permutation of `g`'s vertices with
    /// consecutive pairs adjacent.
    pub fn new(g: &Graph, vertices: Vec<usize>) -> Result<Self, BridgeError> {
        let n = g.vertex_count();
        let mut seen = vec![false; n];
        if vertices.len() != n {
            return Err(BridgeError::NotHamiltonian);
        }
        for &v in &vertices {
            if v >= n || seen[v] {
                return Err(BridgeError::NotHamiltonian);
            }
            seen[v] = true;
        }
        if vertices.windows(2).any(|w| !g.has_edge(w[0], w[1])) {
            return Err(BridgeError::NotHamiltonian);
        }
        Ok(HamPath { vertices })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn spine(&self) -> Vec<Edge> {
        self.vertices.windows(2).map(|w| Edge::new(w[0], w[1])).collect()
    }

    pub fn order(&self) -> VertexOrder {
        VertexOrder::from_sequence(self.vertices.clone()).expect("path is a permutation")
    }
}

/// Which rotation system satisfied the side condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    /// The given rotations.
    Left,
    /// The mirrored rotations.
    Right,
}

/// Rotation system of `g` whose spine is strongly one-sided, built from a
/// pattern-free single page. Around `v_i`, counterclockwise: the next spine
/// edge, outgoing head-edges by increasing target, outgoing tail-edges by
/// decreasing target, incoming head-edges by increasing source, the previous
/// spine edge, incoming tail-edges by increasing source.
pub fn order_to_embedding(g: &Graph, order: &VertexOrder) -> Result<RotationSystem, BridgeError> {
    for e in order.spine() {
        if !g.has_edge(e.u, e.v) {
            return Err(BridgeError::MissingSpineEdge(e));
        }
    }
    if let Some(w) = find_pattern(order, g.edges()) {
        return Err(BridgeError::PatternPresent(w));
    }
    let roles = roles_unchecked(order, g.edges());
    let role = |a: usize, b: usize| roles[g.edge_index(Edge::new(a, b)).expect("edge of g")];
    let n = g.vertex_count();
    let mut rot = vec![Vec::new(); n];
    for i in 0..n {
        let v = order.vertex_at(i);
        let next = (i + 1 < n).then(|| order.vertex_at(i + 1));
        let prev = (i > 0).then(|| order.vertex_at(i - 1));
        let by_pos = |mut ws: Vec<usize>, descending: bool| {
            ws.sort_by_key(|&w| order.position(w));
            if descending {
                ws.reverse();
            }
            ws
        };
        let later: Vec<usize> = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&w| order.position(w) > i && Some(w) != next)
            .collect();
        let earlier: Vec<usize> = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&w| order.position(w) < i && Some(w) != prev)
            .collect();
        let pick = |ws: &[usize], r: EdgeRole| -> Vec<usize> {
            ws.iter().copied().filter(|&w| role(v, w) == r).collect()
        };
        let list = &mut rot[v];
        list.extend(next);
        list.extend(by_pos(pick(&later, EdgeRole::Head), false));
        list.extend(by_pos(pick(&later, EdgeRole::Tail), true));
        list.extend(by_pos(pick(&earlier, EdgeRole::Head), false));
        list.extend(prev);
        list.extend(by_pos(pick(&earlier, EdgeRole::Tail), false));
    }
    Ok(RotationSystem::new(g, rot).expect("every incident edge placed once"))
}

/// Side condition for the given rotations only.
pub fn one_sided_in(rot: &RotationSystem, path: &[usize]) -> bool {
    let n = path.len();
    let mut pos = vec![usize::MAX; rot.vertex_count()];
    for (i, &v) in path.iter().enumerate() {
        pos[v] = i;
    }
    for i in 1..n.saturating_sub(1) {
        let v = path[i];
        let (prev, next) = (path[i - 1], path[i + 1]);
        // Counterclockwise from next: later vertices must come before prev.
        let mut inside = true;
        let mut w = rot.succ(v, next);
        while w != next {
            if w == prev {
                inside = false;
            } else if !inside && pos[w] > i {
                return false;
            }
            w = rot.succ(v, w);
        }
    }
    true
}

/// Whether `path` is strongly one-sided in `rot` or in its mirror image.
pub fn is_strongly_one_sided(rot: &RotationSystem, path: &HamPath) -> Result<Option<Side>, BridgeError> {
    let g = rot.graph();
    HamPath::new(&g, path.vertices.clone())?;
    if one_sided_in(rot, &path.vertices) {
        return Ok(Some(Side::Left));
    }
    if one_sided_in(&rot.mirror(), &path.vertices) {
        return Ok(Some(Side::Right));
    }
    Ok(None)
}

/// `g` plus every missing spine edge of `order`.
pub fn subhamiltonian_completion(g: &Graph, order: &VertexOrder) -> Graph {
    g.with_edges(order.spine())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(n: usize) -> VertexOrder {
        VertexOrder::identity(n)
    }

    #[test]
    fn k4_round_trip() {
        let g = Graph::complete(4);
        let rot = order_to_embedding(&g, &id(4)).unwrap();
        assert!(rot.is_plane());
        let path = HamPath::new(&g, vec![0, 1, 2, 3]).unwrap();
        assert_eq!(is_strongly_one_sided(&rot, &path), Ok(Some(Side::Left)));
    }

    #[test]
    fn path_and_chorded_cycle() {
        let p4 = Graph::path(4);
        let rot = order_to_embedding(&p4, &id(4)).unwrap();
        assert!(rot.is_plane());
        assert_eq!(rot.rotation(1), &[2, 0]);

        let g = Graph::cycle(4).with_edges([Edge::new(0, 2)]);
        let rot = order_to_embedding(&g, &id(4)).unwrap();
        assert!(rot.is_plane());
        let path = HamPath::new(&g, vec![0, 1, 2, 3]).unwrap();
        assert!(is_strongly_one_sided(&rot, &path).unwrap().is_some());
    }

    #[test]
    fn errors() {
        let g = Graph::from_edges(4, [(0, 2), (1, 3)]).unwrap();
        assert_eq!(
            order_to_embedding(&g, &id(4)),
            Err(BridgeError::MissingSpineEdge(Edge::new(0, 1)))
        );
        assert!(matches!(
            order_to_embedding(&Graph::complete(5), &id(5)),
            Err(BridgeError::PatternPresent(_))
        ));
        assert_eq!(HamPath::new(&Graph::path(3), vec![0, 2, 1]), Err(BridgeError::NotHamiltonian));
    }

    #[test]
    fn cycle_side_condition_is_vacuous() {
        let g = Graph::cycle(4);
        let rot = RotationSystem::new(&g, vec![vec![1, 3], vec![0, 2], vec![1, 3], vec![0, 2]]).unwrap();
        let path = HamPath::new(&g, vec![0, 1, 2, 3]).unwrap();
        assert_eq!(is_strongly_one_sided(&rot, &path), Ok(Some(Side::Left)));
    }

    #[test]
    fn side_condition_can_fail_on_both_chiralities() {
        // Octahedron: 0 and 5 are poles, 1-2-3-4 the equator.
        let g = Graph::from_edges(
            6,
            [
                (0, 1), (0, 2), (0, 3), (0, 4), (5, 1), (5, 2), (5, 3), (5, 4),
                (1, 2), (2, 3), (3, 4), (4, 1),
            ],
        )
        .unwrap();
        let rot = RotationSystem::new(
            &g,
            vec![
                vec![1, 2, 3, 4],
                vec![0, 4, 5, 2],
                vec![0, 1, 5, 3],
                vec![0, 2, 5, 4],
                vec![0, 3, 5, 1],
                vec![1, 4, 3, 2],
            ],
        )
        .unwrap();
        assert!(rot.is_plane());
        // At vertex 0 the later neighbors 2 and 4 leave on opposite sides.
        let path = HamPath::new(&g, vec![3, 0, 1, 2, 5, 4]).unwrap();
        assert_eq!(is_strongly_one_sided(&rot, &path), Ok(None));
    }

    #[test]
    fn completion_examples() {
        assert_eq!(subhamiltonian_completion(&Graph::complete(4), &id(4)), Graph::complete(4));
        let g = Graph::from_edges(4, [(0, 2), (1, 3)]).unwrap();
        let h = subhamiltonian_completion(&g, &id(4));
        assert_eq!(h.edge_count(), 5);
        assert!(find_pattern(&id(4), h.edges()).is_none());
        assert_eq!(subhamiltonian_completion(&Graph::empty(3), &id(3)), Graph::path(3));
    }
}
