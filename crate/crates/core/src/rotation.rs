//! Combinatorial embeddings given as a counterclockwise neighbor order per vertex.

use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RotationError {
    #[error("rotation system lists {got} vertices, graph has {expected}")]
    VertexCount { got: usize, expected: usize },
    #[error("vertex {vertex}: {neighbor} is not adjacent")]
    NotAdjacent { vertex: usize, neighbor: usize },
    #[error("vertex {vertex}: rotation does not list every incident edge exactly once")]
    IncidenceMismatch { vertex: usize },
}

/// Counterclockwise cyclic order of the neighbors around every vertex of a
/// simple graph. The mirror image is obtained by reversing every rotation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RotationSystem {
    rot: Vec<Vec<usize>>,
}

impl RotationSystem {
    /// Checks that `rot[v]` lists exactly the neighbors of `v` in `g`.
    pub fn new(g: &Graph, rot: Vec<Vec<usize>>) -> Result<Self, RotationError> {
        if rot.len() != g.vertex_count() {
            return Err(RotationError::VertexCount {
                got: rot.len(),
                expected: g.vertex_count(),
            });
        }
        for (v, list) in rot.iter().enumerate() {
            if let Some(&w) = list.iter().find(|&&w| !g.has_edge(v, w)) {
                return Err(RotationError::NotAdjacent {
                    vertex: v,
                    neighbor: w,
                });
            }
            let mut sorted = list.clone();
            sorted.sort_unstable();
            if sorted.as_slice() != g.neighbors(v) {
                return Err(RotationError::IncidenceMismatch { vertex: v });
            }
        }
        Ok(RotationSystem { rot })
    }

    /// Builds a rotation system from symmetric neighbor lists (every `w` in
    /// `rot[v]` must have `v` in `rot[w]`).
    pub fn from_lists(rot: Vec<Vec<usize>>) -> Result<Self, RotationError> {
        let n = rot.len();
        let mut pairs = Vec::new();
        for (v, list) in rot.iter().enumerate() {
            for &w in list {
                if w >= n || w == v {
                    return Err(RotationError::NotAdjacent {
                        vertex: v,
                        neighbor: w,
                    });
                }
                if v < w {
                    pairs.push((v, w));
                }
            }
        }
        let g = Graph::from_edges(n, pairs).map_err(|_| RotationError::IncidenceMismatch {
            vertex: 0,
        })?;
        Self::new(&g, rot)
    }

    pub fn vertex_count(&self) -> usize {
        self.rot.len()
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rot[v]
    }

    pub fn rotations(&self) -> &[Vec<usize>] {
        &self.rot
    }

    pub fn graph(&self) -> Graph {
        let pairs = self
            .rot
            .iter()
            .enumerate()
            .flat_map(|(v, l)| l.iter().filter(move |&&w| v < w).map(move |&w| (v, w)));
        Graph::from_edges(self.rot.len(), pairs).expect("rotation lists are symmetric")
    }

    pub fn edge_count(&self) -> usize {
        self.rot.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Reverses every rotation.
    pub fn mirror(&self) -> Self {
        RotationSystem {
            rot: self
                .rot
                .iter()
                .map(|l| l.iter().rev().copied().collect())
                .collect(),
        }
    }

    /// Position of `w` in the rotation of `v`.
    pub fn position(&self, v: usize, w: usize) -> Option<usize> {
        self.rot[v].iter().position(|&x| x == w)
    }

    /// Counterclockwise successor of `w` around `v`.
    pub fn succ(&self, v: usize, w: usize) -> usize {
        let list = &self.rot[v];
        let i = self.position(v, w).expect("w adjacent to v");
        list[(i + 1) % list.len()]
    }

    /// Counterclockwise predecessor of `w` around `v`.
    pub fn pred(&self, v: usize, w: usize) -> usize {
        let list = &self.rot[v];
        let i = self.position(v, w).expect("w adjacent to v");
        list[(i + list.len() - 1) % list.len()]
    }

    /// Traces every face. The dart `a -> b` is followed by `b -> c` where `c`
    /// is the counterclockwise successor of `a` around `b`. Each face is
    /// reported as the sequence of dart tails.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        let n = self.rot.len();
        let mut used: Vec<Vec<bool>> = self.rot.iter().map(|l| vec![false; l.len()]).collect();
        let mut faces = Vec::new();
        for a in 0..n {
            for i in 0..self.rot[a].len() {
                if used[a][i] {
                    continue;
                }
                let mut face = Vec::new();
                let (mut x, mut xi) = (a, i);
                while !used[x][xi] {
                    used[x][xi] = true;
                    face.push(x);
                    let y = self.rot[x][xi];
                    let z = self.succ(y, x);
                    xi = self.position(y, z).expect("adjacent");
                    x = y;
                }
                faces.push(face);
            }
        }
        faces
    }

    pub fn face_count(&self) -> usize {
        self.faces().len()
    }

    /// Euler check: every connected component satisfies `V - E + F = 2`
    /// (an isolated vertex counts one face).
    pub fn is_plane(&self) -> bool {
        let g = self.graph();
        let n = g.vertex_count();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        for v in 0..n {
            if comp[v] == usize::MAX {
                for w in g.component_of(v) {
                    comp[w] = count;
                }
                count += 1;
            }
        }
        let mut verts = vec![0i64; count];
        let mut edges = vec![0i64; count];
        let mut faces = vec![0i64; count];
        for v in 0..n {
            verts[comp[v]] += 1;
            if g.degree(v) == 0 {
                faces[comp[v]] += 1;
            }
        }
        for e in g.edges() {
            edges[comp[e.u]] += 1;
        }
        for f in self.faces() {
            faces[comp[f[0]]] += 1;
        }
        (0..count).all(|c| verts[c] - edges[c] + faces[c] == 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4_plane() -> RotationSystem {
        let g = Graph::complete(4);
        RotationSystem::new(
            &g,
            vec![vec![1, 2, 3], vec![0, 3, 2], vec![0, 1, 3], vec![0, 2, 1]],
        )
        .unwrap()
    }

    #[test]
    fn k4_has_four_faces() {
        let r = k4_plane();
        assert_eq!(r.face_count(), 4);
        assert!(r.is_plane());
        assert!(r.mirror().is_plane());
    }

    #[test]
    fn k4_twisted_rotation_is_not_plane() {
        let g = Graph::complete(4);
        let r = RotationSystem::new(
            &g,
            vec![vec![1, 2, 3], vec![0, 2, 3], vec![0, 1, 3], vec![0, 1, 2]],
        )
        .unwrap();
        assert!(!r.is_plane());
    }

    #[test]
    fn cycle_has_two_faces() {
        let g = Graph::cycle(4);
        let r = RotationSystem::new(&g, vec![vec![1, 3], vec![0, 2], vec![1, 3], vec![0, 2]])
            .unwrap();
        assert_eq!(r.face_count(), 2);
        assert!(r.is_plane());
    }

    #[test]
    fn rejects_wrong_incidences() {
        let g = Graph::path(3);
        assert_eq!(
            RotationSystem::new(&g, vec![vec![2], vec![0, 2], vec![1]]),
            Err(RotationError::NotAdjacent {
                vertex: 0,
                neighbor: 2
            })
        );
        assert_eq!(
            RotationSystem::new(&g, vec![vec![1], vec![0], vec![1]]),
            Err(RotationError::IncidenceMismatch { vertex: 1 })
        );
    }

    #[test]
    fn disconnected_components_each_satisfy_euler() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let r = RotationSystem::new(&g, vec![vec![1, 2], vec![2, 0], vec![0, 1], vec![], vec![]])
            .unwrap();
        assert!(r.is_plane());
    }
}
