//! Strongly one-sided Hamiltonian paths in a fixed plane embedding.
//!
//! Once the first edge and the side are fixed the path is forced: at `v_i`
//! the edges counterclockwise after `(v_i, v_{i-1})` lead to visited vertices
//! until the next path edge, so `v_{i+1}` is the first unvisited neighbor in
//! that scan. Trying every directed start edge on both mirror images decides
//! the question with `O(m)` scan steps per start.

use serde::Serialize;
use thiserror::Error;

use crate::bridge::{one_sided_in, HamPath, Side};
use crate::graph::Graph;
use crate::layout::LinearLayout;
use crate::planarity::planar_embedding;
use crate::rotation::RotationSystem;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PlaneError {
    #[error("rotation system is not plane")]
    NotPlane,
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph is not maximal planar")]
    NotMaximalPlanar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlaneResult {
    pub path: Option<HamPath>,
    pub side: Option<Side>,
    /// Largest number of neighbor inspections over all starts.
    pub max_steps: usize,
}

/// Greedy walk from the directed edge `u -> w`. Returns the path when it
/// reaches every vertex, plus the number of neighbor inspections.
pub fn greedy_walk(rot: &RotationSystem, u: usize, w: usize) -> (Option<Vec<usize>>, usize) {
    let n = rot.vertex_count();
    let mut visited = vec![false; n];
    let mut path = vec![u, w];
    visited[u] = true;
    visited[w] = true;
    let mut steps = 0;
    while path.len() < n {
        let (prev, v) = (path[path.len() - 2], path[path.len() - 1]);
        let mut x = rot.succ(v, prev);
        let mut next = None;
        loop {
            steps += 1;
            if !visited[x] {
                next = Some(x);
                break;
            }
            if x == prev {
                break;
            }
            x = rot.succ(v, x);
        }
        match next {
            Some(x) => {
                visited[x] = true;
                path.push(x);
            }
            None => return (None, steps),
        }
    }
    (Some(path), steps)
}

/// First strongly one-sided Hamiltonian path: all directed start edges in
/// lexicographic order on the given rotations, then on the mirror image
/// (skipped when `left_only`).
pub fn plane_strongly_1sided_with(rot: &RotationSystem, left_only: bool) -> Result<PlaneResult, PlaneError> {
    if !rot.is_plane() {
        return Err(PlaneError::NotPlane);
    }
    let g = rot.graph();
    if !g.is_connected() {
        return Err(PlaneError::Disconnected);
    }
    let n = g.vertex_count();
    if n <= 1 {
        return Ok(PlaneResult {
            path: Some(HamPath::new(&g, (0..n).collect()).expect("trivial path")),
            side: Some(Side::Left),
            max_steps: 0,
        });
    }
    let mirrored = rot.mirror();
    let sides: &[(Side, &RotationSystem)] = if left_only {
        &[(Side::Left, rot)]
    } else {
        &[(Side::Left, rot), (Side::Right, &mirrored)]
    };
    let mut max_steps = 0;
    for &(side, r) in sides {
        for u in 0..n {
            for &w in g.neighbors(u) {
                let (path, steps) = greedy_walk(r, u, w);
                max_steps = max_steps.max(steps);
                if let Some(p) = path {
                    if one_sided_in(r, &p) {
                        return Ok(PlaneResult {
                            path: Some(HamPath::new(&g, p).expect("walk follows edges")),
                            side: Some(side),
                            max_steps,
                        });
                    }
                }
            }
        }
    }
    Ok(PlaneResult {
        path: None,
        side: None,
        max_steps,
    })
}

pub fn plane_strongly_1sided(rot: &RotationSystem) -> Result<Option<HamPath>, PlaneError> {
    Ok(plane_strongly_1sided_with(rot, false)?.path)
}

/// Rique-number-one test for a maximal planar graph; the witness puts every
/// edge on one page in path order.
pub fn maximal_planar_rique1(g: &Graph) -> Result<Option<LinearLayout>, PlaneError> {
    let n = g.vertex_count();
    if n < 3 || g.edge_count() != 3 * n - 6 {
        return Err(PlaneError::NotMaximalPlanar);
    }
    let rot = planar_embedding(g).ok_or(PlaneError::NotMaximalPlanar)?;
    Ok(plane_strongly_1sided(&rot)?
        .map(|p| LinearLayout::new(p.order(), vec![g.edges().to_vec()])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::validate_layout;

    fn k4() -> RotationSystem {
        RotationSystem::new(
            &Graph::complete(4),
            vec![vec![1, 2, 3], vec![0, 3, 2], vec![0, 1, 3], vec![0, 2, 1]],
        )
        .unwrap()
    }

    #[test]
    fn plane_k4() {
        let r = plane_strongly_1sided_with(&k4(), false).unwrap();
        let path = r.path.unwrap();
        assert_eq!(path.vertices().len(), 4);
        assert!(r.max_steps <= 2 * 6);
    }

    #[test]
    fn star_has_none() {
        let g = Graph::star(3);
        let rot = planar_embedding(&g).unwrap();
        assert_eq!(plane_strongly_1sided(&rot), Ok(None));
    }

    #[test]
    fn cycle_has_one() {
        let g = Graph::cycle(5);
        let rot = planar_embedding(&g).unwrap();
        assert!(plane_strongly_1sided(&rot).unwrap().is_some());
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = Graph::complete(4);
        let twisted =
            RotationSystem::new(&g, vec![vec![1, 2, 3], vec![0, 2, 3], vec![0, 1, 3], vec![0, 1, 2]])
                .unwrap();
        assert_eq!(plane_strongly_1sided(&twisted), Err(PlaneError::NotPlane));
        let two = Graph::empty(2);
        let rot = RotationSystem::new(&two, vec![vec![], vec![]]).unwrap();
        assert_eq!(plane_strongly_1sided(&rot), Err(PlaneError::Disconnected));
    }

    #[test]
    fn maximal_planar_examples() {
        let l = maximal_planar_rique1(&Graph::complete(4)).unwrap().unwrap();
        assert!(validate_layout(&Graph::complete(4), &l).unwrap().valid);
        assert!(maximal_planar_rique1(&Graph::complete(3)).unwrap().is_some());
        assert_eq!(maximal_planar_rique1(&Graph::cycle(4)), Err(PlaneError::NotMaximalPlanar));
    }
}
