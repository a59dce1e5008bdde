//! Exhaustive checks over all small graphs.

use rique_core::bridge::{one_sided_in, HamPath};
use rique_core::corpus::{all_graphs, connected_planar_graphs, hamiltonian_paths};
use rique_core::layout::{find_pattern, validate_layout};
use rique_core::planarity::planar_embedding;
use rique_core::plane::{greedy_walk, maximal_planar_rique1, plane_strongly_1sided_with};
use rique_core::search::solver::EmbeddedSolver;
use rique_core::search::{decode_model, encode_sat, exact_rique_number, rique_number_sat, SatOutcome, SatSolver, Symmetry, Verdict};
use rique_core::{Graph, VertexOrder};

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

#[test]
fn sat_matches_exact_up_to_six_vertices() {
    for n in 1..=6 {
        for g in all_graphs(n) {
            let (k, _) = exact_rique_number(&g, 6).unwrap();
            let r = rique_number_sat(&g, &EmbeddedSolver, 1, 4, None, Symmetry::None).unwrap();
            assert_eq!(r.verdict, Verdict::Exact(k), "{:?}", g.edges());
        }
    }
}

#[test]
fn sat_monotone_and_decodes_validly_up_to_six_vertices() {
    for n in 2..=6 {
        for g in all_graphs(n).into_iter().filter(|g| g.edge_count() > 0) {
            let mut seen = false;
            for p in 1..=3 {
                let enc = encode_sat(&g, p);
                let sat = match EmbeddedSolver.solve(&enc.cnf, None).unwrap() {
                    SatOutcome::Sat(m) => {
                        let l = decode_model(&enc, &m).unwrap();
                        assert!(validate_layout(&g, &l).unwrap().valid);
                        true
                    }
                    SatOutcome::Unsat => false,
                    SatOutcome::Timeout => unreachable!(),
                };
                assert!(!seen || sat, "{:?} at {p}", g.edges());
                seen |= sat;
            }
        }
    }
}

#[test]
fn edge_deletion_never_raises_the_rique_number() {
    for n in 2..=6 {
        for g in all_graphs(n) {
            let (k, _) = exact_rique_number(&g, 6).unwrap();
            for e in g.edges() {
                let h = g.edge_subgraph(g.edges().iter().copied().filter(|f| f != e));
                assert!(exact_rique_number(&h, 6).unwrap().0 <= k);
            }
        }
    }
}

#[test]
fn spine_edges_never_create_the_pattern() {
    for n in 2..=6 {
        let perms = permutations(n);
        for g in all_graphs(n) {
            for seq in &perms {
                let order = VertexOrder::from_sequence(seq.clone()).unwrap();
                if find_pattern(&order, g.edges()).is_none() {
                    let h = g.with_edges(order.spine());
                    assert!(find_pattern(&order, h.edges()).is_none(), "{:?} {seq:?}", g.edges());
                }
            }
        }
    }
}

/// For each Hamiltonian path that is one-sided in `rot`, the greedy walk from
/// its first edge must return exactly that path.
fn greedy_reproduces(rot: &rique_core::RotationSystem, paths: &[Vec<usize>]) -> bool {
    let mut any = false;
    for p in paths {
        if one_sided_in(rot, p) {
            any = true;
            if p.len() >= 2 {
                assert_eq!(greedy_walk(rot, p[0], p[1]).0.as_ref(), Some(p));
            }
        }
    }
    any
}

fn check_plane(g: &Graph) {
    let rot = planar_embedding(g).unwrap();
    let paths = hamiltonian_paths(g);
    let left = greedy_reproduces(&rot, &paths);
    let right = greedy_reproduces(&rot.mirror(), &paths);
    let res = plane_strongly_1sided_with(&rot, false).unwrap();
    assert_eq!(res.path.is_some(), left || right, "{:?}", g.edges());
    assert!(res.max_steps <= 2 * g.edge_count().max(1), "{:?}", g.edges());
    if let Some(p) = res.path {
        let check = HamPath::new(g, p.vertices().to_vec()).unwrap();
        assert!(one_sided_in(&rot, check.vertices()) || one_sided_in(&rot.mirror(), check.vertices()));
    }
    let maximal = g.vertex_count() >= 3 && g.edge_count() == 3 * g.vertex_count() - 6;
    if maximal {
        if let Some(l) = maximal_planar_rique1(g).unwrap() {
            assert!(validate_layout(g, &l).unwrap().valid);
        }
    }
}

#[test]
fn plane_search_matches_path_oracle_up_to_eight_vertices() {
    for n in 1..=8 {
        for g in connected_planar_graphs(n) {
            check_plane(&g);
        }
    }
}
