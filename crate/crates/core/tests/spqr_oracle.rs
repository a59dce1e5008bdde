mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rique_core::blockcut::is_biconnected;
use rique_core::bridge::one_sided_in;
use rique_core::corpus::{connected_planar_graphs, random_planar_graph};
use rique_core::spqr::{build_spqr, planar_strongly_1sided, st_one_sided, OneSidedWitness};
use rique_core::Graph;

fn verify(g: &Graph, w: &OneSidedWitness) {
    assert_eq!(w.rotation.graph(), *g);
    assert!(w.rotation.is_plane());
    assert_eq!(w.path.vertices().len(), g.vertex_count());
    assert_eq!(w.path.vertices()[0], w.s);
    assert_eq!(*w.path.vertices().last().unwrap(), w.t);
    assert!(one_sided_in(&w.rotation, w.path.vertices()));
}

#[test]
fn every_pair_matches_oracle_up_to_seven_vertices() {
    for n in 2..=7 {
        for g in connected_planar_graphs(n) {
            let good = common::one_page_paths(&g);
            for s in 0..n {
                for t in 0..n {
                    if s == t {
                        continue;
                    }
                    let want = good.iter().any(|p| p[0] == s && p[n - 1] == t);
                    let got = st_one_sided(&g, s, t).unwrap();
                    assert_eq!(got.is_some(), want, "graph {:?} s={s} t={t}", g.edges());
                    if let Some(w) = got {
                        verify(&g, &w);
                    }
                }
            }
        }
    }
}

#[test]
fn whole_graph_matches_oracle_on_seven_vertices() {
    for g in connected_planar_graphs(7) {
        let want = !common::one_page_paths(&g).is_empty();
        let got = planar_strongly_1sided(&g).unwrap();
        assert_eq!(got.is_some(), want, "graph {:?}", g.edges());
        if let Some(w) = got {
            verify(&g, &w);
        }
    }
}

#[test]
fn random_planar_graphs_match_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for i in 0..200 {
        let n = 8 + i % 2;
        let g = random_planar_graph(n, &mut rng);
        let want = !common::one_page_paths(&g).is_empty();
        let got = planar_strongly_1sided(&g).unwrap();
        assert_eq!(got.is_some(), want, "graph {:?}", g.edges());
        if let Some(w) = got {
            verify(&g, &w);
        }
    }
}

#[test]
fn spqr_invariants_on_corpus() {
    for n in 3..=7 {
        for g in connected_planar_graphs(n).into_iter().filter(is_biconnected) {
            let t = build_spqr(&g).unwrap();
            t.check(g.edges()).unwrap();
        }
    }
}

#[test]
fn random_pairs_on_eight_vertices() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..100 {
        let g = random_planar_graph(8, &mut rng);
        let good = common::one_page_paths(&g);
        for s in 0..8 {
            for t in 0..8 {
                if s != t {
                    let want = good.iter().any(|p| p[0] == s && p[7] == t);
                    let got = st_one_sided(&g, s, t).unwrap();
                    assert_eq!(got.is_some(), want, "graph {:?} s={s} t={t}", g.edges());
                }
            }
        }
    }
}
