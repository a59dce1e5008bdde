//! Strongly one-sided st-paths over all planar embeddings.
//!
//! For a tree node `mu` with poles `u, v`, `L(mu)` records how a strongly
//! one-sided path can run through the pertinent graph: `Through { from, to }`
//! when `s` lies outside it, `FromS { end, skip }` when `s` lies inside and
//! the path leaves at `end`, leaving `skip` for later. Each member carries a
//! witness: a rotation system of the pertinent graph plus the reference edge
//! (`Slot::Ref`) together with the path, and every witness is re-checked.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use super::{Link, NodeKind, SpqrError, SpqrTree};
use crate::blockcut::{block_cut_tree, BlockCutTree};
use crate::bridge::{one_sided_in, HamPath};
use crate::graph::{Edge, Graph};
use crate::planarity::{embed_block, is_planar};
use crate::rotation::RotationSystem;

const NONE: usize = usize::MAX;
const SUB: usize = usize::MAX / 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Slot {
    Real(usize),
    Ref,
}

type Emb = BTreeMap<usize, Vec<Slot>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Member {
    Through { from: usize, to: usize },
    FromS { end: usize, skip: Option<usize> },
}

#[derive(Clone, Debug)]
struct Witness {
    emb: Emb,
    path: Vec<usize>,
}

type LSet = BTreeMap<Member, Witness>;

/// Skeleton slot: the parent's virtual edge or the edge of a child.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Sk {
    Parent,
    Child(usize),
}

type SkRot = BTreeMap<usize, Vec<Sk>>;

fn mirror(sk: &SkRot) -> SkRot {
    sk.iter()
        .map(|(&v, l)| (v, l.iter().rev().copied().collect()))
        .collect()
}

fn q_emb(u: usize, v: usize) -> Emb {
    BTreeMap::from([(u, vec![Slot::Ref, Slot::Real(v)]), (v, vec![Slot::Ref, Slot::Real(u)])])
}

/// Replaces every child slot by the child's rotation read counterclockwise
/// after its reference edge; inner vertices of children are copied.
fn expand(sk: &SkRot, parts: &BTreeMap<usize, Emb>) -> Emb {
    let mut emb = Emb::new();
    for (&v, slots) in sk {
        let mut list = Vec::new();
        for sl in slots {
            match *sl {
                Sk::Parent => list.push(Slot::Ref),
                Sk::Child(c) => {
                    let rot = &parts[&c][&v];
                    let i = rot.iter().position(|&z| z == Slot::Ref).expect("pole has a reference slot");
                    list.extend(&rot[i + 1..]);
                    list.extend(&rot[..i]);
                }
            }
        }
        emb.insert(v, list);
    }
    for part in parts.values() {
        for (&v, rot) in part {
            emb.entry(v).or_insert_with(|| rot.clone());
        }
    }
    emb
}

struct Rooted<'a> {
    tree: &'a SpqrTree,
    parent: Vec<usize>,
    children: Vec<Vec<usize>>,
    poles: Vec<(usize, usize)>,
    post: Vec<usize>,
    pert: Vec<BTreeSet<usize>>,
    pert_edges: Vec<Vec<Edge>>,
}

impl<'a> Rooted<'a> {
    fn new(tree: &'a SpqrTree, root: usize) -> Self {
        let n = tree.nodes.len();
        let mut parent = vec![NONE; n];
        let mut children = vec![Vec::new(); n];
        let mut poles = vec![(0, 0); n];
        let mut order = Vec::with_capacity(n);
        let mut stack = vec![root];
        while let Some(x) = stack.pop() {
            order.push(x);
            for y in tree.nodes[x].links() {
                if y != parent[x] {
                    parent[y] = x;
                    children[x].push(y);
                    let e = tree.nodes[y].edges[tree.nodes[y].edge_to(x).expect("twin edge")];
                    poles[y] = (e.u, e.v);
                    stack.push(y);
                }
            }
        }
        order.reverse();
        let mut pert = vec![BTreeSet::new(); n];
        let mut pert_edges = vec![Vec::new(); n];
        for &x in &order {
            let node = &tree.nodes[x];
            if node.kind == NodeKind::Q {
                let e = node.edges.iter().find(|e| e.link == Link::Real).expect("real edge");
                pert[x] = BTreeSet::from([e.u, e.v]);
                pert_edges[x] = vec![Edge::new(e.u, e.v)];
            }
            for &c in &children[x].clone() {
                let (p, es) = (pert[c].clone(), pert_edges[c].clone());
                pert[x].extend(p);
                pert_edges[x].extend(es);
            }
        }
        Rooted {
            tree,
            parent,
            children,
            poles,
            post: order,
            pert,
            pert_edges,
        }
    }

    fn is_q(&self, x: usize) -> bool {
        self.tree.nodes[x].kind == NodeKind::Q
    }

    fn other_pole(&self, x: usize, p: usize) -> usize {
        let (a, b) = self.poles[x];
        if p == a {
            b
        } else {
            a
        }
    }
}

/// Independent check of a witness: the path covers exactly the pertinent
/// vertices minus `skip`, the rotations describe a plane embedding of the
/// pertinent graph plus the reference edge, and every later neighbor of an
/// inner path vertex (including the outside, beyond the reference edge)
/// lies counterclockwise between the next and the previous path edge.
fn check(r: &Rooted, x: usize, s: usize, m: Member, w: &Witness) -> Result<(), String> {
    let pert = &r.pert[x];
    let (p, q) = r.poles[x];
    let (start, end, skip, s_in) = match m {
        Member::Through { from, to } => (from, to, None, false),
        Member::FromS { end, skip } => (s, end, skip, true),
    };
    if s_in != pert.contains(&s) {
        return Err("member kind does not match the position of s".into());
    }
    if ![p, q].contains(&end) || (!s_in && ![p, q].contains(&start)) || skip == Some(end) {
        return Err("path ends are not poles".into());
    }
    if let Some(y) = skip {
        if ![p, q].contains(&y) {
            return Err("skipped vertex is not a pole".into());
        }
    }
    let path = &w.path;
    if path.first() != Some(&start) || path.last() != Some(&end) {
        return Err("path has wrong ends".into());
    }
    let on: BTreeSet<usize> = path.iter().copied().collect();
    let want: BTreeSet<usize> = pert.iter().copied().filter(|&v| Some(v) != skip).collect();
    if on.len() != path.len() || on != want {
        return Err("path does not cover the pertinent graph".into());
    }
    let edges: BTreeSet<Edge> = r.pert_edges[x].iter().copied().collect();
    if path.windows(2).any(|e| !edges.contains(&Edge::new(e[0], e[1]))) {
        return Err("path leaves the pertinent graph".into());
    }
    let keys: BTreeSet<usize> = w.emb.keys().copied().collect();
    if &keys != pert {
        return Err("rotations do not cover the pertinent graph".into());
    }
    let mut nbrs: BTreeMap<usize, Vec<Slot>> = BTreeMap::new();
    for e in &edges {
        nbrs.entry(e.u).or_default().push(Slot::Real(e.v));
        nbrs.entry(e.v).or_default().push(Slot::Real(e.u));
    }
    nbrs.entry(p).or_default().push(Slot::Ref);
    nbrs.entry(q).or_default().push(Slot::Ref);
    for (v, rot) in &w.emb {
        let mut a = rot.clone();
        let mut b = nbrs[v].clone();
        a.sort();
        b.sort();
        if a != b {
            return Err(format!("rotation at {v} has the wrong edges"));
        }
    }
    // Euler check on the pertinent graph plus the reference edge.
    let target = |v: usize, sl: Slot| match sl {
        Slot::Real(w) => (w, Slot::Real(v)),
        Slot::Ref => (if v == p { q } else { p }, Slot::Ref),
    };
    let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut faces = 0;
    for (&v, rot) in &w.emb {
        for i in 0..rot.len() {
            if seen.contains(&(v, i)) {
                continue;
            }
            faces += 1;
            let (mut a, mut k) = (v, i);
            while seen.insert((a, k)) {
                let (b, back) = target(a, w.emb[&a][k]);
                let rb = &w.emb[&b];
                let j = rb.iter().position(|&z| z == back).expect("reverse slot");
                a = b;
                k = (j + 1) % rb.len();
            }
        }
    }
    if pert.len() + faces != edges.len() + 1 + 2 {
        return Err("rotations are not plane".into());
    }
    let pos: BTreeMap<usize, usize> = path.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let last = path.len() - 1;
    for (i, &v) in path.iter().enumerate() {
        if i == 0 && s_in {
            continue;
        }
        let prev = if i == 0 { Slot::Ref } else { Slot::Real(path[i - 1]) };
        let next = if i == last { Slot::Ref } else { Slot::Real(path[i + 1]) };
        if prev == next {
            continue;
        }
        let rot = &w.emb[&v];
        let out = |sl: Slot| match sl {
            Slot::Real(w) => Some(w) == skip || pos.get(&w).is_some_and(|&j| j > i),
            Slot::Ref => true,
        };
        let k = rot.iter().position(|&z| z == next).expect("next slot");
        let mut inside = true;
        for d in 1..rot.len() {
            let sl = rot[(k + d) % rot.len()];
            if sl == prev {
                inside = false;
            } else if !inside && out(sl) {
                return Err(format!("edge {sl:?} at {v} leaves on the wrong side"));
            }
        }
    }
    Ok(())
}

fn accept(r: &Rooted, x: usize, s: usize, m: Member, w: Witness) -> Option<Witness> {
    match check(r, x, s, m, &w) {
        Ok(()) => Some(w),
        Err(e) => {
            debug_assert!(false, "witness for {m:?} at node {x} rejected: {e}");
            None
        }
    }
}

/// First arrangement whose expansion passes the witness check.
fn pick(
    r: &Rooted,
    x: usize,
    s: usize,
    m: Member,
    path: Vec<usize>,
    cands: &[SkRot],
    parts: &BTreeMap<usize, Emb>,
) -> Option<Witness> {
    let mut last = String::new();
    for sk in cands {
        let w = Witness {
            emb: expand(sk, parts),
            path: path.clone(),
        };
        match check(r, x, s, m, &w) {
            Ok(()) => return Some(w),
            Err(e) => last = e,
        }
    }
    debug_assert!(false, "no arrangement verifies {m:?} at node {x}: {last}");
    None
}

fn parts_with(r: &Rooted, x: usize, chosen: &[(usize, &Witness)]) -> BTreeMap<usize, Emb> {
    let mut parts = BTreeMap::new();
    for &c in &r.children[x] {
        let emb = match chosen.iter().find(|&&(d, _)| d == c) {
            Some((_, w)) => w.emb.clone(),
            None => {
                let (a, b) = r.poles[c];
                q_emb(a, b)
            }
        };
        parts.insert(c, emb);
    }
    parts
}

fn join(paths: &[&[usize]]) -> Vec<usize> {
    let mut out = paths[0].to_vec();
    for p in &paths[1..] {
        out.extend(&p[1..]);
    }
    out
}

fn q_node(r: &Rooted, x: usize, s: usize) -> LSet {
    let (u, v) = r.poles[x];
    let emb = q_emb(u, v);
    let mut out = LSet::new();
    let items = if s != u && s != v {
        vec![
            (Member::Through { from: u, to: v }, vec![u, v]),
            (Member::Through { from: v, to: u }, vec![v, u]),
        ]
    } else {
        let o = r.other_pole(x, s);
        vec![
            (Member::FromS { end: s, skip: Some(o) }, vec![s]),
            (Member::FromS { end: o, skip: None }, vec![s, o]),
        ]
    };
    for (m, path) in items {
        let w = Witness {
            emb: emb.clone(),
            path,
        };
        if let Some(w) = accept(r, x, s, m, w) {
            out.insert(m, w);
        }
    }
    out
}

/// Bond arrangement: `at` sees the parent slot then `order` counterclockwise,
/// the other pole sees the children in reverse.
fn bond(at: usize, other: usize, order: &[usize]) -> SkRot {
    let mut a = vec![Sk::Parent];
    a.extend(order.iter().map(|&c| Sk::Child(c)));
    let mut b = vec![Sk::Parent];
    b.extend(order.iter().rev().map(|&c| Sk::Child(c)));
    BTreeMap::from([(at, a), (other, b)])
}

fn p_node(r: &Rooted, x: usize, s: usize, l: &[LSet]) -> LSet {
    let (u, v) = r.poles[x];
    let ch = &r.children[x];
    let qs: Vec<usize> = ch.iter().copied().filter(|&c| r.is_q(c)).collect();
    let nonq: Vec<usize> = ch.iter().copied().filter(|&c| !r.is_q(c)).collect();
    let mut out = LSet::new();
    let one_q = ch.len() == 2 && qs.len() == 1;
    if !r.pert[x].contains(&s) {
        if !one_q {
            return out;
        }
        let (m1, q) = (nonq[0], qs[0]);
        for (a, b) in [(u, v), (v, u)] {
            let m = Member::Through { from: a, to: b };
            if let Some(w1) = l[m1].get(&m) {
                let parts = parts_with(r, x, &[(m1, w1)]);
                if let Some(w) = pick(r, x, s, m, w1.path.clone(), &[bond(a, b, &[m1, q])], &parts) {
                    out.insert(m, w);
                }
            }
        }
        return out;
    }
    if s == u || s == v {
        if !one_q {
            return out;
        }
        let (m1, q) = (nonq[0], qs[0]);
        let o = r.other_pole(x, s);
        for (&m, w1) in &l[m1] {
            let parts = parts_with(r, x, &[(m1, w1)]);
            let cands = [bond(s, o, &[m1, q]), bond(s, o, &[q, m1])];
            if let Some(w) = pick(r, x, s, m, w1.path.clone(), &cands, &parts) {
                out.insert(m, w);
            }
        }
        return out;
    }
    let m1 = *ch.iter().find(|&&c| r.pert[c].contains(&s)).expect("child holding s");
    let others: Vec<usize> = ch.iter().copied().filter(|&c| c != m1).collect();
    let other_nonq: Vec<usize> = others.iter().copied().filter(|&c| !r.is_q(c)).collect();
    let other_q: Vec<usize> = others.iter().copied().filter(|&c| r.is_q(c)).collect();
    for (xp, yp) in [(u, v), (v, u)] {
        if ch.len() == 2 && other_q.len() == 1 {
            let q = other_q[0];
            let m = Member::FromS { end: xp, skip: Some(yp) };
            if let Some(w1) = l[m1].get(&m) {
                let parts = parts_with(r, x, &[(m1, w1)]);
                let cands = [bond(xp, yp, &[q, m1]), bond(xp, yp, &[m1, q])];
                if let Some(w) = pick(r, x, s, m, w1.path.clone(), &cands, &parts) {
                    out.insert(m, w);
                }
            }
            let m = Member::FromS { end: xp, skip: None };
            if let Some(w1) = l[m1].get(&m) {
                let parts = parts_with(r, x, &[(m1, w1)]);
                let cands = [bond(xp, yp, &[m1, q]), bond(xp, yp, &[q, m1])];
                if let Some(w) = pick(r, x, s, m, w1.path.clone(), &cands, &parts) {
                    out.insert(m, w);
                }
            } else if let Some(w1) = l[m1].get(&Member::FromS { end: yp, skip: Some(xp) }) {
                let parts = parts_with(r, x, &[(m1, w1)]);
                let mut path = w1.path.clone();
                path.push(xp);
                let cands = [bond(yp, xp, &[m1, q]), bond(yp, xp, &[q, m1])];
                if let Some(w) = pick(r, x, s, m, path, &cands, &parts) {
                    out.insert(m, w);
                }
            }
        } else if ch.len() <= 3 && other_nonq.len() == 1 {
            let m2 = other_nonq[0];
            let m = Member::FromS { end: xp, skip: None };
            let w1 = l[m1].get(&Member::FromS { end: yp, skip: Some(xp) });
            let w2 = l[m2].get(&Member::Through { from: yp, to: xp });
            if let (Some(w1), Some(w2)) = (w1, w2) {
                let parts = parts_with(r, x, &[(m1, w1), (m2, w2)]);
                let path = join(&[&w1.path, &w2.path]);
                let mut order = vec![m1, m2];
                order.extend(&other_q);
                if let Some(w) = pick(r, x, s, m, path, &[bond(yp, xp, &order)], &parts) {
                    out.insert(m, w);
                }
            }
        }
    }
    out
}

/// Children of a cycle skeleton in order from pole `a`, as `(child, from, to)`.
fn chain(r: &Rooted, x: usize, a: usize) -> Vec<(usize, usize, usize)> {
    let node = &r.tree.nodes[x];
    let mut used = vec![false; node.edges.len()];
    if let Some(k) = node.edge_to(r.parent[x]) {
        used[k] = true;
    }
    let b = r.other_pole(x, a);
    let mut out = Vec::new();
    let mut cur = a;
    while cur != b || out.is_empty() {
        let k = (0..node.edges.len())
            .find(|&k| !used[k] && (node.edges[k].u == cur || node.edges[k].v == cur))
            .expect("cycle continues");
        used[k] = true;
        let e = node.edges[k];
        let nxt = if e.u == cur { e.v } else { e.u };
        let Link::Node(c) = e.link else { unreachable!() };
        out.push((c, cur, nxt));
        cur = nxt;
    }
    out
}

fn cycle_rot(chain: &[(usize, usize, usize)]) -> SkRot {
    let mut sk = SkRot::new();
    let a = chain[0].1;
    let b = chain[chain.len() - 1].2;
    sk.insert(a, vec![Sk::Parent]);
    sk.insert(b, vec![Sk::Parent]);
    for &(c, from, to) in chain {
        sk.entry(from).or_default().push(Sk::Child(c));
        sk.entry(to).or_default().push(Sk::Child(c));
    }
    sk
}

fn s_node(r: &Rooted, x: usize, s: usize, l: &[LSet]) -> LSet {
    let (u, v) = r.poles[x];
    let mut out = LSet::new();
    let through = |c: usize, a: usize, b: usize| {
        let m = if a == s {
            Member::FromS { end: b, skip: None }
        } else {
            Member::Through { from: a, to: b }
        };
        l[c].get(&m)
    };
    let finish = |out: &mut LSet, ch: &[(usize, usize, usize)], m: Member, chosen: Vec<(usize, &Witness)>| {
        let paths: Vec<&[usize]> = chosen.iter().map(|(_, w)| w.path.as_slice()).collect();
        let path = join(&paths);
        let parts = parts_with(r, x, &chosen);
        if let Some(w) = pick(r, x, s, m, path, &[cycle_rot(ch)], &parts) {
            out.insert(m, w);
        }
    };
    if !r.pert[x].contains(&s) {
        for (a, b) in [(u, v), (v, u)] {
            let ch = chain(r, x, a);
            let chosen: Option<Vec<(usize, &Witness)>> =
                ch.iter().map(|&(c, f, t)| through(c, f, t).map(|w| (c, w))).collect();
            if let Some(chosen) = chosen {
                finish(&mut out, &ch, Member::Through { from: a, to: b }, chosen);
            }
        }
        return out;
    }
    if s == u || s == v {
        let b = r.other_pole(x, s);
        let ch = chain(r, x, s);
        let (c1, _, w1) = ch[0];
        let first = l[c1].get(&Member::FromS { end: w1, skip: None });
        let rest: Option<Vec<(usize, &Witness)>> =
            ch[1..].iter().map(|&(c, f, t)| through(c, f, t).map(|w| (c, w))).collect();
        if let (Some(first), Some(rest)) = (first, rest) {
            let mut chosen = vec![(c1, first)];
            chosen.extend(rest);
            finish(&mut out, &ch, Member::FromS { end: b, skip: None }, chosen);
        }
        return out;
    }
    for (xp, yp) in [(u, v), (v, u)] {
        let ch = chain(r, x, yp);
        let i = ch.iter().position(|&(c, _, _)| r.pert[c].contains(&s)).expect("child holding s");
        let rest = |from: usize| -> Option<Vec<(usize, &Witness)>> {
            ch[from..].iter().map(|&(c, f, t)| through(c, f, t).map(|w| (c, w))).collect()
        };
        match i {
            0 => {
                let (c1, _, w1) = ch[0];
                for skip in [None, Some(yp)] {
                    if let (Some(first), Some(tail)) = (l[c1].get(&Member::FromS { end: w1, skip }), rest(1)) {
                        let mut chosen = vec![(c1, first)];
                        chosen.extend(tail);
                        finish(&mut out, &ch, Member::FromS { end: xp, skip }, chosen);
                    }
                }
            }
            1 if r.is_q(ch[0].0) => {
                let (c2, _, w2) = ch[1];
                if let (Some(first), Some(tail)) = (l[c2].get(&Member::FromS { end: w2, skip: None }), rest(2)) {
                    let mut chosen = vec![(c2, first)];
                    chosen.extend(tail);
                    finish(&mut out, &ch, Member::FromS { end: xp, skip: Some(yp) }, chosen);
                }
            }
            _ => {}
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum HSlot {
    Ref,
    To(usize),
}

type HRot = BTreeMap<usize, Vec<HSlot>>;

/// Auxiliary graph of a 3-connected skeleton: every non-Q child becomes a
/// subdivision vertex, Q-children stay edges, the parent slot is blocked.
/// `fake` optionally doubles the child `nu` by an extra edge between its
/// poles, placed after (`true`) or before the subdivided edge at the first pole.
fn build_h(r: &Rooted, x: usize, sk: &SkRot, fake: Option<(usize, bool)>) -> HRot {
    let mut h = HRot::new();
    for (&v, slots) in sk {
        let mut list = Vec::new();
        for sl in slots {
            match *sl {
                Sk::Parent => list.push(HSlot::Ref),
                Sk::Child(c) if r.is_q(c) => list.push(HSlot::To(r.other_pole(c, v))),
                Sk::Child(c) => match fake {
                    Some((nu, after)) if nu == c => {
                        let o = r.other_pole(c, v);
                        if (v == r.poles[c].0) == after {
                            list.extend([HSlot::To(SUB + c), HSlot::To(o)]);
                        } else {
                            list.extend([HSlot::To(o), HSlot::To(SUB + c)]);
                        }
                    }
                    _ => list.push(HSlot::To(SUB + c)),
                },
            }
        }
        h.insert(v, list);
    }
    for &c in &r.children[x] {
        if !r.is_q(c) {
            let (a, b) = r.poles[c];
            h.insert(SUB + c, vec![HSlot::To(a), HSlot::To(b)]);
        }
    }
    h
}

/// Forced walk: always the first unvisited slot counterclockwise after the
/// edge we came from; meeting the parent slot first ends the walk there.
fn walk(h: &HRot, start: usize, first: usize) -> Option<Vec<usize>> {
    let mut visited = BTreeSet::from([start, first]);
    let mut path = vec![start, first];
    'step: loop {
        let (prev, v) = (path[path.len() - 2], path[path.len() - 1]);
        let list = &h[&v];
        let k = list.iter().position(|&z| z == HSlot::To(prev))?;
        for d in 1..list.len() {
            match list[(k + d) % list.len()] {
                HSlot::Ref => return Some(path),
                HSlot::To(w) if !visited.contains(&w) => {
                    visited.insert(w);
                    path.push(w);
                    continue 'step;
                }
                HSlot::To(_) => {}
            }
        }
        return None;
    }
}

fn r_node(r: &Rooted, x: usize, s: usize, l: &[LSet], skel: &BTreeMap<usize, Vec<usize>>) -> LSet {
    let mut out = LSet::new();
    if !r.pert[x].contains(&s) {
        return out;
    }
    let node = &r.tree.nodes[x];
    let link_of = |a: usize, b: usize| {
        let e = node
            .edges
            .iter()
            .find(|e| Edge::new(e.u, e.v) == Edge::new(a, b))
            .expect("skeleton edge");
        match e.link {
            Link::Node(j) => j,
            Link::Real => unreachable!(),
        }
    };
    let sk0: SkRot = skel
        .iter()
        .map(|(&v, ns)| {
            let slots = ns
                .iter()
                .map(|&w| {
                    let j = link_of(v, w);
                    if j == r.parent[x] {
                        Sk::Parent
                    } else {
                        Sk::Child(j)
                    }
                })
                .collect();
            (v, slots)
        })
        .collect();
    let q_between: BTreeMap<Edge, usize> = r.children[x]
        .iter()
        .filter(|&&c| r.is_q(c))
        .map(|&c| (Edge::new(r.poles[c].0, r.poles[c].1), c))
        .collect();
    let (pu, pv) = r.poles[x];
    let in_skeleton = skel.contains_key(&s);
    let nu = (!in_skeleton).then(|| *r.children[x].iter().find(|&&c| r.pert[c].contains(&s)).expect("child holding s"));

    // Turns a successful walk into a member of L(x).
    let finish = |out: &mut LSet, sk: &SkRot, h: &HRot, hpath: &[usize], seq: &[usize], head: Option<(usize, &Witness)>| {
        let end = *hpath.last().expect("nonempty");
        if end != pu && end != pv {
            return;
        }
        let other = if end == pu { pv } else { pu };
        let visited: BTreeSet<usize> = hpath.iter().copied().collect();
        if h.keys().any(|k| !visited.contains(k) && *k != other) {
            return;
        }
        let skip = (!visited.contains(&other)).then_some(other);
        let mut chosen: Vec<(usize, &Witness)> = head.into_iter().collect();
        let mut i = 0;
        while i + 1 < seq.len() {
            let (from, c, to, step) = if seq[i + 1] >= SUB {
                (seq[i], seq[i + 1] - SUB, seq[i + 2], 2)
            } else {
                (seq[i], q_between[&Edge::new(seq[i], seq[i + 1])], seq[i + 1], 1)
            };
            let m = if from == s {
                Member::FromS { end: to, skip: None }
            } else {
                Member::Through { from, to }
            };
            match l[c].get(&m) {
                Some(w) => chosen.push((c, w)),
                None => return,
            }
            i += step;
        }
        let m = Member::FromS { end, skip };
        if out.contains_key(&m) {
            return;
        }
        let mut paths: Vec<&[usize]> = chosen.iter().map(|(_, w)| w.path.as_slice()).collect();
        let start = [s];
        if head.is_none() {
            paths.insert(0, &start);
        }
        let path = join(&paths);
        let parts = parts_with(r, x, &chosen);
        if let Some(w) = pick(r, x, s, m, path, std::slice::from_ref(sk), &parts) {
            out.insert(m, w);
        }
    };

    for sk in [sk0.clone(), mirror(&sk0)] {
        match nu {
            None => {
                let h = build_h(r, x, &sk, None);
                for sl in h[&s].clone() {
                    if let HSlot::To(w) = sl {
                        if let Some(p) = walk(&h, s, w) {
                            finish(&mut out, &sk, &h, &p, &p, None);
                        }
                    }
                }
            }
            Some(nu) => {
                let (a, b) = r.poles[nu];
                for fake in [None, Some(false), Some(true)] {
                    let h = build_h(r, x, &sk, fake.map(|f| (nu, f)));
                    for (xp, yp) in [(a, b), (b, a)] {
                        let first = if fake.is_none() { xp } else { yp };
                        let Some(p) = walk(&h, SUB + nu, first) else { continue };
                        let (m, seq) = if fake.is_none() {
                            (Member::FromS { end: xp, skip: Some(yp) }, &p[1..])
                        } else {
                            if p.len() < 3 || p[2] != xp {
                                continue;
                            }
                            (Member::FromS { end: xp, skip: None }, &p[2..])
                        };
                        if let Some(wn) = l[nu].get(&m) {
                            finish(&mut out, &sk, &h, &p, seq, Some((nu, wn)));
                        }
                    }
                }
            }
        }
    }
    out
}

/// One biconnected block, ready for repeated st-queries.
struct Prepared {
    edges: Vec<Edge>,
    tree: SpqrTree,
    skel: BTreeMap<usize, BTreeMap<usize, Vec<usize>>>,
    min_nbr: BTreeMap<usize, usize>,
}

impl Prepared {
    fn new(edges: &[Edge]) -> Option<Prepared> {
        let tree = SpqrTree::from_edges(edges);
        debug_assert_eq!(tree.check(edges), Ok(()));
        let mut skel = BTreeMap::new();
        for (i, n) in tree.nodes.iter().enumerate() {
            if n.kind == NodeKind::R {
                let es: Vec<Edge> = n.edges.iter().map(|e| Edge::new(e.u, e.v)).collect();
                let rot = embed_block(&es)?;
                skel.insert(i, rot.into_iter().collect());
            }
        }
        let mut min_nbr: BTreeMap<usize, usize> = BTreeMap::new();
        for e in edges {
            for (a, b) in [(e.u, e.v), (e.v, e.u)] {
                let m = min_nbr.entry(a).or_insert(b);
                *m = (*m).min(b);
            }
        }
        Some(Prepared {
            edges: edges.to_vec(),
            tree,
            skel,
            min_nbr,
        })
    }

    /// Rotations (global labels) and path of a strongly one-sided s-t path.
    fn solve(&self, s: usize, t: usize) -> Option<(BTreeMap<usize, Vec<usize>>, Vec<usize>)> {
        let u = *self.min_nbr.get(&t)?;
        self.solve_rooted(s, t, u)
    }

    /// As [`Prepared::solve`], rooted at the Q-node of the edge `u t`.
    fn solve_rooted(&self, s: usize, t: usize, u: usize) -> Option<(BTreeMap<usize, Vec<usize>>, Vec<usize>)> {
        if s == t || !self.min_nbr.contains_key(&s) || !self.min_nbr.contains_key(&t) {
            return None;
        }
        if self.edges.len() == 1 {
            return Some((BTreeMap::from([(s, vec![t]), (t, vec![s])]), vec![s, t]));
        }
        let root = self.tree.q_node(Edge::new(u, t)).expect("edge has a Q-node");
        let r = Rooted::new(&self.tree, root);
        let mut l: Vec<LSet> = vec![LSet::new(); self.tree.nodes.len()];
        for &x in &r.post {
            if x == root {
                continue;
            }
            l[x] = match self.tree.nodes[x].kind {
                NodeKind::Q => q_node(&r, x, s),
                NodeKind::P => p_node(&r, x, s, &l),
                NodeKind::S => s_node(&r, x, s, &l),
                NodeKind::R => r_node(&r, x, s, &l, &self.skel[&x]),
            };
        }
        let mu = r.children[root][0];
        // The path may also finish along the root edge itself.
        let (w, tail) = match l[mu].get(&Member::FromS { end: t, skip: None }) {
            Some(w) => (w, None),
            None => (l[mu].get(&Member::FromS { end: u, skip: Some(t) })?, Some(t)),
        };
        let rot = w
            .emb
            .iter()
            .map(|(&v, slots)| {
                let list = slots
                    .iter()
                    .map(|&sl| match sl {
                        Slot::Real(x) => x,
                        Slot::Ref => {
                            if v == u {
                                t
                            } else {
                                u
                            }
                        }
                    })
                    .collect();
                (v, list)
            })
            .collect();
        let mut path = w.path.clone();
        path.extend(tail);
        Some((rot, path))
    }
}

/// A strongly one-sided Hamiltonian s-t path with a plane embedding in
/// which it is one-sided on the counterclockwise side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OneSidedWitness {
    pub s: usize,
    pub t: usize,
    pub rotation: RotationSystem,
    pub path: HamPath,
}

struct Context {
    g: Graph,
    bct: BlockCutTree,
    blocks: Vec<Prepared>,
}

impl Context {
    fn new(g: &Graph) -> Result<Context, SpqrError> {
        if !g.is_connected() {
            return Err(SpqrError::Disconnected);
        }
        if !is_planar(g) {
            return Err(SpqrError::NotPlanar);
        }
        let bct = block_cut_tree(g).map_err(|_| SpqrError::Disconnected)?;
        let blocks = bct
            .blocks
            .iter()
            .map(|b| {
                if b.edges.is_empty() {
                    None
                } else {
                    Prepared::new(&b.edges)
                }
            })
            .collect::<Option<Vec<_>>>()
            .unwrap_or_default();
        Ok(Context {
            g: g.clone(),
            bct,
            blocks,
        })
    }

    fn solve(&self, s: usize, t: usize) -> Option<OneSidedWitness> {
        let n = self.g.vertex_count();
        if n == 1 {
            let rotation = RotationSystem::new(&self.g, vec![Vec::new()]).expect("single vertex");
            let path = HamPath::new(&self.g, vec![0]).expect("single vertex");
            return (s == 0 && t == 0).then_some(OneSidedWitness { s, t, rotation, path });
        }
        if s == t || self.bct.is_cut_vertex(s) || self.bct.is_cut_vertex(t) {
            return None;
        }
        let (blocks, cuts) = self.bct.as_path(Some(s))?;
        let holds = |b: usize, v: usize| self.bct.blocks[b].vertices.binary_search(&v).is_ok();
        if !holds(blocks[0], s) || !holds(*blocks.last().expect("nonempty"), t) {
            return None;
        }
        let mut ends = vec![s];
        ends.extend(&cuts);
        ends.push(t);
        let mut parts = Vec::with_capacity(blocks.len());
        for (i, &b) in blocks.iter().enumerate() {
            parts.push(self.blocks[b].solve(ends[i], ends[i + 1])?);
        }
        let mut rot: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut path: Vec<usize> = Vec::with_capacity(n);
        for (i, (r, p)) in parts.iter().enumerate() {
            for (&v, list) in r {
                if rot[v].is_empty() {
                    rot[v] = list.clone();
                }
            }
            if i == 0 {
                path.extend(p);
            } else {
                path.extend(&p[1..]);
            }
        }
        // At a cut vertex: last in-edge, first out-edge, rest of the next
        // block, rest of the previous block.
        for (i, &c) in cuts.iter().enumerate() {
            let (ra, pa) = &parts[i];
            let (rb, pb) = &parts[i + 1];
            let rotate = |list: &[usize], first: usize| {
                let k = list.iter().position(|&z| z == first).expect("path edge");
                let mut out = list[k..].to_vec();
                out.extend(&list[..k]);
                out
            };
            let a = rotate(&ra[&c], pa[pa.len() - 2]);
            let b = rotate(&rb[&c], pb[1]);
            let mut list = vec![a[0]];
            list.extend(&b);
            list.extend(&a[1..]);
            rot[c] = list;
        }
        let rotation = RotationSystem::new(&self.g, rot).expect("blocks cover every edge");
        let path = HamPath::new(&self.g, path).expect("blocks chain into a Hamiltonian path");
        assert!(
            rotation.is_plane() && one_sided_in(&rotation, path.vertices()),
            "assembled witness failed verification"
        );
        Some(OneSidedWitness { s, t, rotation, path })
    }

    fn candidates(&self) -> Vec<(usize, usize)> {
        let n = self.g.vertex_count();
        if n == 1 {
            return vec![(0, 0)];
        }
        if self.bct.as_path(None).is_none() {
            return Vec::new();
        }
        let ok = |v: usize| !self.bct.is_cut_vertex(v);
        let mut out = Vec::new();
        for s in (0..n).filter(|&v| ok(v)) {
            for t in (0..n).filter(|&v| ok(v) && v != s) {
                out.push((s, t));
            }
        }
        out
    }
}

fn check_vertex(g: &Graph, v: usize) -> Result<(), SpqrError> {
    if v >= g.vertex_count() {
        Err(SpqrError::BadVertex(v))
    } else {
        Ok(())
    }
}

/// Whether some planar embedding of `g` has a strongly one-sided Hamiltonian
/// path from `s` to `t`, with a witness.
pub fn st_one_sided(g: &Graph, s: usize, t: usize) -> Result<Option<OneSidedWitness>, SpqrError> {
    check_vertex(g, s)?;
    check_vertex(g, t)?;
    Ok(Context::new(g)?.solve(s, t))
}

/// First pair `(s, t)` in lexicographic order for which [`st_one_sided`]
/// succeeds, searching pairs on `jobs` threads.
pub fn planar_strongly_1sided_with(g: &Graph, jobs: usize) -> Result<Option<OneSidedWitness>, SpqrError> {
    let ctx = Context::new(g)?;
    let cands = ctx.candidates();
    if jobs <= 1 {
        return Ok(cands.iter().find_map(|&(s, t)| ctx.solve(s, t)));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool");
    Ok(pool.install(|| cands.par_iter().find_map_first(|&(s, t)| ctx.solve(s, t))))
}

pub fn planar_strongly_1sided(g: &Graph) -> Result<Option<OneSidedWitness>, SpqrError> {
    planar_strongly_1sided_with(g, 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bowtie() -> Graph {
        Graph::from_edges(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]).unwrap()
    }

    #[test]
    fn answer_does_not_depend_on_the_root() {
        use crate::blockcut::is_biconnected;
        use crate::corpus::connected_planar_graphs;
        for n in 3..=6 {
            for g in connected_planar_graphs(n).into_iter().filter(is_biconnected) {
                let prep = Prepared::new(g.edges()).unwrap();
                for s in 0..n {
                    for t in (0..n).filter(|&t| t != s) {
                        let answers: Vec<bool> =
                            g.neighbors(t).iter().map(|&u| prep.solve_rooted(s, t, u).is_some()).collect();
                        assert!(answers.windows(2).all(|w| w[0] == w[1]), "{:?} s={s} t={t}", g.edges());
                    }
                }
            }
        }
    }

    #[test]
    fn cycle_adjacent_ends() {
        let g = Graph::cycle(4);
        let w = st_one_sided(&g, 0, 1).unwrap().unwrap();
        assert_eq!(w.path.vertices(), &[0, 3, 2, 1]);
        assert!(st_one_sided(&g, 0, 2).unwrap().is_none());
    }

    #[test]
    fn k4_every_pair() {
        let g = Graph::complete(4);
        for s in 0..4 {
            for t in 0..4 {
                if s != t {
                    let w = st_one_sided(&g, s, t).unwrap().unwrap();
                    assert!(w.rotation.is_plane());
                    assert!(one_sided_in(&w.rotation, w.path.vertices()));
                }
            }
        }
    }

    #[test]
    fn shared_vertex_triangles() {
        let g = bowtie();
        assert!(st_one_sided(&g, 0, 1).unwrap().is_none());
        let w = st_one_sided(&g, 0, 3).unwrap().unwrap();
        assert_eq!(w.path.vertices(), &[0, 1, 2, 4, 3]);
        assert!(st_one_sided(&g, 2, 3).unwrap().is_none());
    }

    #[test]
    fn whole_graph_search() {
        assert!(planar_strongly_1sided(&Graph::complete(4)).unwrap().is_some());
        assert!(planar_strongly_1sided(&Graph::star(3)).unwrap().is_none());
        assert!(planar_strongly_1sided(&Graph::path(1)).unwrap().is_some());
        let a = planar_strongly_1sided_with(&bowtie(), 1).unwrap();
        let b = planar_strongly_1sided_with(&bowtie(), 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(planar_strongly_1sided(&Graph::complete(5)), Err(SpqrError::NotPlanar));
        assert_eq!(planar_strongly_1sided(&Graph::empty(2)), Err(SpqrError::Disconnected));
        assert_eq!(st_one_sided(&Graph::cycle(3), 0, 7), Err(SpqrError::BadVertex(7)));
    }
}
