//! Exhaustive rique-number search.
//!
//! Vertex orders are enumerated with twin pruning: when two unplaced vertices
//! are twins (swapping them is an automorphism), only one of them is tried at
//! the next position. For complete graphs this leaves a single order. For
//! each order the edges are assigned to pages by backtracking with an
//! incremental pattern check, under branch-and-bound on the best page count
//! so far. The search stops as soon as the density lower bound is met.

use rayon::prelude::*;

use super::SearchError;
use crate::bounds::density_bound;
use crate::graph::{Edge, Graph};
use crate::layout::{LinearLayout, VertexOrder};

pub const DEFAULT_LIMIT: usize = 9;

#[derive(Clone, Debug)]
pub struct ExactOptions {
    pub limit: usize,
    /// Worker threads over first-vertex choices; 1 means sequential.
    pub jobs: usize,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions {
            limit: DEFAULT_LIMIT,
            jobs: 1,
        }
    }
}

pub fn exact_rique_number(g: &Graph, limit: usize) -> Result<(usize, LinearLayout), SearchError> {
    exact_rique_number_with(g, &ExactOptions { limit, jobs: 1 })
}

/// Smallest page count not excluded by the density bound.
pub fn density_lower_bound(g: &Graph) -> usize {
    let (n, m) = (g.vertex_count(), g.edge_count());
    if m == 0 {
        return 0;
    }
    if n < 3 {
        return 1;
    }
    (1..).find(|&k| density_bound(n, k) >= m as i64).expect("bound grows with k")
}

pub fn exact_rique_number_with(
    g: &Graph,
    opts: &ExactOptions,
) -> Result<(usize, LinearLayout), SearchError> {
    let n = g.vertex_count();
    if n > opts.limit {
        return Err(SearchError::VertexLimit { n, limit: opts.limit });
    }
    let identity = VertexOrder::identity(n);
    if g.edge_count() == 0 {
        return Ok((0, LinearLayout::new(identity, Vec::new())));
    }
    let lb = density_lower_bound(g);
    let greedy = first_fit(g, &identity);
    let mut searcher = Searcher::new(g, lb, LinearLayout::new(identity, greedy));
    if searcher.best_k <= lb {
        return Ok(searcher.finish());
    }
    let roots = searcher.candidates(&vec![false; n]);
    if opts.jobs <= 1 {
        let mut prefix = Vec::with_capacity(n);
        let mut used = vec![false; n];
        searcher.enumerate(&mut prefix, &mut used);
        return Ok(searcher.finish());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs)
        .build()
        .expect("thread pool");
    let results: Vec<(usize, LinearLayout)> = pool.install(|| {
        roots
            .par_iter()
            .map(|&r| {
                let mut s = searcher.clone();
                let mut used = vec![false; n];
                used[r] = true;
                let mut prefix = vec![r];
                s.enumerate(&mut prefix, &mut used);
                s.finish()
            })
            .collect()
    });
    // First minimum in root order keeps the answer independent of scheduling.
    let mut best = searcher.finish();
    for r in results {
        if r.0 < best.0 {
            best = r;
        }
    }
    Ok(best)
}

#[derive(Clone)]
struct Searcher<'a> {
    g: &'a Graph,
    class_of: Vec<usize>,
    lb: usize,
    best_k: usize,
    best: LinearLayout,
}

impl<'a> Searcher<'a> {
    fn new(g: &'a Graph, lb: usize, initial: LinearLayout) -> Self {
        let mut class_of = vec![0; g.vertex_count()];
        for (i, class) in g.twin_classes().iter().enumerate() {
            for &v in class {
                class_of[v] = i;
            }
        }
        Searcher {
            g,
            class_of,
            lb,
            best_k: initial.page_count(),
            best: initial,
        }
    }

    fn finish(self) -> (usize, LinearLayout) {
        (self.best_k, self.best)
    }

    /// One unused vertex per twin class.
    fn candidates(&self, used: &[bool]) -> Vec<usize> {
        let mut seen = vec![false; self.class_of.len()];
        let mut out = Vec::new();
        for v in 0..used.len() {
            if !used[v] && !seen[self.class_of[v]] {
                seen[self.class_of[v]] = true;
                out.push(v);
            }
        }
        out
    }

    /// Returns true once the lower bound is reached.
    fn enumerate(&mut self, prefix: &mut Vec<usize>, used: &mut [bool]) -> bool {
        if self.best_k <= self.lb {
            return true;
        }
        if prefix.len() == used.len() {
            let order = VertexOrder::from_sequence(prefix.clone()).expect("prefix is a permutation");
            while self.best_k > self.lb {
                match assign_pages(self.g, &order, self.best_k - 1) {
                    Some(pages) => {
                        self.best_k = pages.len();
                        self.best = LinearLayout::new(order.clone(), pages);
                    }
                    None => break,
                }
            }
            return self.best_k <= self.lb;
        }
        for v in self.candidates(used) {
            used[v] = true;
            prefix.push(v);
            let done = self.enumerate(prefix, used);
            prefix.pop();
            used[v] = false;
            if done {
                return true;
            }
        }
        false
    }
}

type Span = (usize, usize);

fn spans_pattern(x: Span, y: Span, z: Span) -> bool {
    let ((a, a2), (b, b2), (c, c2)) = (x, y, z);
    a < b && b < c && c < b2 && b2 < a2 && b2 < c2
}

/// Whether adding `e` to `page` creates a pattern (with `e` in any role).
fn conflicts(e: Span, page: &[Span]) -> bool {
    for &x in page {
        for &y in page {
            if spans_pattern(e, x, y) || spans_pattern(x, e, y) || spans_pattern(x, y, e) {
                return true;
            }
        }
    }
    false
}

/// Edges with their spans, by left endpoint then longest first.
fn sorted_spans(g: &Graph, order: &VertexOrder) -> Vec<(Edge, Span)> {
    let mut v: Vec<(Edge, Span)> = g.edges().iter().map(|&e| (e, order.span(e))).collect();
    v.sort_by_key(|&(_, (l, r))| (l, std::cmp::Reverse(r)));
    v
}

/// First-fit page assignment; always succeeds.
pub fn first_fit(g: &Graph, order: &VertexOrder) -> Vec<Vec<Edge>> {
    let mut pages: Vec<Vec<Edge>> = Vec::new();
    let mut spans: Vec<Vec<Span>> = Vec::new();
    for (e, s) in sorted_spans(g, order) {
        match (0..pages.len()).find(|&i| !conflicts(s, &spans[i])) {
            Some(i) => {
                pages[i].push(e);
                spans[i].push(s);
            }
            None => {
                pages.push(vec![e]);
                spans.push(vec![s]);
            }
        }
    }
    pages
}

/// Partition of the edges into at most `k` pattern-free pages under `order`,
/// or `None` when none exists.
pub fn assign_pages(g: &Graph, order: &VertexOrder, k: usize) -> Option<Vec<Vec<Edge>>> {
    if k == 0 {
        return (g.edge_count() == 0).then(Vec::new);
    }
    if k == 1 || g.edge_count() <= 2 {
        return crate::layout::find_pattern(order, g.edges())
            .is_none()
            .then(|| vec![g.edges().to_vec()]);
    }
    let items = sorted_spans(g, order);
    let mut spans: Vec<Vec<Span>> = vec![Vec::new(); k];
    let mut choice = vec![0usize; items.len()];
    if !backtrack(&items, 0, k, 0, &mut spans, &mut choice) {
        return None;
    }
    let mut pages: Vec<Vec<Edge>> = vec![Vec::new(); k];
    for (i, &(e, _)) in items.iter().enumerate() {
        pages[choice[i]].push(e);
    }
    pages.retain(|p| !p.is_empty());
    for p in &mut pages {
        p.sort_unstable();
    }
    Some(pages)
}

fn backtrack(
    items: &[(Edge, Span)],
    i: usize,
    k: usize,
    used: usize,
    spans: &mut [Vec<Span>],
    choice: &mut [usize],
) -> bool {
    if i == items.len() {
        return true;
    }
    let s = items[i].1;
    // Pages beyond the first empty one are interchangeable.
    for p in 0..k.min(used + 1) {
        if conflicts(s, &spans[p]) {
            continue;
        }
        spans[p].push(s);
        choice[i] = p;
        if backtrack(items, i + 1, k, used.max(p + 1), spans, choice) {
            return true;
        }
        spans[p].pop();
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::validate_layout;

    fn check(g: &Graph) -> usize {
        let (k, layout) = exact_rique_number(g, DEFAULT_LIMIT).unwrap();
        assert!(validate_layout(g, &layout).unwrap().valid);
        assert_eq!(layout.page_count(), k);
        k
    }

    #[test]
    fn small_cliques() {
        assert_eq!(check(&Graph::complete(3)), 1);
        assert_eq!(check(&Graph::complete(4)), 1);
        assert_eq!(check(&Graph::complete(5)), 2);
        assert_eq!(check(&Graph::complete(6)), 2);
    }

    #[test]
    fn cycle_and_trivial() {
        assert_eq!(check(&Graph::cycle(5)), 1);
        assert_eq!(check(&Graph::empty(3)), 0);
        assert_eq!(check(&Graph::path(2)), 1);
    }

    #[test]
    fn limit_is_enforced() {
        assert!(matches!(
            exact_rique_number(&Graph::complete(10), 9),
            Err(SearchError::VertexLimit { n: 10, limit: 9 })
        ));
    }

    #[test]
    fn parallel_matches_sequential() {
        let g = Graph::complete_bipartite(3, 3);
        let seq = exact_rique_number(&g, 9).unwrap().0;
        let par = exact_rique_number_with(&g, &ExactOptions { limit: 9, jobs: 3 }).unwrap();
        assert_eq!(seq, par.0);
        assert!(validate_layout(&g, &par.1).unwrap().valid);
    }

    #[test]
    fn incremental_check_matches_scan() {
        let g = Graph::complete(6);
        let order = VertexOrder::identity(6);
        let pages = first_fit(&g, &order);
        for p in &pages {
            assert!(crate::layout::find_pattern(&order, p).is_none());
        }
        assert!(assign_pages(&g, &order, 1).is_none());
        assert!(assign_pages(&g, &order, 2).is_some());
    }
}
