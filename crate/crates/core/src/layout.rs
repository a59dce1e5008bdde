//! Rique semantics on linear layouts.
//!
//! A rique page is processed by one restricted-input queue: every edge is
//! inserted at the head when its left endpoint is reached and removed, from
//! the head or from the tail, at its right endpoint. A page is feasible
//! exactly when no three of its edges `(a,a')`, `(b,b')`, `(c,c')` satisfy
//! `a < b < c < b' < {a', c'}` in the vertex order; such a triple is a
//! [`PatternWitness`].

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Edge, Graph};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LayoutError {
    #[error("order is not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error("edge {0:?} is not an edge of the graph")]
    UnknownEdge(Edge),
    #[error("edge {0:?} appears on more than one page")]
    EdgeRepeated(Edge),
    #[error("edge {0:?} is on no page")]
    EdgeMissing(Edge),
    #[error("page {page} contains a forbidden pattern {witness}")]
    PatternPresent { page: usize, witness: PatternWitness },
    #[error("schedule replay failed on page {page}: {reason}")]
    ReplayFailure { page: usize, reason: String },
}

/// Linear order of the vertices: `seq[i]` is the vertex at position `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexOrder {
    seq: Vec<usize>,
    #[serde(skip)]
    pos: Vec<usize>,
}

impl VertexOrder {
    pub fn identity(n: usize) -> Self {
        VertexOrder {
            seq: (0..n).collect(),
            pos: (0..n).collect(),
        }
    }

    pub fn from_sequence(seq: Vec<usize>) -> Result<Self, LayoutError> {
        let n = seq.len();
        let mut pos = vec![usize::MAX; n];
        for (i, &v) in seq.iter().enumerate() {
            if v >= n || pos[v] != usize::MAX {
                return Err(LayoutError::NotAPermutation(n));
            }
            pos[v] = i;
        }
        Ok(VertexOrder { seq, pos })
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    pub fn sequence(&self) -> &[usize] {
        &self.seq
    }

    pub fn position(&self, v: usize) -> usize {
        self.pos[v]
    }

    pub fn vertex_at(&self, i: usize) -> usize {
        self.seq[i]
    }

    /// Endpoints of `e` as `(left, right)`.
    pub fn orient(&self, e: Edge) -> (usize, usize) {
        if self.pos[e.u] < self.pos[e.v] {
            (e.u, e.v)
        } else {
            (e.v, e.u)
        }
    }

    /// Positions of the endpoints of `e`, smaller first.
    pub fn span(&self, e: Edge) -> (usize, usize) {
        let (a, b) = (self.pos[e.u], self.pos[e.v]);
        if a < b {
            (a, b)
        } else {
            (b, a)
        }
    }

    /// Consecutive pairs of the order.
    pub fn spine(&self) -> Vec<Edge> {
        self.seq.windows(2).map(|w| Edge::new(w[0], w[1])).collect()
    }

    /// Order after renaming vertex `v` to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        Self::from_sequence(self.seq.iter().map(|&v| perm[v]).collect())
            .expect("relabeling a permutation")
    }
}

/// Vertex order plus a partition of the edges into pages.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearLayout {
    pub order: VertexOrder,
    pub pages: Vec<Vec<Edge>>,
}

impl LinearLayout {
    pub fn new(order: VertexOrder, pages: Vec<Vec<Edge>>) -> Self {
        LinearLayout { order, pages }
    }

    /// Every edge of `g` on its own page.
    pub fn one_edge_per_page(g: &Graph, order: VertexOrder) -> Self {
        LinearLayout {
            order,
            pages: g.edges().iter().map(|&e| vec![e]).collect(),
        }
    }

    pub fn page_count(&self) -> usize {
        self.pages.len()
    }

    pub fn edge_count(&self) -> usize {
        self.pages.iter().map(Vec::len).sum()
    }

    /// Checks that the order covers `g`'s vertices and the pages partition its edges.
    pub fn check_partition(&self, g: &Graph) -> Result<(), LayoutError> {
        if self.order.len() != g.vertex_count() {
            return Err(LayoutError::NotAPermutation(g.vertex_count()));
        }
        let mut seen = BTreeSet::new();
        for page in &self.pages {
            for &e in page {
                if !g.has_edge(e.u, e.v) {
                    return Err(LayoutError::UnknownEdge(e));
                }
                if !seen.insert(e) {
                    return Err(LayoutError::EdgeRepeated(e));
                }
            }
        }
        if let Some(&e) = g.edges().iter().find(|e| !seen.contains(e)) {
            return Err(LayoutError::EdgeMissing(e));
        }
        Ok(())
    }

    pub fn relabel(&self, perm: &[usize]) -> Self {
        LinearLayout {
            order: self.order.relabel(perm),
            pages: self
                .pages
                .iter()
                .map(|p| p.iter().map(|e| Edge::new(perm[e.u], perm[e.v])).collect())
                .collect(),
        }
    }
}

/// Three page edges `(a,a')`, `(b,b')`, `(c,c')` with
/// `a < b < c < b' < {a', c'}`. Each edge is stored as `(left, right)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PatternWitness {
    pub ea: (usize, usize),
    pub eb: (usize, usize),
    pub ec: (usize, usize),
}

impl PatternWitness {
    /// Positions `[a, b, c, b', a', c']` under `order`.
    pub fn positions(&self, order: &VertexOrder) -> [usize; 6] {
        let p = |v| order.position(v);
        [
            p(self.ea.0),
            p(self.eb.0),
            p(self.ec.0),
            p(self.eb.1),
            p(self.ea.1),
            p(self.ec.1),
        ]
    }

    /// Whether the six positions satisfy the pattern inequalities.
    pub fn holds(&self, order: &VertexOrder) -> bool {
        let [a, b, c, b2, a2, c2] = self.positions(order);
        a < b && b < c && c < b2 && b2 < a2 && b2 < c2
    }
}

impl fmt::Display for PatternWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "<({},{}),({},{}),({},{})>",
            self.ea.0, self.ea.1, self.eb.0, self.eb.1, self.ec.0, self.ec.1
        )
    }
}

/// Finds the pattern witness whose positions `(a, b, c, b', a', c')` are
/// lexicographically smallest, or `None` when the page is feasible.
pub fn find_pattern(order: &VertexOrder, page: &[Edge]) -> Option<PatternWitness> {
    let spans: Vec<(usize, usize)> = page.iter().map(|&e| order.span(e)).collect();
    let mut best: Option<([usize; 6], usize, usize, usize)> = None;
    for (ib, &(b, b2)) in spans.iter().enumerate() {
        // Smallest (a, a') enclosing e_b strictly.
        let mut outer: Option<(usize, usize, usize)> = None;
        for (ia, &(a, a2)) in spans.iter().enumerate() {
            if a < b && b2 < a2 && outer.is_none_or(|(x, x2, _)| (a, a2) < (x, x2)) {
                outer = Some((a, a2, ia));
            }
        }
        let Some((a, a2, ia)) = outer else { continue };
        for (ic, &(c, c2)) in spans.iter().enumerate() {
            if b < c && c < b2 && b2 < c2 {
                let key = [a, b, c, b2, a2, c2];
                if best.is_none_or(|(k, ..)| key < k) {
                    best = Some((key, ia, ib, ic));
                }
            }
        }
    }
    best.map(|(_, ia, ib, ic)| PatternWitness {
        ea: order.orient(page[ia]),
        eb: order.orient(page[ib]),
        ec: order.orient(page[ic]),
    })
}

/// How an edge leaves the rique at its right endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum EdgeRole {
    Head,
    Tail,
}

impl fmt::Display for EdgeRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeRole::Head => "head",
            EdgeRole::Tail => "tail",
        })
    }
}

/// Labels each page edge: tail when no page edge strictly encloses it,
/// head otherwise. Labels are aligned with `page`.
pub fn roles_unchecked(order: &VertexOrder, page: &[Edge]) -> Vec<EdgeRole> {
    let spans: Vec<(usize, usize)> = page.iter().map(|&e| order.span(e)).collect();
    spans
        .iter()
        .map(|&(l, r)| {
            if spans.iter().any(|&(a, a2)| a < l && r < a2) {
                EdgeRole::Head
            } else {
                EdgeRole::Tail
            }
        })
        .collect()
}

/// Head/tail classification of a pattern-free page.
pub fn classify_page(order: &VertexOrder, page: &[Edge]) -> Result<Vec<EdgeRole>, LayoutError> {
    if let Some(witness) = find_pattern(order, page) {
        return Err(LayoutError::PatternPresent { page: 0, witness });
    }
    Ok(roles_unchecked(order, page))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ScheduleEvent {
    Insert(Edge),
    RemoveHead(Edge),
    RemoveTail(Edge),
}

/// Events performed while processing one vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexStep {
    pub vertex: usize,
    pub events: Vec<ScheduleEvent>,
}

/// Insert/remove sequence of one page.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PageTrace {
    pub steps: Vec<VertexStep>,
    pub roles: Vec<(Edge, EdgeRole)>,
    pub max_size: usize,
}

impl PageTrace {
    /// Replays the events on a fresh rique and checks them against `page`:
    /// every removal hits the current head or tail, every edge is inserted at
    /// its left endpoint and removed at its right endpoint exactly once, and
    /// the rique ends empty. Returns the largest state size.
    pub fn replay(&self, order: &VertexOrder, page: &[Edge]) -> Result<usize, String> {
        let mut state: VecDeque<Edge> = VecDeque::new();
        let mut inserted: BTreeSet<Edge> = BTreeSet::new();
        let mut removed: BTreeSet<Edge> = BTreeSet::new();
        let members: BTreeSet<Edge> = page.iter().copied().collect();
        let mut max_size = 0;
        let mut last_pos = None;
        for step in &self.steps {
            let p = order.position(step.vertex);
            if last_pos.is_some_and(|q| q >= p) {
                return Err(format!("vertex {} processed out of order", step.vertex));
            }
            last_pos = Some(p);
            for ev in &step.events {
                match *ev {
                    ScheduleEvent::Insert(e) => {
                        if !members.contains(&e) || order.orient(e).0 != step.vertex {
                            return Err(format!("{e:?} inserted at {}", step.vertex));
                        }
                        if !inserted.insert(e) {
                            return Err(format!("{e:?} inserted twice"));
                        }
                        state.push_front(e);
                        max_size = max_size.max(state.len());
                    }
                    ScheduleEvent::RemoveHead(e) | ScheduleEvent::RemoveTail(e) => {
                        if order.orient(e).1 != step.vertex {
                            return Err(format!("{e:?} removed at {}", step.vertex));
                        }
                        let got = if matches!(ev, ScheduleEvent::RemoveHead(_)) {
                            state.front()
                        } else {
                            state.back()
                        };
                        if got != Some(&e) {
                            return Err(format!("{e:?} is not at the expected end"));
                        }
                        if matches!(ev, ScheduleEvent::RemoveHead(_)) {
                            state.pop_front();
                        } else {
                            state.pop_back();
                        }
                        removed.insert(e);
                    }
                }
            }
        }
        if !state.is_empty() {
            return Err(format!("{} edges left in the rique", state.len()));
        }
        if inserted != members || removed != members {
            return Err("not every page edge was processed".into());
        }
        Ok(max_size)
    }
}

/// Simulates one page. At each vertex, incoming edges are removed first
/// (tail-labelled edges from the tail, head-labelled edges from the head,
/// whichever end currently holds one), then outgoing edges are inserted:
/// tail edges by increasing right endpoint, then head edges by decreasing
/// right endpoint.
pub fn simulate_page(order: &VertexOrder, page: &[Edge]) -> Result<PageTrace, String> {
    let roles = roles_unchecked(order, page);
    let role_of: HashMap<Edge, EdgeRole> = page.iter().copied().zip(roles.iter().copied()).collect();
    let mut outgoing: HashMap<usize, Vec<Edge>> = HashMap::new();
    let mut incoming: HashMap<usize, usize> = HashMap::new();
    for &e in page {
        let (l, r) = order.orient(e);
        outgoing.entry(l).or_default().push(e);
        *incoming.entry(r).or_default() += 1;
    }
    let mut state: VecDeque<Edge> = VecDeque::new();
    let mut steps = Vec::new();
    let mut max_size = 0;
    for &v in order.sequence() {
        let mut events = Vec::new();
        let mut pending = incoming.get(&v).copied().unwrap_or(0);
        while pending > 0 {
            let is_incoming = |e: &Edge, role| order.orient(*e).1 == v && role_of[e] == role;
            if let Some(e) = state.back().copied().filter(|e| is_incoming(e, EdgeRole::Tail)) {
                state.pop_back();
                events.push(ScheduleEvent::RemoveTail(e));
            } else if let Some(e) = state.front().copied().filter(|e| is_incoming(e, EdgeRole::Head)) {
                state.pop_front();
                events.push(ScheduleEvent::RemoveHead(e));
            } else {
                return Err(format!(
                    "stuck at vertex {v}: {pending} incoming edges not at a usable end"
                ));
            }
            pending -= 1;
        }
        if let Some(out) = outgoing.get(&v) {
            let mut tails: Vec<Edge> = out.iter().copied().filter(|e| role_of[e] == EdgeRole::Tail).collect();
            let mut heads: Vec<Edge> = out.iter().copied().filter(|e| role_of[e] == EdgeRole::Head).collect();
            tails.sort_by_key(|&e| order.span(e).1);
            heads.sort_by_key(|&e| std::cmp::Reverse(order.span(e).1));
            for e in tails.into_iter().chain(heads) {
                state.push_front(e);
                events.push(ScheduleEvent::Insert(e));
            }
            max_size = max_size.max(state.len());
        }
        if !events.is_empty() {
            steps.push(VertexStep { vertex: v, events });
        }
    }
    Ok(PageTrace {
        steps,
        roles: page.iter().copied().zip(roles).collect(),
        max_size,
    })
}

/// Complete schedule of a layout, one trace per page.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScheduleTrace {
    pub pages: Vec<PageTrace>,
}

/// Builds and replays the schedule of every page; pages must be pattern-free.
pub fn build_schedule(order: &VertexOrder, pages: &[Vec<Edge>]) -> Result<ScheduleTrace, LayoutError> {
    let mut out = Vec::with_capacity(pages.len());
    for (i, page) in pages.iter().enumerate() {
        if let Some(witness) = find_pattern(order, page) {
            return Err(LayoutError::PatternPresent { page: i, witness });
        }
        let trace = simulate_page(order, page)
            .and_then(|t| t.replay(order, page).map(|_| t))
            .map_err(|reason| LayoutError::ReplayFailure { page: i, reason })?;
        out.push(trace);
    }
    Ok(ScheduleTrace { pages: out })
}

/// Outcome for one page.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PageReport {
    pub page: usize,
    pub edges: usize,
    pub witness: Option<PatternWitness>,
    pub trace: Option<PageTrace>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub pages: Vec<PageReport>,
}

impl ValidationReport {
    /// `key: value` lines with the keys `valid`, `page`, `witness`, `trace`.
    pub fn to_text(&self) -> String {
        let mut s = format!("valid: {}\n", self.valid);
        for p in &self.pages {
            s.push_str(&format!("page: {} edges={}\n", p.page + 1, p.edges));
            if let Some(w) = &p.witness {
                s.push_str(&format!("witness: {w}\n"));
            }
            if let Some(t) = &p.trace {
                s.push_str(&format!("trace: {}\n", format_trace(t)));
            }
        }
        s
    }
}

fn format_trace(t: &PageTrace) -> String {
    let mut parts = Vec::new();
    for step in &t.steps {
        let evs: Vec<String> = step
            .events
            .iter()
            .map(|ev| match ev {
                ScheduleEvent::Insert(e) => format!("+{}-{}", e.u, e.v),
                ScheduleEvent::RemoveHead(e) => format!("-h{}-{}", e.u, e.v),
                ScheduleEvent::RemoveTail(e) => format!("-t{}-{}", e.u, e.v),
            })
            .collect();
        parts.push(format!("{}[{}]", step.vertex, evs.join(" ")));
    }
    format!("{} max={}", parts.join(" "), t.max_size)
}

/// Validates every page of `layout`; invalid pages carry their canonical
/// witness, valid pages a replayed schedule.
pub fn validate_layout(g: &Graph, layout: &LinearLayout) -> Result<ValidationReport, LayoutError> {
    layout.check_partition(g)?;
    let mut pages = Vec::with_capacity(layout.pages.len());
    for (i, page) in layout.pages.iter().enumerate() {
        let witness = find_pattern(&layout.order, page);
        let trace = match witness {
            Some(_) => None,
            None => {
                let t = simulate_page(&layout.order, page)
                    .and_then(|t| t.replay(&layout.order, page).map(|_| t))
                    .map_err(|reason| LayoutError::ReplayFailure { page: i, reason })?;
                Some(t)
            }
        };
        pages.push(PageReport {
            page: i,
            edges: page.len(),
            witness,
            trace,
        });
    }
    Ok(ValidationReport {
        valid: pages.iter().all(|p| p.witness.is_none()),
        pages,
    })
}

/// True when no two page edges cross (`a < b < a' < b'`).
pub fn page_is_stack(order: &VertexOrder, page: &[Edge]) -> bool {
    let spans: Vec<_> = page.iter().map(|&e| order.span(e)).collect();
    !spans.iter().any(|&(a, a2)| {
        spans.iter().any(|&(b, b2)| a < b && b < a2 && a2 < b2)
    })
}

/// True when no two page edges nest (`a < b < b' < a'`).
pub fn page_is_queue(order: &VertexOrder, page: &[Edge]) -> bool {
    let spans: Vec<_> = page.iter().map(|&e| order.span(e)).collect();
    !spans.iter().any(|&(a, a2)| {
        spans.iter().any(|&(b, b2)| a < b && b2 < a2)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(n: usize) -> VertexOrder {
        VertexOrder::identity(n)
    }

    /// Brute-force scan over ordered edge triples and both orientations.
    fn pattern_brute(order: &VertexOrder, page: &[Edge]) -> Option<[usize; 6]> {
        let mut best: Option<[usize; 6]> = None;
        for &x in page {
            for &y in page {
                for &z in page {
                    let (a, a2) = order.span(x);
                    let (b, b2) = order.span(y);
                    let (c, c2) = order.span(z);
                    if a < b && b < c && c < b2 && b2 < a2 && b2 < c2 {
                        let key = [a, b, c, b2, a2, c2];
                        if best.is_none_or(|k| key < k) {
                            best = Some(key);
                        }
                    }
                }
            }
        }
        best
    }

    #[test]
    fn k4_single_page_is_pattern_free() {
        let g = Graph::complete(4);
        assert_eq!(pattern_brute(&id(4), g.edges()), None);
        assert_eq!(find_pattern(&id(4), g.edges()), None);
    }

    #[test]
    fn k5_single_page_witness() {
        let g = Graph::complete(5);
        assert_eq!(pattern_brute(&id(5), g.edges()), Some([0, 1, 2, 3, 4, 4]));
        let w = find_pattern(&id(5), g.edges()).unwrap();
        assert_eq!(w.ea, (0, 4));
        assert_eq!(w.eb, (1, 3));
        assert_eq!(w.ec, (2, 4));
        assert!(w.holds(&id(5)));
    }

    #[test]
    fn empty_page() {
        assert_eq!(find_pattern(&id(3), &[]), None);
        assert!(page_is_stack(&id(3), &[]));
        assert!(page_is_queue(&id(3), &[]));
    }

    #[test]
    fn classification_examples() {
        let g = Graph::complete(4);
        let roles = classify_page(&id(4), g.edges()).unwrap();
        // (0,3) encloses (1,2) strictly; every other edge shares an endpoint
        // with any potential encloser.
        let expected: Vec<EdgeRole> = g
            .edges()
            .iter()
            .map(|&e| if e == Edge::new(1, 2) { EdgeRole::Head } else { EdgeRole::Tail })
            .collect();
        assert_eq!(roles, expected);

        let page = [Edge::new(0, 3), Edge::new(1, 2)];
        assert_eq!(
            classify_page(&id(4), &page).unwrap(),
            vec![EdgeRole::Tail, EdgeRole::Head]
        );
        assert_eq!(classify_page(&id(2), &[Edge::new(0, 1)]).unwrap(), vec![EdgeRole::Tail]);
        assert!(matches!(
            classify_page(&id(5), Graph::complete(5).edges()),
            Err(LayoutError::PatternPresent { .. })
        ));
    }

    #[test]
    fn k4_schedule() {
        let g = Graph::complete(4);
        let t = build_schedule(&id(4), &[g.edges().to_vec()]).unwrap();
        let page = &t.pages[0];
        let inserts = page
            .steps
            .iter()
            .flat_map(|s| &s.events)
            .filter(|e| matches!(e, ScheduleEvent::Insert(_)))
            .count();
        assert_eq!(inserts, 6);
        assert_eq!(page.steps.iter().map(|s| s.events.len()).sum::<usize>(), 12);
        // (0,2), (0,3), (1,2), (1,3) are all pending right after vertex 1.
        assert_eq!(page.max_size, 4);
        assert_eq!(page.replay(&id(4), g.edges()), Ok(4));
    }

    #[test]
    fn single_edge_schedule() {
        let e = Edge::new(0, 1);
        let t = build_schedule(&id(2), &[vec![e]]).unwrap();
        assert_eq!(
            t.pages[0].steps,
            vec![
                VertexStep { vertex: 0, events: vec![ScheduleEvent::Insert(e)] },
                VertexStep { vertex: 1, events: vec![ScheduleEvent::RemoveTail(e)] },
            ]
        );
    }

    #[test]
    fn replay_rejects_tampering() {
        let g = Graph::complete(4);
        let mut t = simulate_page(&id(4), g.edges()).unwrap();
        // Swap the ends of one removal.
        for step in &mut t.steps {
            for ev in &mut step.events {
                if let ScheduleEvent::RemoveHead(e) = *ev {
                    *ev = ScheduleEvent::RemoveTail(e);
                }
            }
        }
        assert!(t.replay(&id(4), g.edges()).is_err());
    }

    #[test]
    fn validation_reports() {
        let k5 = Graph::complete(5);
        let layout = LinearLayout::new(id(5), vec![k5.edges().to_vec()]);
        let report = validate_layout(&k5, &layout).unwrap();
        assert!(!report.valid);
        assert_eq!(report.pages[0].witness.unwrap().eb, (1, 3));
        assert!(report.to_text().contains("witness: <(0,4),(1,3),(2,4)>"));

        let single = LinearLayout::one_edge_per_page(&k5, id(5));
        assert!(validate_layout(&k5, &single).unwrap().valid);

        let broken = LinearLayout::new(id(5), vec![k5.edges()[1..].to_vec()]);
        assert_eq!(
            validate_layout(&k5, &broken),
            Err(LayoutError::EdgeMissing(Edge::new(0, 1)))
        );
    }

    #[test]
    fn stack_and_queue_pages() {
        let k4 = Graph::complete(4);
        assert!(!page_is_stack(&id(4), k4.edges()));
        assert!(!page_is_queue(&id(4), k4.edges()));
        let c4 = Graph::cycle(4);
        assert!(page_is_stack(&id(4), c4.edges()));
        assert!(!page_is_queue(&id(4), c4.edges()));
    }
}
