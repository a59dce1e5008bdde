//! SAT formulation of "g has a p-page rique layout".
//!
//! Variables:
//! * `sigma(u,v)` for `u < v`: `u` is left of `v`; `sigma(v,u)` is its negation.
//! * `phi_i(e)`: edge `e` is on page `i`.
//! * `chi(e,f)` for `e < f`: `e` and `f` share a page.
//!
//! Clauses: acyclicity of the order over every vertex triple, every edge on
//! some page, `phi_i(e) & phi_i(f) -> chi(e,f)`, and for each ordered edge
//! triple and orientation that could realize the forbidden pattern, the
//! negation of "pattern positions and all three edges share a page".

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use serde::Serialize;

use super::solver::{SatModel, SatOutcome, SatSolver};
use super::{PageStatus, RiqueNumberReport, SearchError, Verdict};
use crate::graph::{Edge, Graph};
use crate::layout::{validate_layout, LinearLayout, VertexOrder};

/// CNF formula with named variables (1-based, DIMACS style).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
    /// `names[i]` names variable `i + 1`; empty when parsed from DIMACS.
    pub names: Vec<String>,
}

impl Cnf {
    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                s.push_str(&l.to_string());
                s.push(' ');
            }
            s.push_str("0\n");
        }
        s
    }

    /// One `name index` line per variable.
    pub fn varmap(&self) -> String {
        let mut s = String::new();
        for (i, name) in self.names.iter().enumerate() {
            s.push_str(&format!("{name} {}\n", i + 1));
        }
        s
    }

    pub fn from_dimacs(text: &str) -> Result<Cnf, String> {
        let mut num_vars = None;
        let mut declared = 0;
        let mut clauses = Vec::new();
        let mut cur = Vec::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
                continue;
            }
            if let Some(rest) = line.strip_prefix('p') {
                let toks: Vec<&str> = rest.split_whitespace().collect();
                match toks.as_slice() {
                    ["cnf", v, c] => {
                        num_vars = Some(v.parse().map_err(|_| format!("line {}: bad header", no + 1))?);
                        declared = c.parse().map_err(|_| format!("line {}: bad header", no + 1))?;
                    }
                    _ => return Err(format!("line {}: bad header", no + 1)),
                }
                continue;
            }
            let nv = num_vars.ok_or_else(|| format!("line {}: clause before header", no + 1))?;
            for tok in line.split_whitespace() {
                let l: i32 = tok.parse().map_err(|_| format!("line {}: bad literal {tok:?}", no + 1))?;
                if l == 0 {
                    clauses.push(std::mem::take(&mut cur));
                } else if l.unsigned_abs() as usize > nv {
                    return Err(format!("line {}: literal {l} exceeds {nv} variables", no + 1));
                } else {
                    cur.push(l);
                }
            }
        }
        if !cur.is_empty() {
            clauses.push(cur);
        }
        let num_vars = num_vars.ok_or("missing header")?;
        if clauses.len() != declared {
            return Err(format!("header declares {declared} clauses, found {}", clauses.len()));
        }
        Ok(Cnf {
            num_vars,
            clauses,
            names: Vec::new(),
        })
    }
}

/// Optional symmetry breaking; both variants need a complete graph.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum Symmetry {
    #[default]
    None,
    /// Vertex 0 is leftmost.
    FirstVertex,
    /// The whole order is the identity.
    Order,
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Symmetry::None => "none",
            Symmetry::FirstVertex => "first-vertex",
            Symmetry::Order => "order",
        })
    }
}

impl FromStr for Symmetry {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "none" => Ok(Symmetry::None),
            "first-vertex" => Ok(Symmetry::FirstVertex),
            "order" => Ok(Symmetry::Order),
            _ => Err(format!("unknown symmetry {s:?} (none, first-vertex, order)")),
        }
    }
}

/// Encoding together with the variable layout needed to decode models.
#[derive(Clone, Debug)]
pub struct SatEncoding {
    pub cnf: Cnf,
    pub n: usize,
    pub pages: usize,
    pub edges: Vec<Edge>,
    pub symmetry: Symmetry,
}

fn pair_rank(i: usize, j: usize, n: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

impl SatEncoding {
    pub fn sigma_count(&self) -> usize {
        self.n * self.n.saturating_sub(1) / 2
    }

    pub fn phi_count(&self) -> usize {
        self.pages * self.edges.len()
    }

    pub fn chi_count(&self) -> usize {
        let m = self.edges.len();
        m * m.saturating_sub(1) / 2
    }

    /// Literal for "`a` is left of `b`".
    pub fn sigma(&self, a: usize, b: usize) -> i32 {
        assert_ne!(a, b);
        if a < b {
            (1 + pair_rank(a, b, self.n)) as i32
        } else {
            -((1 + pair_rank(b, a, self.n)) as i32)
        }
    }

    /// Variable for "edge index `j` is on page `i`".
    pub fn phi(&self, i: usize, j: usize) -> i32 {
        (1 + self.sigma_count() + i * self.edges.len() + j) as i32
    }

    /// Variable for "edge indices `j` and `k` share a page".
    pub fn chi(&self, j: usize, k: usize) -> i32 {
        let (a, b) = if j < k { (j, k) } else { (k, j) };
        (1 + self.sigma_count() + self.phi_count() + pair_rank(a, b, self.edges.len())) as i32
    }
}

/// Encoding without symmetry breaking.
pub fn encode_sat(g: &Graph, p: usize) -> SatEncoding {
    encode_sat_with(g, p, Symmetry::None).expect("no symmetry always applies")
}

pub fn encode_sat_with(g: &Graph, p: usize, symmetry: Symmetry) -> Result<SatEncoding, SearchError> {
    assert!(p >= 1, "page count must be positive");
    if symmetry != Symmetry::None && !g.is_complete() {
        return Err(SearchError::SymmetryNotApplicable(symmetry));
    }
    let n = g.vertex_count();
    let edges = g.edges().to_vec();
    let m = edges.len();
    let mut enc = SatEncoding {
        cnf: Cnf::default(),
        n,
        pages: p,
        edges: edges.clone(),
        symmetry,
    };
    let num_vars = enc.sigma_count() + enc.phi_count() + enc.chi_count();
    let mut names = Vec::with_capacity(num_vars);
    for u in 0..n {
        for v in u + 1..n {
            names.push(format!("sigma({u},{v})"));
        }
    }
    for i in 0..p {
        for e in &edges {
            names.push(format!("phi_{}({},{})", i + 1, e.u, e.v));
        }
    }
    for j in 0..m {
        for k in j + 1..m {
            let (e, f) = (edges[j], edges[k]);
            names.push(format!("chi(({},{}),({},{}))", e.u, e.v, f.u, f.v));
        }
    }
    let mut clauses: Vec<Vec<i32>> = Vec::new();

    // Order.
    match symmetry {
        Symmetry::Order => {
            for u in 0..n {
                for v in u + 1..n {
                    clauses.push(vec![enc.sigma(u, v)]);
                }
            }
        }
        _ => {
            if symmetry == Symmetry::FirstVertex {
                for v in 1..n {
                    clauses.push(vec![enc.sigma(0, v)]);
                }
            }
            // One clause per cyclic direction of each triple.
            for x in 0..n {
                for y in x + 1..n {
                    for z in y + 1..n {
                        clauses.push(vec![-enc.sigma(x, y), -enc.sigma(y, z), enc.sigma(x, z)]);
                        clauses.push(vec![-enc.sigma(x, z), -enc.sigma(z, y), enc.sigma(x, y)]);
                    }
                }
            }
        }
    }

    // Coverage and linking.
    for j in 0..m {
        clauses.push((0..p).map(|i| enc.phi(i, j)).collect());
    }
    for i in 0..p {
        for j in 0..m {
            for k in j + 1..m {
                clauses.push(vec![-enc.phi(i, j), -enc.phi(i, k), enc.chi(j, k)]);
            }
        }
    }

    // Forbidden pattern.
    let ends = |e: Edge, flip: bool| if flip { (e.v, e.u) } else { (e.u, e.v) };
    let mut seen_short: HashSet<[i32; 3]> = HashSet::new();
    for ia in 0..m {
        for ib in 0..m {
            if ib == ia {
                continue;
            }
            for ic in 0..m {
                if ic == ia || ic == ib {
                    continue;
                }
                for bits in 0..8u8 {
                    let (a, a2) = ends(edges[ia], bits & 1 != 0);
                    let (b, b2) = ends(edges[ib], bits & 2 != 0);
                    let (c, c2) = ends(edges[ic], bits & 4 != 0);
                    let core = [a, b, c, b2];
                    let distinct = (0..4).all(|x| (x + 1..4).all(|y| core[x] != core[y]));
                    if !distinct || core.contains(&a2) || core.contains(&c2) {
                        continue;
                    }
                    let chis = [-enc.chi(ia, ib), -enc.chi(ib, ic), -enc.chi(ia, ic)];
                    if symmetry == Symmetry::Order {
                        let holds = a < b && b < c && c < b2 && b2 < a2 && b2 < c2;
                        if holds && seen_short.insert(chis) {
                            clauses.push(chis.to_vec());
                        }
                        continue;
                    }
                    let mut cl = vec![
                        -enc.sigma(a, b),
                        -enc.sigma(b, c),
                        -enc.sigma(c, b2),
                        -enc.sigma(b2, a2),
                        -enc.sigma(b2, c2),
                    ];
                    cl.extend(chis);
                    clauses.push(cl);
                }
            }
        }
    }
    debug_assert!(clauses.iter().all(|c| !c.is_empty()));
    enc.cnf = Cnf {
        num_vars,
        clauses,
        names,
    };
    Ok(enc)
}

/// Reads the order (position of `v` = number of vertices left of it) and puts
/// each edge on its lowest true page.
pub fn decode_model(enc: &SatEncoding, model: &SatModel) -> Result<LinearLayout, SearchError> {
    let n = enc.n;
    let lit = |l: i32| {
        let val = model.value(l.unsigned_abs() as usize);
        if l > 0 { val } else { !val }
    };
    let mut seq = vec![usize::MAX; n];
    for v in 0..n {
        let pos = (0..n).filter(|&u| u != v && lit(enc.sigma(u, v))).count();
        if seq[pos] != usize::MAX {
            return Err(SearchError::Decode(format!(
                "vertices {} and {v} share position {pos}",
                seq[pos]
            )));
        }
        seq[pos] = v;
    }
    let order = VertexOrder::from_sequence(seq).map_err(|e| SearchError::Decode(e.to_string()))?;
    let mut pages: Vec<Vec<Edge>> = vec![Vec::new(); enc.pages];
    for (j, &e) in enc.edges.iter().enumerate() {
        let i = (0..enc.pages)
            .find(|&i| lit(enc.phi(i, j)))
            .ok_or_else(|| SearchError::Decode(format!("edge {e:?} is on no page")))?;
        pages[i].push(e);
    }
    Ok(LinearLayout::new(order, pages))
}

/// Solves `p = kmin, kmin+1, ...` until the first satisfiable page count.
/// A timed-out page count makes the answer a range.
pub fn rique_number_sat(
    g: &Graph,
    solver: &dyn SatSolver,
    kmin: usize,
    kmax: usize,
    timeout: Option<Duration>,
    symmetry: Symmetry,
) -> Result<RiqueNumberReport, SearchError> {
    let kmin = kmin.max(1);
    if kmin > kmax {
        return Err(SearchError::EmptyRange { kmin, kmax });
    }
    if g.edge_count() == 0 {
        return Ok(RiqueNumberReport {
            verdict: Verdict::Exact(0),
            layout: Some(LinearLayout::new(VertexOrder::identity(g.vertex_count()), Vec::new())),
            steps: Vec::new(),
        });
    }
    let mut steps = Vec::new();
    for p in kmin..=kmax {
        let enc = encode_sat_with(g, p, symmetry)?;
        match solver.solve(&enc.cnf, timeout)? {
            SatOutcome::Sat(model) => {
                steps.push((p, PageStatus::Sat));
                let layout = decode_model(&enc, &model)?;
                let report = validate_layout(g, &layout)
                    .map_err(|e| SearchError::InvalidWitness(e.to_string()))?;
                if !report.valid {
                    return Err(SearchError::InvalidWitness(report.to_text()));
                }
                let first_timeout = steps.iter().find(|(_, s)| *s == PageStatus::Timeout).map(|s| s.0);
                let verdict = match first_timeout {
                    Some(lo) => Verdict::Range(lo, p),
                    None => Verdict::Exact(p),
                };
                return Ok(RiqueNumberReport {
                    verdict,
                    layout: Some(layout),
                    steps,
                });
            }
            SatOutcome::Unsat => steps.push((p, PageStatus::Unsat)),
            SatOutcome::Timeout => steps.push((p, PageStatus::Timeout)),
        }
    }
    let verdict = if steps.iter().all(|(_, s)| *s == PageStatus::Unsat) {
        Verdict::AtLeast(kmax + 1)
    } else {
        Verdict::Unknown
    };
    Ok(RiqueNumberReport {
        verdict,
        layout: None,
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::super::solver::EmbeddedSolver;
    use super::*;

    fn solve(g: &Graph, p: usize, sym: Symmetry) -> Option<LinearLayout> {
        let enc = encode_sat_with(g, p, sym).unwrap();
        match EmbeddedSolver.solve(&enc.cnf, None).unwrap() {
            SatOutcome::Sat(m) => Some(decode_model(&enc, &m).unwrap()),
            SatOutcome::Unsat => None,
            SatOutcome::Timeout => panic!("no timeout set"),
        }
    }

    #[test]
    fn k4_counts() {
        let enc = encode_sat(&Graph::complete(4), 1);
        assert_eq!((enc.sigma_count(), enc.phi_count(), enc.chi_count()), (6, 6, 15));
        assert_eq!(enc.cnf.num_vars, 27);
        assert_eq!(enc.cnf.names.len(), 27);
        assert_eq!(enc.cnf.names[0], "sigma(0,1)");
        assert_eq!(enc.cnf.names[6], "phi_1(0,1)");
        let l = solve(&Graph::complete(4), 1, Symmetry::None).unwrap();
        assert!(validate_layout(&Graph::complete(4), &l).unwrap().valid);
    }

    #[test]
    fn k5_one_page_is_unsat() {
        for sym in [Symmetry::None, Symmetry::FirstVertex, Symmetry::Order] {
            assert!(solve(&Graph::complete(5), 1, sym).is_none(), "{sym}");
            assert!(solve(&Graph::complete(5), 2, sym).is_some(), "{sym}");
        }
    }

    #[test]
    fn single_edge() {
        let g = Graph::path(2);
        let l = solve(&g, 1, Symmetry::None).unwrap();
        assert_eq!(l.pages, vec![vec![Edge::new(0, 1)]]);
    }

    #[test]
    fn sigma_is_antisymmetric() {
        let enc = encode_sat(&Graph::complete(5), 1);
        for u in 0..5 {
            for v in 0..5 {
                if u != v {
                    assert_eq!(enc.sigma(u, v), -enc.sigma(v, u));
                }
            }
        }
    }

    #[test]
    fn symmetry_needs_clique() {
        assert!(encode_sat_with(&Graph::cycle(4), 1, Symmetry::FirstVertex).is_err());
    }

    #[test]
    fn dimacs_round_trip() {
        let enc = encode_sat(&Graph::complete(4), 1);
        let back = Cnf::from_dimacs(&enc.cnf.to_dimacs()).unwrap();
        assert_eq!(back.clauses, enc.cnf.clauses);
        assert_eq!(back.num_vars, enc.cnf.num_vars);
        assert!(Cnf::from_dimacs("p cnf 1 1\n2 0\n").is_err());
        assert!(Cnf::from_dimacs("1 0\n").is_err());
        assert!(enc.cnf.varmap().lines().count() == 27);
    }

    #[test]
    fn sweep_reports_exact_and_refuted() {
        let r = rique_number_sat(&Graph::complete(5), &EmbeddedSolver, 1, 3, None, Symmetry::None)
            .unwrap();
        assert_eq!(r.verdict, Verdict::Exact(2));
        assert_eq!(r.steps, vec![(1, PageStatus::Unsat), (2, PageStatus::Sat)]);
        let r = rique_number_sat(&Graph::complete(5), &EmbeddedSolver, 1, 1, None, Symmetry::None)
            .unwrap();
        assert_eq!(r.verdict, Verdict::AtLeast(2));
    }
}
