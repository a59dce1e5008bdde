//! Reproduction suite: one check per acceptance criterion, each returning a
//! pass flag and a one-line summary. Tolerances are the constants below.

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use rique_core::bounds::{construct_kn_layout, density_bound, kn_lower_bound, kn_upper_bound, table_kn};
use rique_core::bridge::{is_strongly_one_sided, order_to_embedding, HamPath};
use rique_core::corpus::{all_graphs, connected_planar_graphs, hamiltonian_paths, random_planar_graph};
use rique_core::layout::{find_pattern, page_is_queue, page_is_stack, simulate_page, validate_layout};
use rique_core::plane::plane_strongly_1sided_with;
use rique_core::planarity::planar_embedding;
use rique_core::search::{
    exact_rique_number, rique_number_sat, PageStatus, SatSolver, SolverRegistry, Symmetry, Verdict,
};
use rique_core::spqr::planar_strongly_1sided;
use rique_core::{Graph, LinearLayout, VertexOrder};

/// Wall-clock cap for each exact complete-graph run.
pub const EXACT_BUDGET: Duration = Duration::from_secs(5 * 60);
/// Wall-clock cap for the SAT sweep on `K_8`.
pub const SAT_BUDGET: Duration = Duration::from_secs(30 * 60);
/// Per-instance cap for the fixed-embedding tester.
pub const PLANE_INSTANCE_BUDGET: Duration = Duration::from_secs(1);
/// Minimum number of plane embeddings in the fixed-embedding corpus.
pub const MIN_EMBEDDINGS: usize = 500;
/// Number of random planar graphs on 8 or 9 vertices.
pub const RANDOM_PLANAR: usize = 200;
/// Total time allowed for building and validating `K_3 .. K_40`.
pub const CONSTRUCT_BUDGET: Duration = Duration::from_secs(10);

#[derive(Clone, Debug)]
pub struct Outcome {
    pub criterion: usize,
    pub pass: bool,
    pub detail: String,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "criterion {}: {tag} {}", self.criterion, self.detail)
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub jobs: usize,
    /// SAT backend name for the `K_8` sweep.
    pub solver: String,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            jobs: 1,
            solver: "embedded".into(),
        }
    }
}

fn outcome(criterion: usize, failures: &[String], summary: String) -> Outcome {
    let detail = match failures.first() {
        None => summary,
        Some(f) => format!("{summary}; {} failure(s), first: {f}", failures.len()),
    };
    Outcome {
        criterion,
        pass: failures.is_empty(),
        detail,
    }
}

fn pool(jobs: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool")
}

fn edges_of(g: &Graph) -> String {
    let pairs: Vec<String> = g.edges().iter().map(|e| format!("{} {}", e.u, e.v)).collect();
    format!("{}; {}", g.vertex_count(), pairs.join(","))
}

/// Complete graphs 4..7 by exhaustive search, `K_8` by a SAT sweep.
pub fn complete_graph_numbers(cfg: &SuiteConfig) -> (Outcome, Vec<(Graph, LinearLayout)>) {
    let mut failures = Vec::new();
    let mut layouts = Vec::new();
    let mut found = Vec::new();
    for (n, want) in [(4, 1), (5, 2), (6, 2), (7, 2)] {
        let g = Graph::complete(n);
        let start = Instant::now();
        match exact_rique_number(&g, n) {
            Ok((k, layout)) => {
                let took = start.elapsed();
                found.push(format!("K{n}={k}"));
                if k != want {
                    failures.push(format!("K{n}: got {k}, want {want}"));
                }
                if took > EXACT_BUDGET {
                    failures.push(format!("K{n}: {took:?} over budget"));
                }
                layouts.push((g, layout));
            }
            Err(e) => failures.push(format!("K{n}: {e}")),
        }
    }
    let g = Graph::complete(8);
    let solver = SolverRegistry::with_defaults().resolve(&cfg.solver);
    let start = Instant::now();
    match rique_number_sat(&g, solver.as_ref() as &dyn SatSolver, 2, 3, Some(SAT_BUDGET), Symmetry::None) {
        Ok(rep) => {
            let took = start.elapsed();
            found.push(format!("K8={} ({:.1}s)", rep.verdict, took.as_secs_f64()));
            let steps_ok = rep.steps == vec![(2, PageStatus::Unsat), (3, PageStatus::Sat)];
            if rep.verdict != Verdict::Exact(3) || !steps_ok {
                failures.push(format!("K8: verdict {} steps {:?}", rep.verdict, rep.steps));
            }
            if took > SAT_BUDGET {
                failures.push(format!("K8: {took:?} over budget"));
            }
            if let Some(l) = rep.layout {
                layouts.push((g, l));
            }
        }
        Err(e) => failures.push(format!("K8: {e}")),
    }
    (outcome(1, &failures, found.join(" ")), layouts)
}

fn all_orders(n: usize) -> Vec<Vec<usize>> {
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

/// Pattern-freeness of a single page agrees with schedule replay for every
/// graph on at most 5 vertices under every order.
pub fn pattern_schedule_equivalence() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for n in 1..=5 {
        let orders = all_orders(n);
        for g in all_graphs(n) {
            for seq in &orders {
                let order = VertexOrder::from_sequence(seq.clone()).expect("permutation");
                let free = find_pattern(&order, g.edges()).is_none();
                let replays = simulate_page(&order, g.edges())
                    .and_then(|t| t.replay(&order, g.edges()))
                    .is_ok();
                checked += 1;
                if free != replays {
                    failures.push(format!("{} order {seq:?}", edges_of(&g)));
                }
            }
        }
    }
    outcome(2, &failures, format!("{checked} (graph, order) pairs"))
}

/// Pattern-free spine-complete orders give plane embeddings with a
/// strongly one-sided spine, and one-sided Hamiltonian paths have
/// pattern-free orders.
pub fn embedding_round_trip() -> Outcome {
    let mut failures = Vec::new();
    let (mut forward, mut backward) = (0, 0);
    for n in 1..=6 {
        let orders = all_orders(n);
        for g in all_graphs(n) {
            for seq in &orders {
                if seq.windows(2).any(|w| !g.has_edge(w[0], w[1])) {
                    continue;
                }
                let order = VertexOrder::from_sequence(seq.clone()).expect("permutation");
                if find_pattern(&order, g.edges()).is_some() {
                    continue;
                }
                forward += 1;
                let ok = order_to_embedding(&g, &order).ok().is_some_and(|rot| {
                    let path = HamPath::new(&g, seq.clone()).expect("spine path");
                    rot.is_plane() && matches!(is_strongly_one_sided(&rot, &path), Ok(Some(_)))
                });
                if !ok {
                    failures.push(format!("forward {} order {seq:?}", edges_of(&g)));
                }
            }
            if let Some(rot) = planar_embedding(&g) {
                for p in hamiltonian_paths(&g) {
                    let path = HamPath::new(&g, p.clone()).expect("Hamiltonian path");
                    if matches!(is_strongly_one_sided(&rot, &path), Ok(Some(_))) {
                        backward += 1;
                        let order = VertexOrder::from_sequence(p.clone()).expect("permutation");
                        if find_pattern(&order, g.edges()).is_some() {
                            failures.push(format!("backward {} path {p:?}", edges_of(&g)));
                        }
                    }
                }
            }
        }
    }
    outcome(
        3,
        &failures,
        format!("{forward} pattern-free spine orders, {backward} one-sided paths"),
    )
}

/// Fixed-embedding tester against all Hamiltonian paths with the side
/// predicate, on one embedding of every connected planar graph up to 7
/// vertices.
pub fn plane_oracle(cfg: &SuiteConfig) -> Outcome {
    let graphs: Vec<Graph> = (1..=7).flat_map(connected_planar_graphs).collect();
    let results: Vec<Result<Duration, String>> = pool(cfg.jobs).install(|| {
        graphs
            .par_iter()
            .map(|g| {
                let rot = planar_embedding(g).expect("planar");
                let start = Instant::now();
                let res = plane_strongly_1sided_with(&rot, false).map_err(|e| e.to_string())?;
                let took = start.elapsed();
                let want = hamiltonian_paths(g).into_iter().any(|p| {
                    let path = HamPath::new(g, p).expect("Hamiltonian path");
                    matches!(is_strongly_one_sided(&rot, &path), Ok(Some(_)))
                });
                if res.path.is_some() != want {
                    return Err(format!("{}: tester {} oracle {want}", edges_of(g), res.path.is_some()));
                }
                if let Some(p) = &res.path {
                    if !matches!(is_strongly_one_sided(&rot, p), Ok(Some(_))) {
                        return Err(format!("{}: witness does not verify", edges_of(g)));
                    }
                }
                if res.max_steps > 2 * g.edge_count().max(1) {
                    return Err(format!("{}: {} scan steps", edges_of(g), res.max_steps));
                }
                if took > PLANE_INSTANCE_BUDGET {
                    return Err(format!("{}: {took:?}", edges_of(g)));
                }
                Ok(took)
            })
            .collect()
    });
    let mut failures: Vec<String> = results.iter().filter_map(|r| r.as_ref().err().cloned()).collect();
    if graphs.len() < MIN_EMBEDDINGS {
        failures.push(format!("only {} embeddings", graphs.len()));
    }
    let slowest = results.iter().filter_map(|r| r.as_ref().ok()).max().copied().unwrap_or_default();
    outcome(
        4,
        &failures,
        format!("{} embeddings, slowest {:.3} ms", graphs.len(), slowest.as_secs_f64() * 1e3),
    )
}

fn dp_check(g: &Graph) -> Result<(), String> {
    let want = hamiltonian_paths(g).into_iter().any(|p| {
        let order = VertexOrder::from_sequence(p).expect("permutation");
        find_pattern(&order, g.edges()).is_none()
    });
    let got = planar_strongly_1sided(g).map_err(|e| e.to_string())?;
    if got.is_some() != want {
        return Err(format!("{}: dp {} oracle {want}", edges_of(g), got.is_some()));
    }
    if let Some(w) = got {
        let ok = w.rotation.graph() == *g
            && w.rotation.is_plane()
            && matches!(is_strongly_one_sided(&w.rotation, &w.path), Ok(Some(_)));
        if !ok {
            return Err(format!("{}: witness does not verify", edges_of(g)));
        }
    }
    Ok(())
}

/// Embedding-free tester against the pattern-free Hamiltonian order oracle.
pub fn planar_oracle(cfg: &SuiteConfig) -> Outcome {
    let mut graphs: Vec<Graph> = (1..=7).flat_map(connected_planar_graphs).collect();
    let exhaustive = graphs.len();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    graphs.extend((0..RANDOM_PLANAR).map(|i| random_planar_graph(8 + i % 2, &mut rng)));
    let failures: Vec<String> = pool(cfg.jobs).install(|| {
        graphs
            .par_iter()
            .filter_map(|g| dp_check(g).err())
            .collect()
    });
    outcome(
        5,
        &failures,
        format!("{exhaustive} exhaustive + {RANDOM_PLANAR} random planar graphs"),
    )
}

/// Edge counts of valid layouts against the density bound, and the exact
/// one-page value `3n - 6`.
pub fn density(layouts: &[(Graph, LinearLayout)]) -> Outcome {
    let mut failures = Vec::new();
    let mut pool: Vec<(Graph, LinearLayout)> = layouts.to_vec();
    for n in 1..=5 {
        for g in all_graphs(n) {
            if let Ok((_, l)) = exact_rique_number(&g, n) {
                pool.push((g, l));
            }
        }
    }
    for n in 3..=40 {
        pool.push((Graph::complete(n), construct_kn_layout(n)));
    }
    let mut valid = 0;
    for (g, l) in &pool {
        if !validate_layout(g, l).is_ok_and(|r| r.valid) {
            failures.push(format!("{}: layout invalid", edges_of(g)));
            continue;
        }
        valid += 1;
        let k = l.pages.iter().filter(|p| !p.is_empty()).count();
        let m = g.edge_count() as i64;
        // The bound only covers n >= 3: K_2 has one edge but bound 0.
        if k > 0 && g.vertex_count() >= 3 && m > density_bound(g.vertex_count(), k) {
            failures.push(format!("{}: {m} edges on {k} pages", edges_of(g)));
        }
    }
    for n in 3..=100 {
        if density_bound(n, 1) != 3 * n as i64 - 6 {
            failures.push(format!("density_bound({n}, 1) = {}", density_bound(n, 1)));
        }
    }
    outcome(6, &failures, format!("{valid} layouts, n = 3..100 one-page values"))
}

/// `ceil(n/3)`-page construction for `K_3 .. K_40` and the lower bound
/// against the table.
pub fn complete_graph_bounds() -> Outcome {
    let mut failures = Vec::new();
    let start = Instant::now();
    for n in 3..=40 {
        let l = construct_kn_layout(n);
        let valid = validate_layout(&Graph::complete(n), &l).is_ok_and(|r| r.valid);
        if !valid || l.page_count() != kn_upper_bound(n) {
            failures.push(format!("K{n}: valid {valid}, {} pages", l.page_count()));
        }
    }
    let took = start.elapsed();
    if took > CONSTRUCT_BUDGET {
        failures.push(format!("construction took {took:?}"));
    }
    let mut exact_cells = 0;
    for n in 4..=28 {
        if let Ok(Verdict::Exact(k)) = table_kn(n) {
            exact_cells += 1;
            let lb = kn_lower_bound(n).tight_ceil;
            if lb > k {
                failures.push(format!("K{n}: lower bound {lb} above table {k}"));
            }
        }
    }
    outcome(
        7,
        &failures,
        format!("K3..K40 in {:.2}s, {exact_cells} exact table cells", took.as_secs_f64()),
    )
}

/// `K_4` on one page in natural order is neither a stack nor a queue page;
/// `K_6` needs two pages.
pub fn one_page_witnesses() -> Outcome {
    let mut failures = Vec::new();
    let g = Graph::complete(4);
    let order = VertexOrder::identity(4);
    let l = LinearLayout::new(order.clone(), vec![g.edges().to_vec()]);
    if !validate_layout(&g, &l).is_ok_and(|r| r.valid) {
        failures.push("K4 one-page layout invalid".into());
    }
    if page_is_stack(&order, g.edges()) || page_is_queue(&order, g.edges()) {
        failures.push("K4 page is a stack or queue page".into());
    }
    match exact_rique_number(&Graph::complete(6), 6) {
        Ok((k, _)) if k >= 2 => {}
        Ok((k, _)) => failures.push(format!("K6 found on {k} page(s)")),
        Err(e) => failures.push(format!("K6: {e}")),
    }
    outcome(8, &failures, "K4 page neither stack nor queue, K6 has no one-page layout".into())
}

/// Runs one criterion by number.
pub fn run(criterion: usize, cfg: &SuiteConfig) -> Option<Outcome> {
    Some(match criterion {
        1 => complete_graph_numbers(cfg).0,
        2 => pattern_schedule_equivalence(),
        3 => embedding_round_trip(),
        4 => plane_oracle(cfg),
        5 => planar_oracle(cfg),
        6 => density(&complete_graph_numbers_layouts()),
        7 => complete_graph_bounds(),
        8 => one_page_witnesses(),
        _ => return None,
    })
}

fn complete_graph_numbers_layouts() -> Vec<(Graph, LinearLayout)> {
    (4..=7)
        .filter_map(|n| exact_rique_number(&Graph::complete(n), n).ok().map(|(_, l)| (Graph::complete(n), l)))
        .collect()
}

/// Every criterion in order; layouts from the first feed the density check.
pub fn run_all(cfg: &SuiteConfig) -> Vec<Outcome> {
    let (first, layouts) = complete_graph_numbers(cfg);
    vec![
        first,
        pattern_schedule_equivalence(),
        embedding_round_trip(),
        plane_oracle(cfg),
        planar_oracle(cfg),
        density(&layouts),
        complete_graph_bounds(),
        one_page_witnesses(),
    ]
}
