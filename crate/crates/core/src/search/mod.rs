//! Rique-number computation.
//!
//! Two strategies sit behind [`RiqueNumberStrategy`]: an exhaustive
//! branch-and-bound search ([`exact`]) and the SAT formulation ([`sat`])
//! solved by any backend from [`solver`]. Strategies are looked up by name
//! in a [`StrategyRegistry`].

pub mod exact;
pub mod sat;
pub mod solver;

use std::collections::BTreeMap;
use std::fmt;
use std::time::Duration;

use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;
use crate::layout::LinearLayout;

pub use exact::{exact_rique_number, exact_rique_number_with, ExactOptions};
pub use sat::{decode_model, encode_sat, encode_sat_with, rique_number_sat, Cnf, SatEncoding, Symmetry};
pub use solver::{SatModel, SatOutcome, SatSolver, SolverError, SolverRegistry};

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("graph has {n} vertices, above the search limit of {limit}")]
    VertexLimit { n: usize, limit: usize },
    #[error("symmetry option {0} needs a complete graph")]
    SymmetryNotApplicable(Symmetry),
    #[error("empty page range {kmin}..={kmax}")]
    EmptyRange { kmin: usize, kmax: usize },
    #[error("model does not decode: {0}")]
    Decode(String),
    #[error("decoded layout is invalid: {0}")]
    InvalidWitness(String),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("unknown strategy {0:?}")]
    UnknownStrategy(String),
}

/// What is known about the rique-number after a search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Exact(usize),
    /// Lies in `lo..=hi`; some page counts in the range were not decided.
    Range(usize, usize),
    /// Every page count up to `kmax` was refuted.
    AtLeast(usize),
    /// Nothing satisfiable found and some page counts undecided.
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Exact(k) => write!(f, "{k}"),
            Verdict::Range(lo, hi) => write!(f, "[{lo},{hi}]"),
            Verdict::AtLeast(k) => write!(f, ">={k}"),
            Verdict::Unknown => f.write_str("unknown"),
        }
    }
}

/// Status of one page count in a SAT sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PageStatus {
    Sat,
    Unsat,
    Timeout,
}

#[derive(Clone, Debug, Serialize)]
pub struct RiqueNumberReport {
    pub verdict: Verdict,
    pub layout: Option<LinearLayout>,
    /// Per page count tried, in order (empty for the exact search).
    pub steps: Vec<(usize, PageStatus)>,
}

/// Knobs shared by all strategies; each strategy reads the ones it needs.
#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub limit: usize,
    pub jobs: usize,
    pub kmin: usize,
    pub kmax: Option<usize>,
    pub timeout: Option<Duration>,
    pub symmetry: Symmetry,
    pub solver: String,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            limit: exact::DEFAULT_LIMIT,
            jobs: 1,
            kmin: 1,
            kmax: None,
            timeout: None,
            symmetry: Symmetry::None,
            solver: solver::EMBEDDED.to_string(),
        }
    }
}

pub trait RiqueNumberStrategy: Send + Sync {
    fn name(&self) -> &'static str;
    fn compute(&self, g: &Graph, cfg: &SearchConfig) -> Result<RiqueNumberReport, SearchError>;
}

pub struct ExactStrategy;

impl RiqueNumberStrategy for ExactStrategy {
    fn name(&self) -> &'static str {
        "exact"
    }

    fn compute(&self, g: &Graph, cfg: &SearchConfig) -> Result<RiqueNumberReport, SearchError> {
        let opts = ExactOptions {
            limit: cfg.limit,
            jobs: cfg.jobs,
        };
        let (k, layout) = exact_rique_number_with(g, &opts)?;
        Ok(RiqueNumberReport {
            verdict: Verdict::Exact(k),
            layout: Some(layout),
            steps: Vec::new(),
        })
    }
}

pub struct SatStrategy {
    solvers: SolverRegistry,
}

impl SatStrategy {
    pub fn new(solvers: SolverRegistry) -> Self {
        SatStrategy { solvers }
    }
}

impl RiqueNumberStrategy for SatStrategy {
    fn name(&self) -> &'static str {
        "sat"
    }

    fn compute(&self, g: &Graph, cfg: &SearchConfig) -> Result<RiqueNumberReport, SearchError> {
        let solver = self.solvers.resolve(&cfg.solver);
        let kmax = cfg.kmax.unwrap_or_else(|| g.edge_count().max(1));
        rique_number_sat(g, solver.as_ref(), cfg.kmin, kmax, cfg.timeout, cfg.symmetry)
    }
}

/// Name-indexed set of rique-number strategies.
pub struct StrategyRegistry {
    strategies: BTreeMap<&'static str, Box<dyn RiqueNumberStrategy>>,
}

impl StrategyRegistry {
    pub fn empty() -> Self {
        StrategyRegistry {
            strategies: BTreeMap::new(),
        }
    }

    /// Registry holding `exact` and `sat`.
    pub fn with_defaults() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(ExactStrategy));
        r.register(Box::new(SatStrategy::new(SolverRegistry::with_defaults())));
        r
    }

    pub fn register(&mut self, s: Box<dyn RiqueNumberStrategy>) {
        self.strategies.insert(s.name(), s);
    }

    pub fn get(&self, name: &str) -> Result<&dyn RiqueNumberStrategy, SearchError> {
        self.strategies
            .get(name)
            .map(|b| b.as_ref())
            .ok_or_else(|| SearchError::UnknownStrategy(name.to_string()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.strategies.keys().copied().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_lookup() {
        let r = StrategyRegistry::with_defaults();
        assert_eq!(r.names(), vec!["exact", "sat"]);
        assert!(r.get("nope").is_err());
        let cfg = SearchConfig::default();
        for name in ["exact", "sat"] {
            let rep = r.get(name).unwrap().compute(&Graph::complete(4), &cfg).unwrap();
            assert_eq!(rep.verdict, Verdict::Exact(1), "{name}");
        }
    }

    #[test]
    fn verdict_display() {
        assert_eq!(Verdict::Range(6, 7).to_string(), "[6,7]");
        assert_eq!(Verdict::Exact(3).to_string(), "3");
    }
}
