use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::json;

use rique_cli::suite::{self, SuiteConfig};
use rique_core::bounds::{
    arc_diagram_svg, construct_kn_layout, density_bound, density_bound_as_stated, kn_lower_bound, kn_upper_bound,
    table_kn,
};
use rique_core::bridge::{one_sided_in, HamPath, Side};
use rique_core::formats::{parse_graph, parse_layout, parse_rotation, serialize_layout, serialize_path, serialize_rotation};
use rique_core::layout::validate_layout;
use rique_core::plane::{greedy_walk, plane_strongly_1sided_with};
use rique_core::search::{encode_sat_with, SearchConfig, StrategyRegistry, Symmetry, Verdict};
use rique_core::spqr::{planar_strongly_1sided_with, st_one_sided};
use rique_core::{Graph, LinearLayout, RotationSystem};

/// Restricted-input-queue layouts: validation, rique-numbers, one-sided
/// Hamiltonian paths, bounds.
#[derive(Parser)]
#[command(name = "rique", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a layout against a graph.
    Validate {
        graph: PathBuf,
        layout: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Compute the rique-number.
    Riquenumber {
        graph: PathBuf,
        /// Exhaustive search (the default).
        #[arg(long, conflicts_with = "sat")]
        exact: bool,
        /// SAT sweep; optional solver name or command (defaults to RIQUE_SOLVER, then "embedded").
        #[arg(long, num_args = 0..=1, default_missing_value = "")]
        sat: Option<String>,
        #[arg(long, default_value_t = 1)]
        kmin: usize,
        #[arg(long)]
        kmax: Option<usize>,
        /// Per page count, e.g. 60, 60s, 500ms, 2m.
        #[arg(long, value_parser = parse_timeout)]
        timeout: Option<Duration>,
        #[arg(long, default_value = "none")]
        symmetry: Symmetry,
        /// Vertex limit for the exhaustive search.
        #[arg(long, default_value_t = rique_core::search::exact::DEFAULT_LIMIT)]
        limit: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Write the witness layout here instead of printing it.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Strongly one-sided Hamiltonian path, in a given embedding or over all
    /// planar embeddings.
    Onesided {
        graph: PathBuf,
        /// Fixed rotation system (one line per vertex).
        #[arg(long)]
        embedding: Option<PathBuf>,
        /// Fix both ends of the path.
        #[arg(long, num_args = 2, value_names = ["S", "T"])]
        st: Option<Vec<usize>>,
        /// Only the given rotations, not their mirror image.
        #[arg(long)]
        left_only: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Write the one-page layout in path order here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Density and complete-graph bounds.
    Bounds {
        n: usize,
        k: Option<usize>,
        /// Use the alternative density formula.
        #[arg(long)]
        as_stated: bool,
        #[arg(long)]
        json: bool,
    },
    /// Layout of K_n on ceil(n/3) pages.
    ConstructKn {
        n: usize,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the CNF for a page count in DIMACS format.
    Encode {
        graph: PathBuf,
        pages: usize,
        #[arg(long, default_value = "none")]
        symmetry: Symmetry,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the variable names here.
        #[arg(long)]
        varmap: Option<PathBuf>,
    },
    /// Reference rique-numbers of complete graphs with the bounds.
    Table {
        #[arg(long)]
        json: bool,
    },
    /// Run the reproduction suite.
    Reproduce {
        /// Only this criterion (1-8).
        #[arg(long)]
        criterion: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, env = "RIQUE_SOLVER", default_value = "embedded")]
        solver: String,
    },
}

fn parse_timeout(s: &str) -> Result<Duration, String> {
    if let Ok(secs) = s.parse::<f64>() {
        if secs >= 0.0 && secs.is_finite() {
            return Ok(Duration::from_secs_f64(secs));
        }
    }
    humantime::parse_duration(s).map_err(|e| e.to_string())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_graph(path: &Path) -> Result<Graph> {
    parse_graph(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn flag(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn validate(graph: &Path, layout: &Path, as_json: bool) -> Result<ExitCode> {
    let g = load_graph(graph)?;
    let l = parse_layout(&read(layout)?).with_context(|| format!("parsing {}", layout.display()))?;
    match validate_layout(&g, &l) {
        Ok(report) => {
            if as_json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print!("{}", report.to_text());
            }
            Ok(flag(report.valid))
        }
        Err(e) => {
            if as_json {
                println!("{}", json!({"valid": false, "error": e.to_string()}));
            } else {
                println!("valid: false\nerror: {e}");
            }
            Ok(ExitCode::from(1))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn riquenumber(
    graph: &Path,
    sat: Option<String>,
    cfg: SearchConfig,
    out: &Option<PathBuf>,
    as_json: bool,
) -> Result<ExitCode> {
    let g = load_graph(graph)?;
    let registry = StrategyRegistry::with_defaults();
    let (name, cfg) = match sat {
        None => ("exact", cfg),
        Some(s) => {
            let solver = if s.is_empty() {
                std::env::var("RIQUE_SOLVER").unwrap_or_else(|_| "embedded".into())
            } else {
                s
            };
            ("sat", SearchConfig { solver, ..cfg })
        }
    };
    let report = registry.get(name)?.compute(&g, &cfg)?;
    let layout_text = report.layout.as_ref().map(serialize_layout);
    if as_json {
        println!("{}", serde_json::to_string_pretty(&json!({
            "verdict": report.verdict.to_string(),
            "steps": report.steps.iter().map(|(p, s)| json!({"pages": p, "status": format!("{s:?}").to_lowercase()})).collect::<Vec<_>>(),
            "layout": layout_text,
        }))?);
        if let (Some(p), Some(t)) = (out, &layout_text) {
            fs::write(p, t)?;
        }
    } else {
        println!("rique-number: {}", report.verdict);
        for (p, s) in &report.steps {
            println!("pages {p}: {}", format!("{s:?}").to_lowercase());
        }
        if let Some(t) = &layout_text {
            emit(out, t)?;
        }
    }
    Ok(flag(matches!(report.verdict, Verdict::Exact(_) | Verdict::Range(..))))
}

/// Fixed embedding, fixed ends: the greedy walk from every edge at `s`.
fn plane_st(rot: &RotationSystem, s: usize, t: usize, left_only: bool) -> Option<(Vec<usize>, Side)> {
    let mirrored = rot.mirror();
    let mut sides = vec![(Side::Left, rot.clone())];
    if !left_only {
        sides.push((Side::Right, mirrored));
    }
    for (side, r) in sides {
        for &w in rot.rotation(s) {
            if let (Some(p), _) = greedy_walk(&r, s, w) {
                if p.last() == Some(&t) && one_sided_in(&r, &p) {
                    return Some((p, side));
                }
            }
        }
    }
    None
}

#[allow(clippy::too_many_arguments)]
fn onesided(
    graph: &Path,
    embedding: Option<PathBuf>,
    st: Option<Vec<usize>>,
    left_only: bool,
    jobs: usize,
    out: &Option<PathBuf>,
    as_json: bool,
) -> Result<ExitCode> {
    let g = load_graph(graph)?;
    let n = g.vertex_count();
    if let Some(st) = &st {
        if st.iter().any(|&v| v >= n) {
            bail!("vertex out of range in --st");
        }
    }
    let found: Option<(Vec<usize>, RotationSystem, Option<Side>)> = match embedding {
        Some(path) => {
            let rot = parse_rotation(&read(&path)?, &g).with_context(|| format!("parsing {}", path.display()))?;
            if !rot.is_plane() {
                bail!("embedding is not plane");
            }
            match st {
                Some(st) => plane_st(&rot, st[0], st[1], left_only).map(|(p, side)| (p, rot.clone(), Some(side))),
                None => {
                    let res = plane_strongly_1sided_with(&rot, left_only)?;
                    res.path.map(|p| (p.vertices().to_vec(), rot.clone(), res.side))
                }
            }
        }
        None => {
            if left_only {
                bail!("--left-only needs --embedding");
            }
            let w = match st {
                Some(st) => st_one_sided(&g, st[0], st[1])?,
                None => planar_strongly_1sided_with(&g, jobs)?,
            };
            w.map(|w| (w.path.vertices().to_vec(), w.rotation, Some(Side::Left)))
        }
    };
    let Some((path, rot, side)) = found else {
        if as_json {
            println!("{}", json!({"path": null}));
        } else {
            println!("none");
        }
        return Ok(ExitCode::from(1));
    };
    let layout = LinearLayout::new(
        HamPath::new(&g, path.clone())?.order(),
        vec![g.edges().to_vec()],
    );
    let side = side.map(|s| format!("{s:?}").to_lowercase());
    if as_json {
        println!("{}", serde_json::to_string_pretty(&json!({
            "path": path,
            "side": side,
            "rotation": rot.rotations(),
        }))?);
    } else {
        print!("{}", serialize_path(&path));
        if let Some(s) = &side {
            println!("side: {s}");
        }
        println!("embedding:");
        print!("{}", serialize_rotation(&rot));
    }
    if let Some(p) = out {
        fs::write(p, serialize_layout(&layout))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn bounds(n: usize, k: Option<usize>, as_stated: bool, as_json: bool) -> Result<ExitCode> {
    let density = |k: usize| {
        if as_stated {
            density_bound_as_stated(n, k)
        } else {
            density_bound(n, k)
        }
    };
    let lower = (n >= 4).then(|| kn_lower_bound(n));
    let table = table_kn(n).ok();
    let upper = kn_upper_bound(n);
    if as_json {
        println!("{}", serde_json::to_string_pretty(&json!({
            "n": n,
            "k": k,
            "density": k.map(density),
            "edges": n * n.saturating_sub(1) / 2,
            "lower": lower.map(|l| l.tight_ceil),
            "lower_tight": lower.map(|l| l.tight),
            "lower_simplified": lower.map(|l| l.simplified),
            "table": table.map(|t| t.to_string()),
            "upper": upper,
        }))?);
        return Ok(ExitCode::SUCCESS);
    }
    println!("n: {n}");
    if let Some(k) = k {
        println!("density({n},{k}): {}", density(k));
        println!("edges of K{n}: {}", n * n.saturating_sub(1) / 2);
    }
    match lower {
        Some(l) => println!("lower: {} (tight {:.4}, simplified {:.4})", l.tight_ceil, l.tight, l.simplified),
        None => println!("lower: -"),
    }
    match table {
        Some(t) => println!("table: {t}"),
        None => println!("table: -"),
    }
    println!("upper: {upper}");
    Ok(ExitCode::SUCCESS)
}

fn construct(n: usize, svg: Option<PathBuf>, out: &Option<PathBuf>) -> Result<ExitCode> {
    let layout = construct_kn_layout(n);
    let report = validate_layout(&Graph::complete(n), &layout)?;
    if !report.valid {
        bail!("construction failed validation:\n{}", report.to_text());
    }
    if let Some(p) = svg {
        fs::write(&p, arc_diagram_svg(&layout)).with_context(|| format!("writing {}", p.display()))?;
    }
    emit(out, &serialize_layout(&layout))?;
    Ok(ExitCode::SUCCESS)
}

fn encode(graph: &Path, pages: usize, symmetry: Symmetry, out: &Option<PathBuf>, varmap: Option<PathBuf>) -> Result<ExitCode> {
    let g = load_graph(graph)?;
    let enc = encode_sat_with(&g, pages, symmetry)?;
    emit(out, &enc.cnf.to_dimacs())?;
    if let Some(p) = varmap {
        fs::write(&p, enc.cnf.varmap()).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn table(as_json: bool) -> Result<ExitCode> {
    let rows: Vec<_> = (4..=28)
        .map(|n| {
            let t = table_kn(n).expect("in table");
            (n, kn_lower_bound(n).tight_ceil, t, kn_upper_bound(n))
        })
        .collect();
    if as_json {
        let v: Vec<_> = rows
            .iter()
            .map(|(n, lo, t, up)| json!({"n": n, "lower": lo, "table": t.to_string(), "upper": up}))
            .collect();
        println!("{}", serde_json::to_string_pretty(&v)?);
    } else {
        println!("n\tlower\ttable\tupper");
        for (n, lo, t, up) in rows {
            println!("{n}\t{lo}\t{t}\t{up}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn reproduce(criterion: Option<usize>, cfg: SuiteConfig) -> Result<ExitCode> {
    let outcomes = match criterion {
        Some(c) => vec![suite::run(c, &cfg).with_context(|| format!("no criterion {c}"))?],
        None => suite::run_all(&cfg),
    };
    for o in &outcomes {
        println!("{o}");
    }
    Ok(flag(outcomes.iter().all(|o| o.pass)))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Validate { graph, layout, json } => validate(&graph, &layout, json),
        Cmd::Riquenumber {
            graph,
            exact: _,
            sat,
            kmin,
            kmax,
            timeout,
            symmetry,
            limit,
            jobs,
            out,
            json,
        } => {
            let cfg = SearchConfig {
                limit,
                jobs,
                kmin,
                kmax,
                timeout,
                symmetry,
                ..SearchConfig::default()
            };
            riquenumber(&graph, sat, cfg, &out, json)
        }
        Cmd::Onesided {
            graph,
            embedding,
            st,
            left_only,
            jobs,
            out,
            json,
        } => onesided(&graph, embedding, st, left_only, jobs, &out, json),
        Cmd::Bounds { n, k, as_stated, json } => bounds(n, k, as_stated, json),
        Cmd::ConstructKn { n, svg, out } => construct(n, svg, &out),
        Cmd::Encode {
            graph,
            pages,
            symmetry,
            out,
            varmap,
        } => encode(&graph, pages, symmetry, &out, varmap),
        Cmd::Table { json } => table(json),
        Cmd::Reproduce {
            criterion,
            seed,
            jobs,
            solver,
        } => reproduce(criterion, SuiteConfig { seed, jobs, solver }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
