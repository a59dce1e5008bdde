//! SAT backends.
//!
//! Every backend implements [`SatSolver`]. `embedded` runs an in-process
//! CDCL solver; any other name is treated as an external command line that
//! receives a DIMACS file path as its last argument and reports in the usual
//! competition format (`s SATISFIABLE` / `v ...` lines, exit codes 10/20).

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::process::{Command, Stdio};
use std::sync::Arc;
use std::time::{Duration, Instant};

use batsat::{lbool, BasicCallbacks, Lit, SolverInterface, SolverOpts, Var};
use thiserror::Error;
use wait_timeout::ChildExt;

use super::sat::Cnf;

pub const EMBEDDED: &str = "embedded";

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("empty solver command")]
    EmptyCommand,
    #[error("cannot launch solver {command:?}: {source}")]
    Launch {
        command: String,
        source: std::io::Error,
    },
    #[error("solver i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot parse solver output: {0}")]
    Parse(String),
}

/// Assignment indexed by 1-based variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatModel {
    values: Vec<bool>,
}

impl SatModel {
    pub fn new(num_vars: usize) -> Self {
        SatModel {
            values: vec![false; num_vars],
        }
    }

    pub fn from_values(values: Vec<bool>) -> Self {
        SatModel { values }
    }

    pub fn value(&self, var: usize) -> bool {
        self.values.get(var - 1).copied().unwrap_or(false)
    }

    pub fn set(&mut self, var: usize, val: bool) {
        if var > self.values.len() {
            self.values.resize(var, false);
        }
        self.values[var - 1] = val;
    }

    pub fn num_vars(&self) -> usize {
        self.values.len()
    }

    pub fn satisfies(&self, cnf: &Cnf) -> bool {
        cnf.clauses.iter().all(|c| {
            c.iter().any(|&l| self.value(l.unsigned_abs() as usize) == (l > 0))
        })
    }

    /// Signed literal list, DIMACS style.
    pub fn literals(&self) -> Vec<i32> {
        (1..=self.values.len())
            .map(|v| if self.values[v - 1] { v as i32 } else { -(v as i32) })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatOutcome {
    Sat(SatModel),
    Unsat,
    Timeout,
}

pub trait SatSolver: Send + Sync {
    fn name(&self) -> String;
    fn solve(&self, cnf: &Cnf, timeout: Option<Duration>) -> Result<SatOutcome, SolverError>;
}

pub struct EmbeddedSolver;

impl SatSolver for EmbeddedSolver {
    fn name(&self) -> String {
        EMBEDDED.to_string()
    }

    fn solve(&self, cnf: &Cnf, timeout: Option<Duration>) -> Result<SatOutcome, SolverError> {
        let mut cb = BasicCallbacks::new();
        if let Some(t) = timeout {
            let deadline = Instant::now() + t;
            cb.set_stop(move || Instant::now() >= deadline);
        }
        let mut s = batsat::Solver::new(SolverOpts::default(), cb);
        let vars: Vec<Var> = (0..cnf.num_vars).map(|_| s.new_var_default()).collect();
        let mut buf = Vec::new();
        for c in &cnf.clauses {
            buf.clear();
            buf.extend(c.iter().map(|&l| Lit::new(vars[l.unsigned_abs() as usize - 1], l > 0)));
            if !s.add_clause_reuse(&mut buf) {
                return Ok(SatOutcome::Unsat);
            }
        }
        let res = s.solve_limited(&[]);
        if res == lbool::TRUE {
            let values = vars.iter().map(|&v| s.value_var(v) == lbool::TRUE).collect();
            Ok(SatOutcome::Sat(SatModel::from_values(values)))
        } else if res == lbool::FALSE {
            Ok(SatOutcome::Unsat)
        } else {
            Ok(SatOutcome::Timeout)
        }
    }
}

/// External solver run as a subprocess on a temporary DIMACS file.
pub struct ExternalSolver {
    program: String,
    args: Vec<String>,
}

impl ExternalSolver {
    /// Splits a command line on whitespace.
    pub fn from_command_line(cmd: &str) -> Result<Self, SolverError> {
        let mut toks = cmd.split_whitespace().map(String::from);
        let program = toks.next().ok_or(SolverError::EmptyCommand)?;
        Ok(ExternalSolver {
            program,
            args: toks.collect(),
        })
    }
}

impl SatSolver for ExternalSolver {
    fn name(&self) -> String {
        std::iter::once(self.program.clone())
            .chain(self.args.iter().cloned())
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn solve(&self, cnf: &Cnf, timeout: Option<Duration>) -> Result<SatOutcome, SolverError> {
        let mut file = tempfile::Builder::new().suffix(".cnf").tempfile()?;
        file.write_all(cnf.to_dimacs().as_bytes())?;
        file.flush()?;
        let mut child = Command::new(&self.program)
            .args(&self.args)
            .arg(file.path())
            .stdin(Stdio::null())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .map_err(|source| SolverError::Launch {
                command: self.name(),
                source,
            })?;
        let mut stdout = child.stdout.take().expect("piped stdout");
        let reader = std::thread::spawn(move || {
            let mut s = String::new();
            stdout.read_to_string(&mut s).map(|_| s)
        });
        let status = match timeout {
            Some(t) => match child.wait_timeout(t)? {
                Some(st) => st,
                None => {
                    child.kill().ok();
                    child.wait().ok();
                    let _ = reader.join();
                    return Ok(SatOutcome::Timeout);
                }
            },
            None => child.wait()?,
        };
        let text = reader
            .join()
            .map_err(|_| SolverError::Parse("reader thread panicked".into()))??;
        parse_solver_output(&text, status.code(), cnf.num_vars)
    }
}

/// Interprets solver output. The status comes from an `s ...` line, a bare
/// first token `SAT`/`UNSAT`, or failing those the exit code (10/20).
/// Model literals are read from `v` lines, or from integer lines after a
/// bare `SAT`.
pub fn parse_solver_output(
    text: &str,
    exit_code: Option<i32>,
    num_vars: usize,
) -> Result<SatOutcome, SolverError> {
    #[derive(PartialEq)]
    enum St {
        Sat,
        Unsat,
        Unknown,
    }
    let mut status = None;
    let mut model = SatModel::new(num_vars);
    let mut read_lits = |toks: &mut dyn Iterator<Item = &str>| -> Result<(), SolverError> {
        for t in toks {
            let l: i64 = t
                .parse()
                .map_err(|_| SolverError::Parse(format!("bad literal {t:?}")))?;
            if l != 0 {
                model.set(l.unsigned_abs() as usize, l > 0);
            }
        }
        Ok(())
    };
    for line in text.lines() {
        let mut toks = line.split_whitespace();
        let Some(first) = toks.next() else { continue };
        match first {
            "s" => {
                status = Some(match toks.next() {
                    Some("SATISFIABLE") => St::Sat,
                    Some("UNSATISFIABLE") => St::Unsat,
                    _ => St::Unknown,
                })
            }
            "v" => read_lits(&mut toks)?,
            "SAT" | "SATISFIABLE" if status.is_none() => status = Some(St::Sat),
            "UNSAT" | "UNSATISFIABLE" if status.is_none() => status = Some(St::Unsat),
            "INDET" | "UNKNOWN" if status.is_none() => status = Some(St::Unknown),
            t if status == Some(St::Sat) && t.parse::<i64>().is_ok() => {
                read_lits(&mut std::iter::once(t).chain(toks))?
            }
            _ => {}
        }
    }
    let status = status.or(match exit_code {
        Some(10) => Some(St::Sat),
        Some(20) => Some(St::Unsat),
        _ => None,
    });
    match status {
        Some(St::Sat) => Ok(SatOutcome::Sat(model)),
        Some(St::Unsat) => Ok(SatOutcome::Unsat),
        Some(St::Unknown) => Ok(SatOutcome::Timeout),
        None => Err(SolverError::Parse(format!(
            "no SAT/UNSAT status (exit code {exit_code:?})"
        ))),
    }
}

/// Competition-format output for `outcome`, with its exit code.
pub fn format_solver_output(outcome: &SatOutcome) -> (String, i32) {
    match outcome {
        SatOutcome::Sat(m) => {
            let mut s = String::from("s SATISFIABLE\nv");
            for l in m.literals() {
                s.push_str(&format!(" {l}"));
            }
            s.push_str(" 0\n");
            (s, 10)
        }
        SatOutcome::Unsat => ("s UNSATISFIABLE\n".into(), 20),
        SatOutcome::Timeout => ("s UNKNOWN\n".into(), 0),
    }
}

/// Named backends. Unregistered names resolve to external commands.
#[derive(Clone)]
pub struct SolverRegistry {
    solvers: BTreeMap<String, Arc<dyn SatSolver>>,
}

impl SolverRegistry {
    pub fn with_defaults() -> Self {
        let mut r = SolverRegistry {
            solvers: BTreeMap::new(),
        };
        r.register(EMBEDDED, Arc::new(EmbeddedSolver));
        r
    }

    pub fn register(&mut self, name: &str, solver: Arc<dyn SatSolver>) {
        self.solvers.insert(name.to_string(), solver);
    }

    pub fn names(&self) -> Vec<String> {
        self.solvers.keys().cloned().collect()
    }

    pub fn resolve(&self, name: &str) -> Arc<dyn SatSolver> {
        if let Some(s) = self.solvers.get(name) {
            return s.clone();
        }
        match ExternalSolver::from_command_line(name) {
            Ok(s) => Arc::new(s),
            Err(_) => self.solvers[EMBEDDED].clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny(sat: bool) -> Cnf {
        let clauses = if sat {
            vec![vec![1, 2], vec![-1]]
        } else {
            vec![vec![1], vec![-1]]
        };
        Cnf {
            num_vars: 2,
            clauses,
            names: Vec::new(),
        }
    }

    #[test]
    fn embedded_solves() {
        match EmbeddedSolver.solve(&tiny(true), None).unwrap() {
            SatOutcome::Sat(m) => {
                assert!(m.satisfies(&tiny(true)));
                assert!(!m.value(1) && m.value(2));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(EmbeddedSolver.solve(&tiny(false), None).unwrap(), SatOutcome::Unsat);
    }

    #[test]
    fn output_formats() {
        let out = parse_solver_output("c hi\ns SATISFIABLE\nv 1 -2\nv 3 0\n", Some(10), 3).unwrap();
        assert_eq!(out, SatOutcome::Sat(SatModel::from_values(vec![true, false, true])));
        assert_eq!(parse_solver_output("UNSAT\n", None, 3).unwrap(), SatOutcome::Unsat);
        let out = parse_solver_output("SAT\n-1 2 0\n", None, 2).unwrap();
        assert_eq!(out, SatOutcome::Sat(SatModel::from_values(vec![false, true])));
        assert_eq!(parse_solver_output("", Some(20), 1).unwrap(), SatOutcome::Unsat);
        assert_eq!(parse_solver_output("s UNKNOWN\n", Some(0), 1).unwrap(), SatOutcome::Timeout);
        assert!(parse_solver_output("garbage\n", Some(1), 1).is_err());
    }

    #[test]
    fn format_round_trip() {
        let m = SatModel::from_values(vec![true, false]);
        let (text, code) = format_solver_output(&SatOutcome::Sat(m.clone()));
        assert_eq!(code, 10);
        assert_eq!(parse_solver_output(&text, Some(code), 2).unwrap(), SatOutcome::Sat(m));
    }

    #[test]
    fn missing_external_solver_is_a_launch_error() {
        let s = ExternalSolver::from_command_line("definitely-not-a-solver-binary").unwrap();
        assert!(matches!(s.solve(&tiny(true), None), Err(SolverError::Launch { .. })));
        assert!(ExternalSolver::from_command_line("  ").is_err());
    }

    #[test]
    fn registry_resolution() {
        let r = SolverRegistry::with_defaults();
        assert_eq!(r.names(), vec![EMBEDDED.to_string()]);
        assert_eq!(r.resolve(EMBEDDED).name(), EMBEDDED);
        assert_eq!(r.resolve("kissat -q").name(), "kissat -q");
    }
}
