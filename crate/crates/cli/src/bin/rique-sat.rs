//! Minimal DIMACS solver front end over the embedded backend: reads a CNF
//! file (or stdin for `-`), prints competition-style output and exits with
//! 10 (satisfiable), 20 (unsatisfiable) or 0 (unknown).

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{Context, Result};
use clap::Parser;

use rique_core::search::solver::{format_solver_output, EmbeddedSolver};
use rique_core::search::{Cnf, SatSolver};

#[derive(Parser)]
#[command(name = "rique-sat", version)]
struct Args {
    /// DIMACS file, `-` for stdin.
    input: PathBuf,
    /// Give up after this many seconds.
    #[arg(long)]
    timeout: Option<f64>,
}

fn run(args: Args) -> Result<ExitCode> {
    let text = if args.input.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(&args.input).with_context(|| format!("reading {}", args.input.display()))?
    };
    let cnf = Cnf::from_dimacs(&text).map_err(anyhow::Error::msg)?;
    let outcome = EmbeddedSolver.solve(&cnf, args.timeout.map(Duration::from_secs_f64))?;
    let (out, code) = format_solver_output(&outcome);
    print!("{out}");
    Ok(ExitCode::from(code as u8))
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
