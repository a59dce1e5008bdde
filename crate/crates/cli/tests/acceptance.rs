use std::process::ExitCode;

use rique_cli::suite::{run_all, SuiteConfig, EXACT_BUDGET, PLANE_INSTANCE_BUDGET, SAT_BUDGET};

fn main() -> ExitCode {
    let cfg = SuiteConfig {
        jobs: std::thread::available_parallelism().map_or(1, |n| n.get()),
        ..SuiteConfig::default()
    };
    println!("budgets: exact {EXACT_BUDGET:?}, sat {SAT_BUDGET:?}, plane instance {PLANE_INSTANCE_BUDGET:?}");
    let outcomes = run_all(&cfg);
    for o in &outcomes {
        println!("{o}");
    }
    let passed = outcomes.iter().filter(|o| o.pass).count();
    println!("acceptance: {passed}/{} criteria passed", outcomes.len());
    if outcomes.len() == 8 && passed == 8 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
