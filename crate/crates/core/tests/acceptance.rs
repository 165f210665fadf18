//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so every line appears in the test log; exits non-zero if any
//! criterion fails.

use h2ion::verify::run_suite;
use h2ion::SolverConfig;

fn main() {
    let quick = std::env::args().any(|a| a == "--quick");
    let outcomes = run_suite(quick, &SolverConfig::default());
    println!("acceptance criteria ({} mode)", if quick { "quick" } else { "full" });
    for o in &outcomes {
        println!("{o}");
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("{} passed, {failed} failed", outcomes.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
