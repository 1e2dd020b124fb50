//! The verification suites behind `conflab verify`, run from code.

use conflab::verify::{run_suites, SUITES};

fn main() -> conflab::Result<()> {
    for r in run_suites(&SUITES)? {
        let failed: Vec<_> = r.checks.iter().filter(|c| !c.passed).collect();
        println!("{:<24} {:>3} checks, {} failed", r.suite, r.checks.len(), failed.len());
        for c in failed {
            println!("    {}: {}", c.name, c.detail);
        }
    }
    Ok(())
}
