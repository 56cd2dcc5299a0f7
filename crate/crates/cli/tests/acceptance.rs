//! The release gate: every verification check must pass, and the run
//! prints one PASS/FAIL line per check so the log shows exactly which
//! invariant broke.
//!
//! This target uses no test harness so the lines always reach the
//! terminal; a nonzero exit marks the target failed under `cargo test`.

use stav_core::checks::{run_suite, Suite};
use stav_core::Pool;

fn main() {
    let workers = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    let pool = Pool::new(workers);
    let outcomes = run_suite(&pool, Suite::All);
    assert_eq!(outcomes.len(), 13, "the gate runs all thirteen checks");
    let mut failures = 0u32;
    for o in &outcomes {
        let verdict = if o.passed { "PASS" } else { "FAIL" };
        println!("{verdict} {}: {}", o.name, o.detail);
        if !o.passed {
            failures += 1;
        }
    }
    if failures > 0 {
        eprintln!("{failures} of {} checks failed", outcomes.len());
        std::process::exit(1);
    }
    println!("all {} checks passed", outcomes.len());
}
