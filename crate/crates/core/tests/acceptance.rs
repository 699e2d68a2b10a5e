//! Acceptance battery. Runs outside the libtest harness so that every
//! criterion prints its PASS/FAIL line, failing checks listed underneath.
//! Exits nonzero if any criterion fails.

use teich::battery;

fn main() {
    let seed = battery::seed_from_env();
    println!("acceptance battery, seed {seed:#x}");
    let criteria = battery::run_all(seed);
    let failed: Vec<&str> = criteria.iter().filter(|c| !c.passed()).map(|c| c.id.as_str()).collect();
    for c in &criteria {
        println!("{}", c.summary());
    }
    println!("{} passed, {} failed", criteria.len() - failed.len(), failed.len());
    if !failed.is_empty() {
        eprintln!("failing criteria: {}", failed.join(", "));
        std::process::exit(1);
    }
}
