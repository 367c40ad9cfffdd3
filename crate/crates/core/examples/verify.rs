//! Runs the route, identity and oracle suites up to a bound.

use multifact::cli::run_suites;

fn main() {
    let max = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(300);
    let reports = run_suites(max, None, true, true, true, None);
    for r in &reports {
        println!("{}: {} passed, {} failed", r.name, r.passed, r.failed);
        if let Some(f) = &r.first_failure {
            println!("  {f}");
        }
    }
    if reports.iter().any(|r| !r.ok()) {
        std::process::exit(1);
    }
}
