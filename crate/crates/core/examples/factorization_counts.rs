//! Every count at n = 36, computed by each available route.
//!
//! cargo run --example factorization_counts [n]

use multifact::{factorize, CountFunction, CountQuery, Counter};

fn main() -> multifact::Result<()> {
    let n: u64 = std::env::args().nth(1).map_or(Ok(36), |s| s.parse()).expect("n must be an integer");
    let fi = factorize(n)?;
    let mut counter = Counter::new();
    println!("n = {fi}, signature {}", fi.signature());

    let queries = [
        (CountFunction::F, None, None),
        (CountFunction::G, None, None),
        (CountFunction::Fk, Some(2), None),
        (CountFunction::Gk, Some(2), None),
        (CountFunction::BigFk, Some(2), None),
        (CountFunction::BigGk, Some(2), None),
        (CountFunction::Hl, None, Some(2)),
        (CountFunction::Fkl, Some(3), Some(2)),
    ];
    for (f, k, l) in queries {
        let q = CountQuery::new(f, fi.clone(), k, l)?;
        let mut row = Vec::new();
        for &m in f.methods() {
            row.push(format!("{m}={}", counter.evaluate(&q, m)?));
        }
        let idx = match (k, l) {
            (Some(k), Some(l)) => format!("k={k} l={l}"),
            (Some(k), None) => format!("k={k}"),
            (None, Some(l)) => format!("l={l}"),
            (None, None) => String::new(),
        };
        println!("{f:<5} {idx:<8} {}", row.join("  "));
    }
    Ok(())
}
