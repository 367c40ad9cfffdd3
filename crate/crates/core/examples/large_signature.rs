//! Counts for integers far too large to enumerate. Only the prime signature
//! matters, so 2^20 * 3^10 and 5^20 * 7^10 share one memo entry.

use multifact::{Counter, FactoredInt};

fn main() -> multifact::Result<()> {
    let mut counter = Counter::new();
    let a = FactoredInt::from_factors(vec![(2, 20), (3, 10)])?;
    let b = FactoredInt::from_factors(vec![(5, 20), (7, 10)])?;

    let fa = counter.f_total(&a)?;
    let fb = counter.f_total(&b)?;
    println!("f({a}) = {fa}");
    println!("f({b}) = {fb}");
    assert_eq!(fa, fb);

    println!("g({a}) = {}", counter.g_total(&a)?);
    for k in [2, 5, 10, 30] {
        println!("f_{k}({a}) = {}", counter.f_k_rec(&a, k)?);
    }
    for l in 1..=4 {
        println!("h_{l}({a}) = {}", counter.h_l(&a, l)?);
    }
    Ok(())
}
