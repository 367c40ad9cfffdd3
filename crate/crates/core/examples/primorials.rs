//! Factorizations of a primorial are set partitions, so the counts are
//! Stirling and Bell numbers.

use multifact::arith::primorial;
use multifact::partition_counts::{bell, stirling2};
use multifact::Counter;

fn main() -> multifact::Result<()> {
    let mut counter = Counter::new();
    for n in 1..=12u32 {
        let pn = primorial(n as usize)?;
        let f = counter.f_total(&pn)?;
        assert_eq!(f, bell(n));
        assert_eq!(counter.g_total(&pn)?, f);
        let row: Vec<String> = (1..=n).map(|k| counter.f_k_rec(&pn, k).map(|v| v.to_string())).collect::<Result<_, _>>()?;
        for (k, v) in (1..=n).zip(&row) {
            assert_eq!(*v, stirling2(n, k).to_string());
        }
        println!("P_{n:<2} = {:<20} f = {f:<10} f_k = {}", pn.value(), row.join(" "));
    }
    Ok(())
}
