//! Partitions by number of parts and number of distinct part values, and
//! the same numbers read off factorizations of prime powers.

use multifact::{Counter, FactoredInt, PartitionCounter};

fn main() -> multifact::Result<()> {
    let mut pc = PartitionCounter::new();
    let mut counter = Counter::new();
    let n = 12;
    let power = FactoredInt::from_factors(vec![(2, n)])?;

    println!("r_l({n}), partitions of {n} with l distinct values:");
    for l in 1..=4 {
        let r = pc.r_l(n, l)?;
        assert_eq!(r, counter.h_l(&power, l)?);
        println!("  l={l}: {r}  (parts >= 2: {})", pc.r_lj(n, l, 2)?);
    }

    println!("p_kl({n}, k, l):");
    for k in 1..=n {
        let row: Vec<String> = (1..=3).map(|l| pc.p_kl(n, k, l).map(|v| v.to_string())).collect::<Result<_, _>>()?;
        println!("  k={k:>2}: {}", row.join(" "));
    }
    Ok(())
}
