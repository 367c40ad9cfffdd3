//! The brute-force oracle: list every factorization and tally the counts.

use multifact::oracle::{enumerate_factorizations, profile};

fn main() -> multifact::Result<()> {
    let n = 72;
    for fm in enumerate_factorizations(n, 2)? {
        println!("{:?}", fm.parts());
    }
    let p = profile(n)?;
    println!("f = {}, g = {}", p.f, p.g);
    println!("f_k = {:?}", p.f_k);
    println!("h_l = {:?}", p.h_l);
    p.check().expect("oracle bookkeeping");
    Ok(())
}
