//! Composition weights summed over all orderings of a partition reproduce
//! the partition-sum weight.

use multifact::partitions::{aggregate_fedorov, compositions_of, fedorov_weight, h_weight, multiplicity_vector, partitions_of};

fn main() -> multifact::Result<()> {
    for c in compositions_of(4)? {
        println!("{:?} H = {}", c.parts(), fedorov_weight(&c));
    }
    println!();
    for k in 1..=10 {
        let mut ok = 0;
        let mut total = 0;
        for p in partitions_of(k) {
            let b = multiplicity_vector(&p);
            total += 1;
            ok += usize::from(aggregate_fedorov(k, &b)? == h_weight(&b));
        }
        println!("k = {k:>2}: {ok}/{total} partitions match");
    }
    Ok(())
}
