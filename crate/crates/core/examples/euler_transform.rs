//! Colored partition counts from the Euler transform, checked against
//! enumeration, and the partition-sum weights for small k.

use multifact::oracle::colored_partition_count;
use multifact::partitions::{euler_transform, h_weight, multiplicity_vector, partitions_of, theta_sign, MultiplicityVector};

fn main() -> multifact::Result<()> {
    // two colors of 2, one color of 3
    let b = MultiplicityVector::new(vec![0, 2, 1]);
    let nu = euler_transform(&b, 12)?;
    for (m, v) in nu.iter().enumerate() {
        let m = m as u32 + 1;
        assert_eq!(*v, colored_partition_count(&b, m));
        println!("nu_{b}({m}) = {v}");
    }

    println!();
    for p in partitions_of(4) {
        let b = multiplicity_vector(&p);
        println!("{:<12} h = {:<6} sign = {}", b.to_string(), h_weight(&b).to_string(), theta_sign(&b));
    }
    Ok(())
}
