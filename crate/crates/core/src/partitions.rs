//! Partitions and compositions of the index `k`, the partition-sum weights,
//! and the Euler transform of a multiplicity vector.

use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::arith::{exact_div, to_count, BigCount, ExactRational, FactoredInt};
use crate::error::{Error, Result};

/// A partition of `k`, parts stored nonincreasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Sorts `parts` into nonincreasing order. Zero parts are rejected.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::invalid("partition parts must be positive"));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn total(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Number of different part values.
    pub fn distinct_values(&self) -> usize {
        let mut n = 0;
        let mut prev = 0;
        for &p in &self.parts {
            if p != prev {
                n += 1;
                prev = p;
            }
        }
        n
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.parts)
    }
}

fn write_tuple(f: &mut fmt::Formatter<'_>, xs: &[u32]) -> fmt::Result {
    write!(f, "(")?;
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{x}")?;
    }
    write!(f, ")")
}

/// `beta[i - 1]` counts the parts equal to `i`. Stored with exactly as many
/// entries as the largest part; the empty vector is the partition of 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MultiplicityVector {
    beta: Vec<u32>,
}

impl MultiplicityVector {
    /// Trailing zeros are trimmed so the last entry is nonzero.
    pub fn new(mut beta: Vec<u32>) -> Self {
        while beta.last() == Some(&0) {
            beta.pop();
        }
        MultiplicityVector { beta }
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.beta
    }

    /// `beta_i`, zero past the largest part.
    pub fn get(&self, i: usize) -> u32 {
        if i == 0 {
            return 0;
        }
        self.beta.get(i - 1).copied().unwrap_or(0)
    }

    /// Largest part `a`.
    pub fn largest_part(&self) -> usize {
        self.beta.len()
    }

    /// `sum i * beta_i`.
    pub fn weight(&self) -> u64 {
        self.beta
            .iter()
            .enumerate()
            .map(|(i, &b)| (i as u64 + 1) * b as u64)
            .sum()
    }

    /// Number of parts, `sum beta_i`.
    pub fn part_count(&self) -> u64 {
        self.beta.iter().map(|&b| b as u64).sum()
    }

    pub fn to_partition(&self) -> Partition {
        let mut parts = Vec::new();
        for (i, &b) in self.beta.iter().enumerate().rev() {
            parts.extend(std::iter::repeat_n(i as u32 + 1, b as usize));
        }
        Partition { parts }
    }
}

impl fmt::Display for MultiplicityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.beta)
    }
}

/// An ordered sequence of positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Composition {
    parts: Vec<u32>,
}

impl Composition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::invalid("composition parts must be positive"));
        }
        Ok(Composition { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn total(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn multiplicity_vector(&self) -> MultiplicityVector {
        multiplicities(&self.parts)
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.parts)
    }
}

fn multiplicities(parts: &[u32]) -> MultiplicityVector {
    let a = parts.iter().copied().max().unwrap_or(0) as usize;
    let mut beta = vec![0u32; a];
    for &p in parts {
        beta[p as usize - 1] += 1;
    }
    MultiplicityVector { beta }
}

/// Partitions of `k` in descending lexicographic order.
#[derive(Debug, Clone)]
pub struct Partitions {
    current: Option<Vec<u32>>,
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let cur = self.current.take()?;
        let out = Partition { parts: cur.clone() };
        if let Some(idx) = cur.iter().rposition(|&p| p > 1) {
            let mut next = cur;
            let ones = (next.len() - idx - 1) as u32;
            let v = next[idx] - 1;
            next.truncate(idx);
            next.push(v);
            let mut rest = ones + 1;
            while rest > 0 {
                let take = rest.min(v);
                next.push(take);
                rest -= take;
            }
            self.current = Some(next);
        }
        Some(out)
    }
}

pub fn partitions_of(k: u32) -> Partitions {
    let start = if k == 0 { Vec::new() } else { vec![k] };
    Partitions { current: Some(start) }
}

pub fn multiplicity_vector(p: &Partition) -> MultiplicityVector {
    multiplicities(&p.parts)
}

/// `1 / prod_i (i^beta_i * beta_i!)`.
pub fn h_weight(b: &MultiplicityVector) -> ExactRational {
    let mut den = BigUint::one();
    for (idx, &bi) in b.beta.iter().enumerate() {
        let i = idx as u64 + 1;
        for t in 1..=bi as u64 {
            den *= i * t;
        }
    }
    ExactRational::new(BigInt::one(), BigInt::from(den))
}

/// `(-1)^theta` with `theta = sum (1 + i) beta_i`.
pub fn theta_sign(b: &MultiplicityVector) -> i32 {
    let parity = b
        .beta
        .iter()
        .enumerate()
        .fold(0u64, |acc, (idx, &bi)| acc + (idx as u64 + 2) * bi as u64)
        % 2;
    if parity == 0 {
        1
    } else {
        -1
    }
}

/// `sum_{d | m, d <= a} d * beta_d`.
pub fn gamma(b: &MultiplicityVector, m: u64) -> BigCount {
    assert!(m >= 1, "gamma needs m >= 1");
    let a = b.largest_part() as u64;
    let mut acc = 0u64;
    for d in 1..=a.min(m) {
        if m.is_multiple_of(d) {
            acc += d * b.get(d as usize) as u64;
        }
    }
    BigCount::from(acc)
}

/// Extends `nu` (holding `nu_beta(1..=len)`) up to `m_max` entries.
fn extend_euler_transform(b: &MultiplicityVector, nu: &mut Vec<BigCount>, m_max: usize) -> Result<()> {
    if nu.len() >= m_max {
        return Ok(());
    }
    let gammas: Vec<BigInt> = (1..=m_max as u64).map(|m| BigInt::from(gamma(b, m))).collect();
    for m in nu.len() + 1..=m_max {
        // nu(0) = 1 folds the leading gamma(m) into the convolution
        let mut acc = gammas[m - 1].clone();
        for k in 1..m {
            acc += &gammas[k - 1] * BigInt::from(nu[m - k - 1].clone());
        }
        let q = exact_div(acc, m as u64, &format!("euler transform of {b} at m={m}"))?;
        nu.push(to_count(q, "euler transform")?);
    }
    Ok(())
}

/// `nu_beta(1..=m_max)`: partitions of `m` where part `i` comes in `beta_i`
/// colors. Each step divides by `m` and fails if that division is inexact.
pub fn euler_transform(b: &MultiplicityVector, m_max: usize) -> Result<Vec<BigCount>> {
    if m_max == 0 {
        return Err(Error::invalid("euler_transform needs m_max >= 1"));
    }
    let mut nu = Vec::with_capacity(m_max);
    extend_euler_transform(b, &mut nu, m_max)?;
    Ok(nu)
}

/// Memo of Euler-transform prefixes keyed by the multiplicity vector.
#[derive(Debug, Default, Clone)]
pub struct EulerTransformCache {
    prefixes: HashMap<MultiplicityVector, Vec<BigCount>>,
}

impl EulerTransformCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// `nu_beta(m)` for `m >= 1`; `nu_beta(0) = 1`.
    pub fn value(&mut self, b: &MultiplicityVector, m: usize) -> Result<BigCount> {
        if m == 0 {
            return Ok(BigCount::one());
        }
        let nu = self.prefixes.entry(b.clone()).or_default();
        extend_euler_transform(b, nu, m)?;
        Ok(nu[m - 1].clone())
    }

    /// `prod_j nu_beta(e_j)` over the given exponents.
    pub fn mu(&mut self, b: &MultiplicityVector, exponents: &[u32]) -> Result<BigCount> {
        let mut acc = BigCount::one();
        for &e in exponents {
            acc *= self.value(b, e as usize)?;
            if acc.is_zero() {
                break;
            }
        }
        Ok(acc)
    }

    pub fn len(&self) -> usize {
        self.prefixes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prefixes.is_empty()
    }
}

/// Multiplicative extension `prod_j nu_beta(e_j)` over the exponents of `n`.
pub fn mu_beta(b: &MultiplicityVector, fi: &FactoredInt) -> Result<BigCount> {
    let exps = fi.exponents();
    let Some(&max_e) = exps.iter().max() else {
        return Ok(BigCount::one());
    };
    let nu = euler_transform(b, max_e as usize)?;
    Ok(exps.iter().map(|&e| nu[e as usize - 1].clone()).product())
}

/// Compositions of `k` in ascending lexicographic order.
#[derive(Debug, Clone)]
pub struct Compositions {
    current: Option<Vec<u32>>,
}

impl Iterator for Compositions {
    type Item = Composition;

    fn next(&mut self) -> Option<Composition> {
        let mut cur = self.current.take()?;
        let out = Composition { parts: cur.clone() };
        if cur.len() >= 2 {
            // ..., a, b  ->  ..., a + 1, 1 x (b - 1)
            let b = cur.pop().unwrap();
            *cur.last_mut().unwrap() += 1;
            cur.extend(std::iter::repeat_n(1, b as usize - 1));
            self.current = Some(cur);
        }
        Some(out)
    }
}

pub fn compositions_of(k: u32) -> Result<Compositions> {
    if k == 0 {
        return Err(Error::invalid("compositions_of needs k >= 1"));
    }
    Ok(Compositions { current: Some(vec![1; k as usize]) })
}

/// `1 / prod_j (alpha_1 + ... + alpha_j)`.
pub fn fedorov_weight(c: &Composition) -> ExactRational {
    let mut den = BigUint::one();
    let mut prefix = 0u64;
    for &p in &c.parts {
        prefix += p as u64;
        den *= prefix;
    }
    ExactRational::new(BigInt::one(), BigInt::from(den))
}

/// Sum of `fedorov_weight` over every ordering of the parts described by `b`.
pub fn aggregate_fedorov(k: u32, b: &MultiplicityVector) -> Result<ExactRational> {
    if b.weight() != k as u64 {
        return Err(Error::invalid(format!(
            "multiplicity vector {b} has weight {}, expected {k}",
            b.weight()
        )));
    }
    if k == 0 {
        return Err(Error::invalid("aggregate_fedorov needs k >= 1"));
    }
    let mut remaining = b.beta.clone();
    let mut sum = ExactRational::zero();
    sum_orderings(&mut remaining, 0, &BigUint::one(), &mut sum);
    Ok(sum)
}

// Depth-first over distinct orderings of the multiset, carrying the product of
// prefix sums so far.
fn sum_orderings(remaining: &mut [u32], prefix: u64, product: &BigUint, sum: &mut ExactRational) {
    let mut placed = false;
    for idx in 0..remaining.len() {
        if remaining[idx] == 0 {
            continue;
        }
        placed = true;
        remaining[idx] -= 1;
        let next = prefix + idx as u64 + 1;
        sum_orderings(remaining, next, &(product * next), sum);
        remaining[idx] += 1;
    }
    if !placed {
        *sum += ExactRational::new(BigInt::one(), BigInt::from(product.clone()));
    }
}

/// Number of compositions with part multiplicities `b`:
/// `(sum beta_i)! / prod beta_i!`.
pub fn composition_count(b: &MultiplicityVector) -> BigCount {
    let fact = |n: u64| (1..=n).fold(BigCount::one(), |acc, i| acc * i);
    let num = fact(b.part_count());
    let den: BigCount = b.beta.iter().map(|&x| fact(x as u64)).product();
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::factorize;

    fn mv(beta: &[u32]) -> MultiplicityVector {
        MultiplicityVector::new(beta.to_vec())
    }

    fn rat(n: i64, d: i64) -> ExactRational {
        ExactRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn parts(it: impl Iterator<Item = Partition>) -> Vec<Vec<u32>> {
        it.map(|p| p.parts().to_vec()).collect()
    }

    #[test]
    fn partitions_small() {
        assert_eq!(parts(partitions_of(3)), vec![vec![3], vec![2, 1], vec![1, 1, 1]]);
        assert_eq!(parts(partitions_of(0)), vec![Vec::<u32>::new()]);
        assert_eq!(partitions_of(5).count(), 7);
        assert_eq!(
            parts(partitions_of(4)),
            vec![vec![4], vec![3, 1], vec![2, 2], vec![2, 1, 1], vec![1, 1, 1, 1]]
        );
    }

    #[test]
    fn partition_counts_and_order() {
        // p(k) for k = 0..=20
        let known = [
            1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77, 101, 135, 176, 231, 297, 385, 490, 627,
        ];
        for (k, &pk) in known.iter().enumerate() {
            let all: Vec<Partition> = partitions_of(k as u32).collect();
            assert_eq!(all.len(), pk, "p({k})");
            assert!(all.windows(2).all(|w| w[0].parts() > w[1].parts()));
            assert!(all.iter().all(|p| p.total() == k as u32));
        }
    }

    #[test]
    fn multiplicity_vectors() {
        let p = |v: &[u32]| Partition::new(v.to_vec()).unwrap();
        assert_eq!(multiplicity_vector(&p(&[2, 1])).as_slice(), &[1, 1]);
        assert_eq!(multiplicity_vector(&p(&[3, 2, 2])).as_slice(), &[0, 2, 1]);
        assert_eq!(multiplicity_vector(&p(&[1, 1, 1, 1])).as_slice(), &[4]);
        assert!(multiplicity_vector(&p(&[])).as_slice().is_empty());
        assert_eq!(mv(&[0, 2, 1]).to_partition().parts(), &[3, 2, 2]);
        assert_eq!(mv(&[0, 2, 1, 0]).as_slice(), &[0, 2, 1]);
    }

    #[test]
    fn h_weight_examples() {
        assert_eq!(h_weight(&mv(&[3])), rat(1, 6));
        assert_eq!(h_weight(&mv(&[1, 1])), rat(1, 2));
        assert_eq!(h_weight(&mv(&[0, 0, 1])), rat(1, 3));
        assert_eq!(h_weight(&mv(&[])), rat(1, 1));
    }

    #[test]
    fn h_weights_sum_to_one() {
        for k in 1..=12 {
            let total: ExactRational =
                partitions_of(k).map(|p| h_weight(&multiplicity_vector(&p))).sum();
            assert_eq!(total, rat(1, 1), "k = {k}");
        }
    }

    #[test]
    fn theta_sign_examples() {
        assert_eq!(theta_sign(&mv(&[1, 1])), -1);
        assert_eq!(theta_sign(&mv(&[3])), 1);
        assert_eq!(theta_sign(&mv(&[0, 0, 1])), 1);
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma(&mv(&[0, 2, 1]), 6), BigCount::from(7u32));
        assert_eq!(gamma(&mv(&[3]), 1), BigCount::from(3u32));
        assert_eq!(gamma(&mv(&[0, 2, 1]), 5), BigCount::zero());
    }

    #[test]
    fn euler_transform_examples() {
        assert_eq!(euler_transform(&mv(&[0, 2, 1]), 7).unwrap()[6], BigCount::from(3u32));
        assert!(euler_transform(&mv(&[1]), 30).unwrap().iter().all(|x| x == &BigCount::one()));
        assert_eq!(euler_transform(&mv(&[3]), 1).unwrap()[0], BigCount::from(3u32));
        assert!(euler_transform(&mv(&[1]), 0).is_err());
    }

    #[test]
    fn euler_transform_all_ones_counts_restricted_partitions() {
        // beta = (1, ..., 1) of length a: partitions into parts <= a
        for a in 1..=6u32 {
            let nu = euler_transform(&mv(&vec![1; a as usize]), 20).unwrap();
            for m in 1..=20u32 {
                let want = partitions_of(m).filter(|p| p.parts()[0] <= a).count();
                assert_eq!(nu[m as usize - 1], BigCount::from(want), "a={a} m={m}");
            }
        }
    }

    #[test]
    fn euler_transform_cache_matches_direct() {
        let mut cache = EulerTransformCache::new();
        let b = mv(&[2, 0, 1]);
        let direct = euler_transform(&b, 15).unwrap();
        assert_eq!(cache.value(&b, 5).unwrap(), direct[4]);
        assert_eq!(cache.value(&b, 15).unwrap(), direct[14]);
        assert_eq!(cache.value(&b, 0).unwrap(), BigCount::one());
        assert_eq!(cache.len(), 1);
    }

    #[test]
    fn mu_beta_examples() {
        let n36 = factorize(36).unwrap();
        assert_eq!(mu_beta(&mv(&[1, 1]), &n36).unwrap(), BigCount::from(4u32));
        assert_eq!(mu_beta(&mv(&[2, 1]), &factorize(1).unwrap()).unwrap(), BigCount::one());
        assert_eq!(mu_beta(&mv(&[3]), &factorize(13).unwrap()).unwrap(), BigCount::from(3u32));
    }

    #[test]
    fn compositions_small() {
        let got: Vec<Vec<u32>> = compositions_of(3).unwrap().map(|c| c.parts().to_vec()).collect();
        assert_eq!(got, vec![vec![1, 1, 1], vec![1, 2], vec![2, 1], vec![3]]);
        assert_eq!(compositions_of(1).unwrap().count(), 1);
        assert_eq!(compositions_of(4).unwrap().count(), 8);
        assert!(compositions_of(0).is_err());
        for k in 1..=12 {
            let all: Vec<Composition> = compositions_of(k).unwrap().collect();
            assert_eq!(all.len(), 1 << (k - 1));
            let set: std::collections::HashSet<_> = all.iter().collect();
            assert_eq!(set.len(), all.len());
            assert!(all.iter().all(|c| c.total() == k));
        }
    }

    #[test]
    fn fedorov_weight_examples() {
        let c = |v: &[u32]| Composition::new(v.to_vec()).unwrap();
        assert_eq!(fedorov_weight(&c(&[1, 1, 1])), rat(1, 6));
        assert_eq!(fedorov_weight(&c(&[1, 2])), rat(1, 3));
        assert_eq!(fedorov_weight(&c(&[2, 1])), rat(1, 6));
    }

    #[test]
    fn aggregate_fedorov_examples() {
        assert_eq!(aggregate_fedorov(3, &mv(&[1, 1])).unwrap(), rat(1, 2));
        assert_eq!(aggregate_fedorov(3, &mv(&[3])).unwrap(), rat(1, 6));
        assert_eq!(aggregate_fedorov(1, &mv(&[1])).unwrap(), rat(1, 1));
        assert!(aggregate_fedorov(4, &mv(&[1, 1])).is_err());
    }

    #[test]
    fn aggregate_fedorov_matches_filtered_compositions() {
        for k in 1..=8 {
            for p in partitions_of(k) {
                let b = multiplicity_vector(&p);
                let filtered: ExactRational = compositions_of(k)
                    .unwrap()
                    .filter(|c| c.multiplicity_vector() == b)
                    .map(|c| fedorov_weight(&c))
                    .sum();
                assert_eq!(aggregate_fedorov(k, &b).unwrap(), filtered);
            }
        }
    }

    #[test]
    fn composition_counts_cover_all_compositions() {
        for k in 1..=12u32 {
            let total: BigCount =
                partitions_of(k).map(|p| composition_count(&multiplicity_vector(&p))).sum();
            assert_eq!(total, BigCount::from(1u64 << (k - 1)));
        }
        for k in 1..=8 {
            for p in partitions_of(k) {
                let b = multiplicity_vector(&p);
                let n = compositions_of(k).unwrap().filter(|c| c.multiplicity_vector() == b).count();
                assert_eq!(composition_count(&b), BigCount::from(n));
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        /// Coefficients of prod_i (1 - x^i)^(-beta_i) up to x^m_max by
        /// repeated multiplication with 1 / (1 - x^i).
        fn ogf_coefficients(b: &MultiplicityVector, m_max: usize) -> Vec<BigCount> {
            let mut series = vec![BigCount::zero(); m_max + 1];
            series[0] = BigCount::one();
            for i in 1..=b.largest_part() {
                for _ in 0..b.get(i) {
                    for m in i..=m_max {
                        let prev = series[m - i].clone();
                        series[m] += prev;
                    }
                }
            }
            series.remove(0);
            series
        }

        fn small_beta() -> impl Strategy<Value = MultiplicityVector> {
            (1u32..=8).prop_flat_map(|k| {
                let all: Vec<MultiplicityVector> =
                    partitions_of(k).map(|p| multiplicity_vector(&p)).collect();
                proptest::sample::select(all)
            })
        }

        proptest! {
            #[test]
            fn euler_transform_matches_power_series(b in small_beta()) {
                let nu = euler_transform(&b, 30).unwrap();
                prop_assert_eq!(nu, ogf_coefficients(&b, 30));
            }

            #[test]
            fn partition_roundtrip(k in 0u32..25) {
                for p in partitions_of(k) {
                    let b = multiplicity_vector(&p);
                    prop_assert_eq!(b.weight(), k as u64);
                    prop_assert_eq!(b.to_partition(), p);
                }
            }
        }
    }
}
