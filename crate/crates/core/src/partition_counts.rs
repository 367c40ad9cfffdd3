//! Partition-side counts (`p_{k,l}`, `r_l`, `r_{l,j}`), Stirling numbers of
//! the second kind, Bell numbers, and checkers for the identities tying them
//! to sums over partitions.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{
    binomial, exact_div, primorial, rational_to_count, to_count, BigCount, ExactRational,
};
use crate::counting::with_counter;
use crate::error::{Error, Result};
use crate::partitions::{aggregate_fedorov, h_weight, multiplicity_vector, partitions_of, theta_sign};

/// Memo tables for the partition recursions, grown in increasing `n`.
#[derive(Debug, Default, Clone)]
pub struct PartitionCounter {
    /// `p_kl[n][k][l]` for `l <= k <= n`
    p_kl: Vec<Vec<Vec<BigCount>>>,
    /// `r_l[n][l]` for `l <= n`
    r_l: Vec<Vec<BigCount>>,
    r_lj: HashMap<(u32, u32, u32), BigCount>,
}

impl PartitionCounter {
    pub fn new() -> Self {
        Self::default()
    }

    fn p_at(&self, n: i64, k: i64, l: i64) -> BigCount {
        if n < 0 || k < 0 || l < 0 || l > k || k > n {
            return BigCount::zero();
        }
        self.p_kl[n as usize][k as usize][l as usize].clone()
    }

    fn grow_p_kl(&mut self, upto: u32) -> Result<()> {
        while self.p_kl.len() <= upto as usize {
            let n = self.p_kl.len() as i64;
            let mut table = vec![Vec::new(); n as usize + 1];
            for k in 0..=n {
                let mut row = Vec::with_capacity(k as usize + 1);
                for l in 0..=k {
                    row.push(self.p_kl_step(n, k, l)?);
                }
                table[k as usize] = row;
            }
            self.p_kl.push(table);
        }
        Ok(())
    }

    // n p_{k,l}(n) = sum_d d sum_j (-1)^(j+1) sum_{i <= n/d} C(i,j) p_{k-i,l-j}(n - i d)
    fn p_kl_step(&self, n: i64, k: i64, l: i64) -> Result<BigCount> {
        if n == 0 {
            return Ok(BigCount::from(u8::from(k == 0 && l == 0)));
        }
        let mut acc = BigInt::zero();
        for d in 1..=n {
            for j in 1..=l {
                let mut inner = BigInt::zero();
                for i in 1..=n / d {
                    let c = binomial(i as u64, j);
                    if c.is_zero() {
                        continue;
                    }
                    let p = self.p_at(n - i * d, k - i, l - j);
                    if !p.is_zero() {
                        inner += BigInt::from(c * p);
                    }
                }
                if j % 2 == 1 {
                    acc += inner * d;
                } else {
                    acc -= inner * d;
                }
            }
        }
        let ctx = format!("p_kl recursion at n={n}, k={k}, l={l}");
        to_count(exact_div(acc, n as u64, &ctx)?, &ctx)
    }

    /// Partitions of `n` into exactly `k` parts taking exactly `l` different values.
    pub fn p_kl(&mut self, n: u32, k: u32, l: u32) -> Result<BigCount> {
        self.grow_p_kl(n)?;
        Ok(self.p_at(n as i64, k as i64, l as i64))
    }

    fn r_at(&self, n: i64, l: i64) -> BigCount {
        if n < 0 || l < 0 || l > n {
            return BigCount::zero();
        }
        self.r_l[n as usize][l as usize].clone()
    }

    fn grow_r_l(&mut self, upto: u32) -> Result<()> {
        while self.r_l.len() <= upto as usize {
            let n = self.r_l.len() as i64;
            let mut row = Vec::with_capacity(n as usize + 1);
            for l in 0..=n {
                row.push(self.r_l_step(n, l)?);
            }
            self.r_l.push(row);
        }
        Ok(())
    }

    // n r_l(n) = sum_d d sum_j (-1)^(j+1) sum_{i <= n/d} C(i,j) r_{l-j}(n - i d)
    fn r_l_step(&self, n: i64, l: i64) -> Result<BigCount> {
        if n == 0 {
            return Ok(BigCount::from(u8::from(l == 0)));
        }
        let mut acc = BigInt::zero();
        for d in 1..=n {
            for j in 1..=l {
                let mut inner = BigInt::zero();
                for i in 1..=n / d {
                    let c = binomial(i as u64, j);
                    if c.is_zero() {
                        continue;
                    }
                    let r = self.r_at(n - i * d, l - j);
                    if !r.is_zero() {
                        inner += BigInt::from(c * r);
                    }
                }
                if j % 2 == 1 {
                    acc += inner * d;
                } else {
                    acc -= inner * d;
                }
            }
        }
        let ctx = format!("r_l recursion at n={n}, l={l}");
        to_count(exact_div(acc, n as u64, &ctx)?, &ctx)
    }

    /// Partitions of `n` with exactly `l` different part values.
    pub fn r_l(&mut self, n: u32, l: u32) -> Result<BigCount> {
        self.grow_r_l(n)?;
        Ok(self.r_at(n as i64, l as i64))
    }

    /// Partitions of `n` with exactly `l` different part values, all parts `>= j`.
    pub fn r_lj(&mut self, n: u32, l: u32, j: u32) -> Result<BigCount> {
        if j == 0 {
            return Err(Error::invalid("r_lj needs j >= 1"));
        }
        Ok(self.r_lj_rec(n as i64, l as i64, j as u64))
    }

    fn r_lj_rec(&mut self, n: i64, l: i64, j: u64) -> BigCount {
        if n < 0 || l < 0 || j as i64 * l > n {
            return BigCount::zero();
        }
        if n == 0 {
            return BigCount::from(u8::from(l == 0));
        }
        if l == 0 {
            return BigCount::zero();
        }
        let key = (n as u32, l as u32, j as u32);
        if let Some(v) = self.r_lj.get(&key) {
            return v.clone();
        }
        let mut v = self.r_lj_rec(n, l, j + 1);
        for i in 1..=n / j as i64 {
            v += self.r_lj_rec(n - i * j as i64, l - 1, j + 1);
        }
        self.r_lj.insert(key, v.clone());
        v
    }
}

/// `S(n, k)` by the triangle `S(n, k) = k S(n-1, k) + S(n-1, k-1)`.
pub fn stirling2(n: u32, k: u32) -> BigCount {
    if k > n {
        return BigCount::zero();
    }
    stirling2_row(n).swap_remove(k as usize)
}

/// `S(n, 0..=n)`.
pub fn stirling2_row(n: u32) -> Vec<BigCount> {
    let mut row = vec![BigCount::one()];
    for m in 1..=n as usize {
        let mut next = vec![BigCount::zero(); m + 1];
        for k in 1..=m {
            let carry = if k < m { &row[k] * k } else { BigCount::zero() };
            next[k] = carry + &row[k - 1];
        }
        row = next;
    }
    row
}

pub fn bell(n: u32) -> BigCount {
    stirling2_row(n).into_iter().sum()
}

/// The identities between partition sums and Stirling / Bell numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IdentityId {
    /// `sum_{i<=k} S(n,i) = sum_{P_k} h(beta) beta_1^n`
    StirlingPrefixSum,
    /// `B_n = sum_{P_n} h(beta) beta_1^n`
    BellSum,
    /// `S(n,k) + S(n,k-1) = sum_{P_k} (-1)^theta h(beta) beta_1^n`
    StirlingPairSignedSum,
    /// `C(n,2) + 1 = sum_{P_n} (-1)^theta h(beta) beta_1^n`
    BinomialSignedSum,
    /// composition weights aggregated per multiplicity vector equal `h(beta)`;
    /// reported as (matching vectors, partitions of `n`)
    CompositionHarmonicSum,
    /// `f_k(P_n) = S(n,k)`
    PrimorialStirling,
    /// `g_k(P_n) = S(n,k)`
    PrimorialStirlingDistinct,
    /// `f(P_n) = B_n`
    PrimorialBell,
    /// `g(P_n) = B_n`
    PrimorialBellDistinct,
}

impl IdentityId {
    pub const ALL: [IdentityId; 9] = [
        IdentityId::StirlingPrefixSum,
        IdentityId::BellSum,
        IdentityId::StirlingPairSignedSum,
        IdentityId::BinomialSignedSum,
        IdentityId::CompositionHarmonicSum,
        IdentityId::PrimorialStirling,
        IdentityId::PrimorialStirlingDistinct,
        IdentityId::PrimorialBell,
        IdentityId::PrimorialBellDistinct,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityId::StirlingPrefixSum => "stirling-prefix-sum",
            IdentityId::BellSum => "bell-sum",
            IdentityId::StirlingPairSignedSum => "stirling-pair-signed-sum",
            IdentityId::BinomialSignedSum => "binomial-signed-sum",
            IdentityId::CompositionHarmonicSum => "composition-harmonic-sum",
            IdentityId::PrimorialStirling => "primorial-stirling",
            IdentityId::PrimorialStirlingDistinct => "primorial-stirling-distinct",
            IdentityId::PrimorialBell => "primorial-bell",
            IdentityId::PrimorialBellDistinct => "primorial-bell-distinct",
        }
    }

    /// Whether the identity is indexed by `k` as well as `n`.
    pub fn takes_k(self) -> bool {
        matches!(
            self,
            IdentityId::StirlingPrefixSum
                | IdentityId::StirlingPairSignedSum
                | IdentityId::PrimorialStirling
                | IdentityId::PrimorialStirlingDistinct
        )
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IdentityId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown identity '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub id: IdentityId,
    pub n: u32,
    pub k: Option<u32>,
    pub lhs: BigCount,
    pub rhs: BigCount,
    pub pass: bool,
}

impl fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} n={}", self.id, self.n)?;
        if let Some(k) = self.k {
            write!(f, " k={k}")?;
        }
        write!(
            f,
            ": lhs={} rhs={} {}",
            self.lhs,
            self.rhs,
            if self.pass { "ok" } else { "FAIL" }
        )
    }
}

/// `sum_{P_k} (sign) h(beta) beta_1^n`, required to be a nonnegative integer.
fn beta_one_power_sum(k: u32, n: u32, signed: bool) -> Result<BigCount> {
    let mut acc = ExactRational::zero();
    for p in partitions_of(k) {
        let b = multiplicity_vector(&p);
        let b1 = BigInt::from(b.get(1));
        let term = h_weight(&b) * ExactRational::from_integer(num_traits::pow(b1, n as usize));
        if signed && theta_sign(&b) < 0 {
            acc -= term;
        } else {
            acc += term;
        }
    }
    rational_to_count(&acc, &format!("partition sum of beta_1^{n} over P_{k}"))
}

/// Evaluates both sides of `id` at `(n, k)`.
pub fn check_identity(id: IdentityId, n: u32, k: Option<u32>) -> Result<IdentityReport> {
    if n == 0 {
        return Err(Error::invalid("identities are stated for n >= 1"));
    }
    let k = match (id.takes_k(), k) {
        (true, Some(k)) if (1..=n).contains(&k) => Some(k),
        (true, Some(k)) => {
            return Err(Error::invalid(format!("{id} needs 1 <= k <= n, got k={k}, n={n}")))
        }
        (true, None) => return Err(Error::invalid(format!("{id} needs k"))),
        (false, _) => None,
    };
    let kk = k.unwrap_or(0);
    let (lhs, rhs) = match id {
        IdentityId::StirlingPrefixSum => {
            let row = stirling2_row(n);
            let lhs: BigCount = row[1..=kk as usize].iter().sum();
            (lhs, beta_one_power_sum(kk, n, false)?)
        }
        IdentityId::BellSum => (bell(n), beta_one_power_sum(n, n, false)?),
        IdentityId::StirlingPairSignedSum => {
            let lhs = stirling2(n, kk) + stirling2(n, kk - 1);
            (lhs, beta_one_power_sum(kk, n, true)?)
        }
        IdentityId::BinomialSignedSum => {
            let lhs = binomial(n as u64, 2) + BigCount::one();
            (lhs, beta_one_power_sum(n, n, true)?)
        }
        IdentityId::CompositionHarmonicSum => {
            let mut matching = 0u64;
            let mut total = 0u64;
            for p in partitions_of(n) {
                let b = multiplicity_vector(&p);
                total += 1;
                if aggregate_fedorov(n, &b)? == h_weight(&b) {
                    matching += 1;
                }
            }
            (BigCount::from(matching), BigCount::from(total))
        }
        IdentityId::PrimorialStirling => {
            let pn = primorial(n as usize)?;
            (with_counter(|c| c.f_k_rec(&pn, kk))?, stirling2(n, kk))
        }
        IdentityId::PrimorialStirlingDistinct => {
            let pn = primorial(n as usize)?;
            (with_counter(|c| c.g_k_rec(&pn, kk))?, stirling2(n, kk))
        }
        IdentityId::PrimorialBell => {
            let pn = primorial(n as usize)?;
            (with_counter(|c| c.f_total(&pn))?, bell(n))
        }
        IdentityId::PrimorialBellDistinct => {
            let pn = primorial(n as usize)?;
            (with_counter(|c| c.g_total(&pn))?, bell(n))
        }
    };
    let pass = lhs == rhs;
    Ok(IdentityReport { id, n, k, lhs, rhs, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::enumerate_partitions;

    fn c(v: u64) -> BigCount {
        BigCount::from(v)
    }

    #[test]
    fn p_kl_examples() {
        let mut pc = PartitionCounter::new();
        assert_eq!(pc.p_kl(7, 3, 2).unwrap(), c(3));
        assert_eq!(pc.p_kl(0, 0, 0).unwrap(), c(1));
        assert_eq!(pc.p_kl(5, 5, 1).unwrap(), c(1));
        assert_eq!(pc.p_kl(5, 6, 1).unwrap(), c(0));
    }

    #[test]
    fn r_l_examples() {
        let mut pc = PartitionCounter::new();
        assert_eq!(pc.r_l(5, 2).unwrap(), c(5));
        assert_eq!(pc.r_l(5, 1).unwrap(), c(2));
        assert_eq!(pc.r_l(0, 0).unwrap(), c(1));
        assert_eq!(pc.r_l(4, 0).unwrap(), c(0));
    }

    #[test]
    fn r_lj_examples() {
        let mut pc = PartitionCounter::new();
        assert_eq!(pc.r_lj(7, 2, 2).unwrap(), c(3));
        assert_eq!(pc.r_lj(5, 2, 3).unwrap(), c(0));
        assert_eq!(pc.r_lj(5, 2, 1).unwrap(), c(5));
        assert_eq!(pc.r_lj(0, 0, 4).unwrap(), c(1));
        assert!(pc.r_lj(5, 2, 0).is_err());
    }

    #[test]
    fn partition_recursions_match_enumeration() {
        let mut pc = PartitionCounter::new();
        for n in 0..=25u32 {
            let all = enumerate_partitions(n);
            for l in 0..=n {
                let want = all.iter().filter(|p| p.distinct_values() == l as usize).count();
                assert_eq!(pc.r_l(n, l).unwrap(), c(want as u64), "r_{l}({n})");
                assert_eq!(pc.r_lj(n, l, 1).unwrap(), c(want as u64));
                for j in 2..=4 {
                    let want = all
                        .iter()
                        .filter(|p| p.distinct_values() == l as usize && p.parts().iter().all(|&x| x >= j))
                        .count();
                    assert_eq!(pc.r_lj(n, l, j).unwrap(), c(want as u64), "r_({l},{j})({n})");
                }
                for k in 0..=n {
                    let want = all
                        .iter()
                        .filter(|p| p.len() == k as usize && p.distinct_values() == l as usize)
                        .count();
                    assert_eq!(pc.p_kl(n, k, l).unwrap(), c(want as u64), "p_({k},{l})({n})");
                }
            }
        }
    }

    #[test]
    fn stirling_and_bell() {
        assert_eq!(stirling2(3, 2), c(3));
        assert_eq!(stirling2(4, 2), c(7));
        assert_eq!(stirling2(0, 0), c(1));
        assert_eq!(stirling2(5, 0), c(0));
        assert_eq!(stirling2(3, 5), c(0));
        assert_eq!(bell(3), c(5));
        assert_eq!(bell(0), c(1));
        assert_eq!(bell(4), c(15));
        assert_eq!(bell(10), c(115_975));
        // B_26 no longer fits in 64 bits
        assert_eq!(bell(26).to_string(), "49631246523618756274");
    }

    #[test]
    fn identity_examples() {
        let r = check_identity(IdentityId::BinomialSignedSum, 4, None).unwrap();
        assert_eq!((r.lhs.clone(), r.rhs.clone(), r.pass), (c(7), c(7), true));
        let r = check_identity(IdentityId::BellSum, 3, None).unwrap();
        assert_eq!((r.lhs, r.rhs), (c(5), c(5)));
        let r = check_identity(IdentityId::StirlingPrefixSum, 3, Some(3)).unwrap();
        assert_eq!((r.lhs, r.rhs), (c(5), c(5)));
        assert!(check_identity(IdentityId::StirlingPrefixSum, 3, Some(4)).is_err());
        assert!(check_identity(IdentityId::StirlingPrefixSum, 3, None).is_err());
        assert!(check_identity(IdentityId::BellSum, 0, None).is_err());
    }

    #[test]
    fn every_identity_holds_for_small_n() {
        for n in 1..=8 {
            for id in IdentityId::ALL {
                let ks: Vec<Option<u32>> =
                    if id.takes_k() { (1..=n).map(Some).collect() } else { vec![None] };
                for k in ks {
                    let r = check_identity(id, n, k).unwrap();
                    assert!(r.pass, "{r}");
                }
            }
        }
    }

    #[test]
    fn identity_names_round_trip() {
        for id in IdentityId::ALL {
            assert_eq!(id.name().parse::<IdentityId>().unwrap(), id);
        }
    }
}
