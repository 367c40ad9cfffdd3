//! Brute-force ground truth. Everything here is plain enumeration over
//! divisors and partitions; it shares no code with the counting routes
//! beyond factorization and binomials.

use std::collections::BTreeMap;

use crate::arith::{binomial, divisors, factorize, BigCount};
use crate::error::{Error, Result};
use crate::partitions::{MultiplicityVector, Partition};

/// Enumeration stops with an error past this many factorizations.
pub const MAX_FACTORIZATIONS: usize = 1_000_000;

/// One unordered factorization, parts sorted nondecreasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FactorizationMultiset {
    parts: Vec<u64>,
}

impl FactorizationMultiset {
    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn product(&self) -> u128 {
        self.parts.iter().map(|&p| p as u128).product()
    }

    pub fn distinct_values(&self) -> usize {
        let mut v = self.parts.clone();
        v.dedup();
        v.len()
    }
}

/// All factorizations of `n` into parts `>= min_part`, in lexicographic order
/// of the sorted part lists.
pub fn enumerate_factorizations(n: u64, min_part: u64) -> Result<std::vec::IntoIter<FactorizationMultiset>> {
    if n < 2 {
        return Err(Error::invalid(format!("oracle enumeration needs n >= 2, got {n}")));
    }
    if min_part < 2 {
        return Err(Error::invalid("oracle parts must be >= 2"));
    }
    let divs: Vec<u64> = divisors(&factorize(n)?).into_iter().map(|d| d as u64).collect();
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    descend(n, min_part, &divs, &mut prefix, &mut out)?;
    for fm in &out {
        assert_eq!(fm.product(), n as u128, "oracle produced a wrong product");
    }
    Ok(out.into_iter())
}

fn descend(
    rest: u64,
    min_part: u64,
    divs: &[u64],
    prefix: &mut Vec<u64>,
    out: &mut Vec<FactorizationMultiset>,
) -> Result<()> {
    for &d in divs {
        if d < min_part || !rest.is_multiple_of(d) {
            continue;
        }
        if d == rest {
            prefix.push(d);
            if out.len() == MAX_FACTORIZATIONS {
                return Err(Error::TooLarge(format!(
                    "more than {MAX_FACTORIZATIONS} factorizations; the oracle refuses this input"
                )));
            }
            out.push(FactorizationMultiset { parts: prefix.clone() });
            prefix.pop();
        } else if d.saturating_mul(d) <= rest {
            prefix.push(d);
            descend(rest / d, d, divs, prefix, out)?;
            prefix.pop();
        }
    }
    Ok(())
}

/// Counts of every factorization function at one `n`, by classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleProfile {
    pub n: u64,
    pub f: u64,
    pub g: u64,
    /// `f_k[k]`
    pub f_k: Vec<u64>,
    /// `g_k[k]`
    pub g_k: Vec<u64>,
    /// `(k, l) -> f_{k,l}`
    pub f_kl: BTreeMap<(usize, usize), u64>,
    /// `h_l[l]`
    pub h_l: Vec<u64>,
}

impl OracleProfile {
    pub fn f_k(&self, k: usize) -> u64 {
        self.f_k.get(k).copied().unwrap_or(0)
    }

    pub fn g_k(&self, k: usize) -> u64 {
        self.g_k.get(k).copied().unwrap_or(0)
    }

    pub fn h_l(&self, l: usize) -> u64 {
        self.h_l.get(l).copied().unwrap_or(0)
    }

    pub fn f_kl(&self, k: usize, l: usize) -> u64 {
        self.f_kl.get(&(k, l)).copied().unwrap_or(0)
    }

    /// Factorizations with `k` parts `>= 1`: pad any `i <= k` part
    /// factorization with ones.
    pub fn big_f_k(&self, k: usize) -> u64 {
        (1..=k).map(|i| self.f_k(i)).sum()
    }

    /// Distinct factorizations with `k` parts `>= 1`: either no part is 1, or
    /// exactly one is.
    pub fn big_g_k(&self, k: usize) -> u64 {
        if k == 0 {
            return 0;
        }
        self.g_k(k) + self.g_k(k - 1)
    }

    /// Largest part count seen.
    pub fn max_k(&self) -> usize {
        self.f_k.len().saturating_sub(1)
    }

    /// Checks the internal bookkeeping identities; returns the first one that
    /// fails.
    pub fn check(&self) -> std::result::Result<(), String> {
        if self.f != self.f_k.iter().sum::<u64>() {
            return Err(format!("n={}: f != sum f_k", self.n));
        }
        if self.g != self.g_k.iter().sum::<u64>() {
            return Err(format!("n={}: g != sum g_k", self.n));
        }
        for l in 0..self.h_l.len() {
            let s: u64 = self.f_kl.iter().filter(|((_, ll), _)| *ll == l).map(|(_, v)| v).sum();
            if s != self.h_l(l) {
                return Err(format!("n={}: h_{l} != sum_k f_(k,{l})", self.n));
            }
        }
        for k in 0..=self.max_k() {
            if self.g_k(k) != self.f_kl(k, k) {
                return Err(format!("n={}: g_{k} != f_({k},{k})", self.n));
            }
            let fk: u64 = (0..=k).map(|l| self.f_kl(k, l)).sum();
            if fk != self.f_k(k) {
                return Err(format!("n={}: f_{k} != sum_l f_({k},l)", self.n));
            }
        }
        Ok(())
    }
}

pub fn profile(n: u64) -> Result<OracleProfile> {
    let mut p = OracleProfile {
        n,
        f: 0,
        g: 0,
        f_k: Vec::new(),
        g_k: Vec::new(),
        f_kl: BTreeMap::new(),
        h_l: Vec::new(),
    };
    let bump = |v: &mut Vec<u64>, i: usize| {
        if v.len() <= i {
            v.resize(i + 1, 0);
        }
        v[i] += 1;
    };
    for fm in enumerate_factorizations(n, 2)? {
        let k = fm.len();
        let l = fm.distinct_values();
        p.f += 1;
        bump(&mut p.f_k, k);
        bump(&mut p.h_l, l);
        *p.f_kl.entry((k, l)).or_insert(0) += 1;
        if k == l {
            p.g += 1;
            bump(&mut p.g_k, k);
        }
    }
    let len = p.f_k.len();
    p.g_k.resize(len, 0);
    Ok(p)
}

/// Every partition of `n`, parts nonincreasing, in descending lexicographic
/// order.
pub fn enumerate_partitions(n: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    collect_partitions(n, n, &mut prefix, &mut out);
    out
}

fn collect_partitions(rest: u32, max_part: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition::new(prefix.clone()).expect("positive parts"));
        return;
    }
    for part in (1..=rest.min(max_part)).rev() {
        prefix.push(part);
        collect_partitions(rest - part, part, prefix, out);
        prefix.pop();
    }
}

/// Partitions of `m` where part `i` comes in `beta_i` colors, counted by
/// listing the uncolored partitions with usable parts and multiplying the
/// number of color multisets for each part value.
pub fn colored_partition_count(b: &MultiplicityVector, m: u32) -> BigCount {
    let colors = |i: u32| b.get(i as usize) as u64;
    let mut total = BigCount::from(0u32);
    for p in enumerate_partitions(m) {
        if p.parts().iter().any(|&i| colors(i) == 0) {
            continue;
        }
        let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
        for &i in p.parts() {
            *counts.entry(i).or_insert(0) += 1;
        }
        let ways: BigCount = counts
            .iter()
            .map(|(&i, &c)| binomial(c + colors(i) - 1, c as i64))
            .product();
        total += ways;
    }
    total
}
