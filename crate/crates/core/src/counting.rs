//! Factorization counting functions of `n`, each available through every
//! route that computes it:
//!
//! | function | partition-sum | recursion | kappa-recursion | fedorov |
//! |----------|---------------|-----------|-----------------|---------|
//! | `F_k`    | yes           | via `f_i` | via `f_i`       | yes     |
//! | `G_k`    | yes           | via `g_i` | via `g_i`       |         |
//! | `f_k`    | `F_k - F_{k-1}` | divisor recursion | yes  | via `F_k` |
//! | `g_k`    | alternating `G_i` sum | divisor recursion | yes |     |
//! | `f_kl`, `h_l` |          |           | yes             |         |
//!
//! Every value depends only on the prime signature of `n`, so all memo
//! tables are keyed by `(Signature, indices)`. A [`Counter`] owns those
//! tables; it is `Send` but not shared, so parallel callers use one per
//! worker. The free functions at the bottom of the module go through a
//! thread-local `Counter`.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::{
    binomial, exact_div, for_each_divisor_power, rational_to_count, to_count, BigCount,
    ExactRational, FactoredInt, Signature,
};
use crate::error::{Error, Result};
use crate::oracle;
use crate::partitions::{
    compositions_of, fedorov_weight, h_weight, multiplicity_vector, partitions_of, theta_sign,
    EulerTransformCache, MultiplicityVector,
};

/// Route used to compute a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    PartitionSum,
    Recursion,
    KappaRecursion,
    Fedorov,
    Oracle,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::PartitionSum,
        Method::Recursion,
        Method::KappaRecursion,
        Method::Fedorov,
        Method::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::PartitionSum => "partition-sum",
            Method::Recursion => "recursion",
            Method::KappaRecursion => "kappa-recursion",
            Method::Fedorov => "fedorov",
            Method::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown method '{s}'")))
    }
}

/// The factorization counting functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CountFunction {
    /// all factorizations, parts >= 2
    F,
    /// factorizations into distinct parts >= 2
    G,
    /// exactly `k` parts >= 2
    Fk,
    /// exactly `k` distinct parts >= 2
    Gk,
    /// exactly `k` parts >= 1
    BigFk,
    /// exactly `k` distinct parts >= 1
    BigGk,
    /// exactly `l` different part values >= 2
    Hl,
    /// exactly `k` parts >= 2 taking exactly `l` different values
    Fkl,
}

impl CountFunction {
    pub const ALL: [CountFunction; 8] = [
        CountFunction::F,
        CountFunction::G,
        CountFunction::Fk,
        CountFunction::Gk,
        CountFunction::BigFk,
        CountFunction::BigGk,
        CountFunction::Hl,
        CountFunction::Fkl,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CountFunction::F => "f",
            CountFunction::G => "g",
            CountFunction::Fk => "f_k",
            CountFunction::Gk => "g_k",
            CountFunction::BigFk => "F_k",
            CountFunction::BigGk => "G_k",
            CountFunction::Hl => "h_l",
            CountFunction::Fkl => "f_kl",
        }
    }

    pub fn takes_k(self) -> bool {
        matches!(
            self,
            CountFunction::Fk
                | CountFunction::Gk
                | CountFunction::BigFk
                | CountFunction::BigGk
                | CountFunction::Fkl
        )
    }

    pub fn takes_l(self) -> bool {
        matches!(self, CountFunction::Hl | CountFunction::Fkl)
    }

    /// Routes able to compute this function, default first.
    pub fn methods(self) -> &'static [Method] {
        use Method::*;
        match self {
            CountFunction::F | CountFunction::Fk => {
                &[Recursion, PartitionSum, KappaRecursion, Fedorov, Oracle]
            }
            CountFunction::BigFk => &[PartitionSum, Fedorov, Recursion, KappaRecursion, Oracle],
            CountFunction::G | CountFunction::Gk => &[Recursion, PartitionSum, KappaRecursion, Oracle],
            CountFunction::BigGk => &[PartitionSum, Recursion, KappaRecursion, Oracle],
            CountFunction::Hl | CountFunction::Fkl => &[KappaRecursion, Oracle],
        }
    }

    pub fn default_method(self) -> Method {
        self.methods()[0]
    }
}

impl fmt::Display for CountFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CountFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CountFunction::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown counting function '{s}'")))
    }
}

/// One evaluation request: a function, its argument and its indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountQuery {
    pub function: CountFunction,
    pub n: FactoredInt,
    pub k: Option<u32>,
    pub l: Option<u32>,
}

impl CountQuery {
    /// Checks that `k` and `l` are given exactly when the function uses them.
    pub fn new(function: CountFunction, n: FactoredInt, k: Option<u32>, l: Option<u32>) -> Result<Self> {
        if function.takes_k() != k.is_some() {
            return Err(Error::invalid(format!(
                "{function} {} an index k",
                if function.takes_k() { "needs" } else { "does not take" }
            )));
        }
        if function.takes_l() != l.is_some() {
            return Err(Error::invalid(format!(
                "{function} {} an index l",
                if function.takes_l() { "needs" } else { "does not take" }
            )));
        }
        Ok(CountQuery { function, n, k, l })
    }
}

type Weights = Arc<Vec<(MultiplicityVector, ExactRational, i32)>>;

/// Default slack allowed above `Omega(n)` for user-supplied `k`.
pub const DEFAULT_K_SLACK: u32 = 64;

/// Memoizing evaluator for all counting functions.
#[derive(Debug)]
pub struct Counter {
    k_slack: u32,
    euler: EulerTransformCache,
    weights: HashMap<u32, Weights>,
    big_f: HashMap<(Signature, u32), BigCount>,
    big_g: HashMap<(Signature, u32), BigCount>,
    fedorov: HashMap<(Signature, u32), BigCount>,
    f_rec: HashMap<(Signature, u32), BigCount>,
    g_rec: HashMap<(Signature, u32), BigCount>,
    f_kappa: HashMap<(Signature, u32), BigCount>,
    g_kappa: HashMap<(Signature, u32), BigCount>,
    f_kl: HashMap<(Signature, u32, u32), BigCount>,
    h_l: HashMap<(Signature, u32), BigCount>,
}

impl Default for Counter {
    fn default() -> Self {
        Self::new()
    }
}

impl Counter {
    pub fn new() -> Self {
        Self::with_k_slack(DEFAULT_K_SLACK)
    }

    /// `k` is rejected when it exceeds `Omega(n) + k_slack`.
    pub fn with_k_slack(k_slack: u32) -> Self {
        Counter {
            k_slack,
            euler: EulerTransformCache::new(),
            weights: HashMap::new(),
            big_f: HashMap::new(),
            big_g: HashMap::new(),
            fedorov: HashMap::new(),
            f_rec: HashMap::new(),
            g_rec: HashMap::new(),
            f_kappa: HashMap::new(),
            g_kappa: HashMap::new(),
            f_kl: HashMap::new(),
            h_l: HashMap::new(),
        }
    }

    pub fn clear(&mut self) {
        *self = Self::with_k_slack(self.k_slack);
    }

    fn check_k(&self, n: &FactoredInt, k: u32) -> Result<()> {
        let cap = n.big_omega() + self.k_slack;
        if k > cap {
            return Err(Error::TooLarge(format!(
                "k = {k} exceeds Omega({n}) + {} = {cap}",
                self.k_slack
            )));
        }
        Ok(())
    }

    fn weights(&mut self, k: u32) -> Weights {
        self.weights
            .entry(k)
            .or_insert_with(|| {
                Arc::new(
                    partitions_of(k)
                        .map(|p| {
                            let b = multiplicity_vector(&p);
                            let h = h_weight(&b);
                            let s = theta_sign(&b);
                            (b, h, s)
                        })
                        .collect(),
                )
            })
            .clone()
    }

    fn partition_sum(&mut self, sig: &Signature, k: u32, signed: bool) -> Result<BigCount> {
        let mut acc = ExactRational::zero();
        for (b, h, s) in self.weights(k).iter() {
            let mu = self.euler.mu(b, sig.as_slice())?;
            if mu.is_zero() {
                continue;
            }
            let term = h * ExactRational::from_integer(BigInt::from(mu));
            if signed && *s < 0 {
                acc -= term;
            } else {
                acc += term;
            }
        }
        let label = if signed { "G_k" } else { "F_k" };
        rational_to_count(&acc, &format!("{label} partition sum at signature {sig}, k={k}"))
    }

    /// `F_k(n)` as a sum over the partitions of `k`.
    pub fn big_f(&mut self, n: &FactoredInt, k: u32) -> Result<BigCount> {
        self.check_k(n, k)?;
        let sig = n.signature();
        if let Some(v) = self.big_f.get(&(sig.clone(), k)) {
            return Ok(v.clone());
        }
        let v = self.partition_sum(&sig, k, false)?;
        self.big_f.insert((sig, k), v.clone());
        Ok(v)
    }

    /// `G_k(n)` as a signed sum over the partitions of `k`.
    pub fn big_g(&mut self, n: &FactoredInt, k: u32) -> Result<BigCount> {
        self.check_k(n, k)?;
        let sig = n.signature();
        if let Some(v) = self.big_g.get(&(sig.clone(), k)) {
            return Ok(v.clone());
        }
        let v = self.partition_sum(&sig, k, true)?;
        self.big_g.insert((sig, k), v.clone());
        Ok(v)
    }

    /// `F_k(n)` as a sum over the compositions of `k`.
    pub fn fedorov_big_f(&mut self, n: &FactoredInt, k: u32) -> Result<BigCount> {
        self.check_k(n, k)?;
        let sig = n.signature();
        if let Some(v) = self.fedorov.get(&(sig.clone(), k)) {
            return Ok(v.clone());
        }
        let v = if k == 0 {
            // only the empty composition, whose multiplicity vector is empty
            BigCount::from(u8::from(sig.is_empty()))
        } else {
            let mut acc = ExactRational::zero();
            for c in compositions_of(k)? {
                let b = c.multiplicity_vector();
                let mu = self.euler.mu(&b, sig.as_slice())?;
                if !mu.is_zero() {
                    acc += fedorov_weight(&c) * ExactRational::from_integer(BigInt::from(mu));
                }
            }
            rational_to_count(&acc, &format!("composition sum at signature {sig}, k={k}"))?
        };
        self.fedorov.insert((sig, k), v.clone());
        Ok(v)
    }

    /// `f_k(n)` by the divisor recursion `k f_k(n) = sum f_{k-i}(n / d^i)`.
    pub fn f_k_rec(&mut self, n: &FactoredInt, k: u32) -> Result<BigCount> {
        self.check_k(n, k)?;
        self.divisor_rec(&n.signature(), k, false)
    }

    /// `g_k(n)` by the signed divisor recursion.
    pub fn g_k_rec(&mut self, n: &FactoredInt, k: u32) -> Result<BigCount> {
        self.check_k(n, k)?;
        self.divisor_rec(&n.signature(), k, true)
    }

    fn divisor_rec(&mut self, sig: &Signature, k: u32, signed: bool) -> Result<BigCount> {
        if sig.is_empty() {
            return Ok(BigCount::from(u8::from(k == 0)));
        }
        if k == 0 || k > sig.big_omega() {
            return Ok(BigCount::zero());
        }
        let memo = if signed { &self.g_rec } else { &self.f_rec };
        if let Some(v) = memo.get(&(sig.clone(), k)) {
            return Ok(v.clone());
        }
        let exps = sig.as_slice();
        let mut children = Vec::new();
        for_each_divisor_power(exps, |c, i| {
            if i <= k {
                let rest: Vec<u32> = exps.iter().zip(c).map(|(&e, &x)| e - i * x).collect();
                children.push((Signature::from_exponents(&rest), i));
            }
        });
        let mut acc = BigInt::zero();
        for (child, i) in children {
            let v = BigInt::from(self.divisor_rec(&child, k - i, signed)?);
            if signed && i % 2 == 0 {
                acc -= v;
            } else {
                acc += v;
            }
        }
        let label = if signed { "g_k" } else { "f_k" };
        let ctx = format!("{label} divisor recursion at signature {sig}, k={k}");
        let v = to_count(exact_div(acc, k as u64, &ctx)?, &ctx)?;
        let memo = if signed { &mut self.g_rec } else { &mut self.f_rec };
        memo.insert((sig.clone(), k), v.clone());
        Ok(v)
    }

    /// `f_k(n) = F_k(n) - F_{k-1}(n)`; for `k = 0` this is `F_0(n) = [n = 1]`.
    pub fn f_from_big_f(&mut self, n: &FactoredInt, k: u32) -> Result<BigCount> {
        let fk = BigInt::from(self.big_f(n, k)?);
        if k == 0 {
            return to_count(fk, "f_k from F_k");
        }
        let prev = BigInt::from(self.big_f(n, k - 1)?);
        to_count(fk - prev, &format!("f_k from F_k at n={n}, k={k}"))
    }

    /// `g_k(n) = sum_{i=0}^{k} (-1)^{k-i} G_i(n)`. The `i = 0` term vanishes
    /// for `n >= 2` and makes the identity hold at `n = 1` as well.
    pub fn g_from_big_g(&mut self, n: &FactoredInt, k: u32) -> Result<BigCount> {
        let mut acc = BigInt::zero();
        for i in 0..=k {
            let v = BigInt::from(self.big_g(n, i)?);
            if (k - i).is_multiple_of(2) {
                acc += v;
            } else {
                acc -= v;
            }
        }
        to_count(acc, &format!("g_k from G_k at n={n}, k={k}"))
    }

    /// `f_k(n)` from the same alternating-sum identity applied to the
    /// composition route.
    pub fn f_from_fedorov(&mut self, n: &FactoredInt, k: u32) -> Result<BigCount> {
        let fk = BigInt::from(self.fedorov_big_f(n, k)?);
        if k == 0 {
            return to_count(fk, "f_k from composition sum");
        }
        let prev = BigInt::from(self.fedorov_big_f(n, k - 1)?);
        to_count(fk - prev, &format!("f_k from composition sum at n={n}, k={k}"))
    }

    /// `f(n) = F_Omega(n)`.
    pub fn f_total(&mut self, n: &FactoredInt) -> Result<BigCount> {
        self.f_total_with_bound(n, n.big_omega())
    }

    /// `f(n) = F_m(n)` for any `m >= Omega(n)`.
    pub fn f_total_with_bound(&mut self, n: &FactoredInt, m: u32) -> Result<BigCount> {
        require_composite_or_prime(n, "f")?;
        if m < n.big_omega() {
            return Err(Error::invalid(format!(
                "bound {m} is below Omega({n}) = {}",
                n.big_omega()
            )));
        }
        self.big_f(n, m)
    }

    /// `g(n) = sum_{i=0}^{floor((Omega-1)/2)} G_{Omega-2i}(n)`.
    pub fn g_total(&mut self, n: &FactoredInt) -> Result<BigCount> {
        require_composite_or_prime(n, "g")?;
        let omega = n.big_omega();
        let mut acc = BigCount::zero();
        for i in 0..=(omega - 1) / 2 {
            acc += self.big_g(n, omega - 2 * i)?;
        }
        Ok(acc)
    }

    /// Prime index for the kappa recursions: the caller's prime if it divides
    /// `n`, otherwise the smallest prime factor.
    fn kappa_index(n: &FactoredInt, prime: Option<u64>) -> Result<usize> {
        match prime {
            None => Ok(0),
            Some(p) => n
                .factors()
                .iter()
                .position(|&(q, _)| q == p)
                .ok_or_else(|| Error::invalid(format!("prime {p} does not divide {n}"))),
        }
    }

    /// `f_k(n)` by `kappa_pi(n) f_k(n) = sum f_{k-i}(n / d^i) kappa_pi(d)`.
    pub fn f_k_kappa(&mut self, n: &FactoredInt, k: u32) -> Result<BigCount> {
        self.f_k_kappa_with_prime(n, k, None)
    }

    pub fn f_k_kappa_with_prime(&mut self, n: &FactoredInt, k: u32, prime: Option<u64>) -> Result<BigCount> {
        self.check_k(n, k)?;
        if n.is_one() {
            return Ok(BigCount::from(u8::from(k == 0)));
        }
        let pi = Self::kappa_index(n, prime)?;
        self.kappa_rec(&n.exponents(), pi, k, false)
    }

    /// Signed variant of [`Counter::f_k_kappa`] computing `g_k(n)`.
    pub fn g_k_kappa(&mut self, n: &FactoredInt, k: u32) -> Result<BigCount> {
        self.g_k_kappa_with_prime(n, k, None)
    }

    pub fn g_k_kappa_with_prime(&mut self, n: &FactoredInt, k: u32, prime: Option<u64>) -> Result<BigCount> {
        self.check_k(n, k)?;
        if n.is_one() {
            return Ok(BigCount::from(u8::from(k == 0)));
        }
        let pi = Self::kappa_index(n, prime)?;
        self.kappa_rec(&n.exponents(), pi, k, true)
    }

    fn kappa_rec(&mut self, exps: &[u32], pi: usize, k: u32, signed: bool) -> Result<BigCount> {
        let sig = Signature::from_exponents(exps);
        if sig.is_empty() {
            return Ok(BigCount::from(u8::from(k == 0)));
        }
        if k == 0 || k > sig.big_omega() {
            return Ok(BigCount::zero());
        }
        let memo = if signed { &self.g_kappa } else { &self.f_kappa };
        if let Some(v) = memo.get(&(sig.clone(), k)) {
            return Ok(v.clone());
        }
        let pi = pivot(exps, pi);
        let mut children = Vec::new();
        for_each_divisor_power(exps, |c, i| {
            if i <= k && c[pi] > 0 {
                let rest: Vec<u32> = exps.iter().zip(c).map(|(&e, &x)| e - i * x).collect();
                children.push((rest, i, c[pi]));
            }
        });
        let mut acc = BigInt::zero();
        for (rest, i, weight) in children {
            let v = BigInt::from(self.kappa_rec(&rest, pi, k - i, signed)?) * weight;
            if signed && i % 2 == 0 {
                acc -= v;
            } else {
                acc += v;
            }
        }
        let label = if signed { "g_k" } else { "f_k" };
        let ctx = format!("{label} kappa recursion at signature {sig}, k={k}");
        let v = to_count(exact_div(acc, exps[pi] as u64, &ctx)?, &ctx)?;
        let memo = if signed { &mut self.g_kappa } else { &mut self.f_kappa };
        memo.insert((sig, k), v.clone());
        Ok(v)
    }

    /// `f_{k,l}(n)`: `k` parts >= 2 with exactly `l` different values, by
    /// the kappa form of the logarithmic-derivative recursion.
    pub fn f_kl(&mut self, n: &FactoredInt, k: u32, l: u32) -> Result<BigCount> {
        self.f_kl_with_prime(n, k, l, None)
    }

    pub fn f_kl_with_prime(&mut self, n: &FactoredInt, k: u32, l: u32, prime: Option<u64>) -> Result<BigCount> {
        self.check_k(n, k)?;
        if n.is_one() {
            return Ok(BigCount::from(u8::from(k == 0 && l == 0)));
        }
        let pi = Self::kappa_index(n, prime)?;
        self.f_kl_rec(&n.exponents(), pi, k, l)
    }

    fn f_kl_rec(&mut self, exps: &[u32], pi: usize, k: u32, l: u32) -> Result<BigCount> {
        let sig = Signature::from_exponents(exps);
        if sig.is_empty() {
            return Ok(BigCount::from(u8::from(k == 0 && l == 0)));
        }
        if k == 0 || l == 0 || l > k || k > sig.big_omega() {
            return Ok(BigCount::zero());
        }
        if let Some(v) = self.f_kl.get(&(sig.clone(), k, l)) {
            return Ok(v.clone());
        }
        let pi = pivot(exps, pi);
        let mut children = Vec::new();
        for_each_divisor_power(exps, |c, i| {
            if i <= k && c[pi] > 0 {
                let rest: Vec<u32> = exps.iter().zip(c).map(|(&e, &x)| e - i * x).collect();
                children.push((rest, i, c[pi]));
            }
        });
        let mut acc = BigInt::zero();
        for (rest, i, weight) in children {
            // binomial(i, j) vanishes for j > i
            for j in 1..=l.min(i) {
                let inner = self.f_kl_rec(&rest, pi, k - i, l - j)?;
                if inner.is_zero() {
                    continue;
                }
                let term = BigInt::from(inner * binomial(i as u64, j as i64)) * weight;
                if j % 2 == 1 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
        }
        let ctx = format!("f_kl kappa recursion at signature {sig}, k={k}, l={l}");
        let v = to_count(exact_div(acc, exps[pi] as u64, &ctx)?, &ctx)?;
        self.f_kl.insert((sig, k, l), v.clone());
        Ok(v)
    }

    /// `h_l(n)`: factorizations with exactly `l` different part values.
    pub fn h_l(&mut self, n: &FactoredInt, l: u32) -> Result<BigCount> {
        self.h_l_with_prime(n, l, None)
    }

    pub fn h_l_with_prime(&mut self, n: &FactoredInt, l: u32, prime: Option<u64>) -> Result<BigCount> {
        if n.is_one() {
            return Ok(BigCount::from(u8::from(l == 0)));
        }
        let pi = Self::kappa_index(n, prime)?;
        self.h_l_rec(&n.exponents(), pi, l)
    }

    fn h_l_rec(&mut self, exps: &[u32], pi: usize, l: u32) -> Result<BigCount> {
        let sig = Signature::from_exponents(exps);
        if sig.is_empty() {
            return Ok(BigCount::from(u8::from(l == 0)));
        }
        if l == 0 || l > sig.big_omega() {
            return Ok(BigCount::zero());
        }
        if let Some(v) = self.h_l.get(&(sig.clone(), l)) {
            return Ok(v.clone());
        }
        let pi = pivot(exps, pi);
        let mut children = Vec::new();
        for_each_divisor_power(exps, |c, i| {
            if c[pi] > 0 {
                let rest: Vec<u32> = exps.iter().zip(c).map(|(&e, &x)| e - i * x).collect();
                children.push((rest, i, c[pi]));
            }
        });
        let mut acc = BigInt::zero();
        for (rest, i, weight) in children {
            for j in 1..=l.min(i) {
                let inner = self.h_l_rec(&rest, pi, l - j)?;
                if inner.is_zero() {
                    continue;
                }
                let term = BigInt::from(inner * binomial(i as u64, j as i64)) * weight;
                if j % 2 == 1 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
        }
        let ctx = format!("h_l kappa recursion at signature {sig}, l={l}");
        let v = to_count(exact_div(acc, exps[pi] as u64, &ctx)?, &ctx)?;
        self.h_l.insert((sig, l), v.clone());
        Ok(v)
    }

    /// Evaluates `q` through `method`.
    pub fn evaluate(&mut self, q: &CountQuery, method: Method) -> Result<BigCount> {
        use CountFunction as Fun;
        use Method::*;
        if !q.function.methods().contains(&method) {
            return Err(Error::invalid(format!(
                "method {method} is not available for {}",
                q.function
            )));
        }
        if method == Oracle {
            return oracle_value(q);
        }
        let n = &q.n;
        let k = q.k.unwrap_or(0);
        let l = q.l.unwrap_or(0);
        if matches!(q.function, Fun::F | Fun::G) {
            require_composite_or_prime(n, q.function.name())?;
        }
        match (q.function, method) {
            (Fun::F, PartitionSum) => self.f_total(n),
            (Fun::F, Fedorov) => self.fedorov_big_f(n, n.big_omega()),
            (Fun::F, Recursion) => self.sum_over_k(n, |c, n, k| c.f_k_rec(n, k)),
            (Fun::F, KappaRecursion) => self.sum_over_k(n, |c, n, k| c.f_k_kappa(n, k)),
            (Fun::G, PartitionSum) => self.g_total(n),
            (Fun::G, Recursion) => self.sum_over_k(n, |c, n, k| c.g_k_rec(n, k)),
            (Fun::G, KappaRecursion) => self.sum_over_k(n, |c, n, k| c.g_k_kappa(n, k)),
            (Fun::Fk, PartitionSum) => self.f_from_big_f(n, k),
            (Fun::Fk, Fedorov) => self.f_from_fedorov(n, k),
            (Fun::Fk, Recursion) => self.f_k_rec(n, k),
            (Fun::Fk, KappaRecursion) => self.f_k_kappa(n, k),
            (Fun::Gk, PartitionSum) => self.g_from_big_g(n, k),
            (Fun::Gk, Recursion) => self.g_k_rec(n, k),
            (Fun::Gk, KappaRecursion) => self.g_k_kappa(n, k),
            (Fun::BigFk, PartitionSum) => self.big_f(n, k),
            (Fun::BigFk, Fedorov) => self.fedorov_big_f(n, k),
            (Fun::BigFk, Recursion) => self.prefix_sum(n, k, |c, n, i| c.f_k_rec(n, i)),
            (Fun::BigFk, KappaRecursion) => self.prefix_sum(n, k, |c, n, i| c.f_k_kappa(n, i)),
            (Fun::BigGk, PartitionSum) => self.big_g(n, k),
            (Fun::BigGk, Recursion) => self.g_pair(n, k, |c, n, i| c.g_k_rec(n, i)),
            (Fun::BigGk, KappaRecursion) => self.g_pair(n, k, |c, n, i| c.g_k_kappa(n, i)),
            (Fun::Hl, KappaRecursion) => self.h_l(n, l),
            (Fun::Fkl, KappaRecursion) => self.f_kl(n, k, l),
            _ => unreachable!("method table and dispatch disagree"),
        }
    }

    fn sum_over_k(
        &mut self,
        n: &FactoredInt,
        mut f: impl FnMut(&mut Self, &FactoredInt, u32) -> Result<BigCount>,
    ) -> Result<BigCount> {
        let mut acc = BigCount::zero();
        for k in 1..=n.big_omega() {
            acc += f(self, n, k)?;
        }
        Ok(acc)
    }

    /// `F_k = sum_{i<=k} f_i`, with `f_0(n) = [n = 1]` so `n = 1` works too.
    fn prefix_sum(
        &mut self,
        n: &FactoredInt,
        k: u32,
        mut f: impl FnMut(&mut Self, &FactoredInt, u32) -> Result<BigCount>,
    ) -> Result<BigCount> {
        self.check_k(n, k)?;
        if k == 0 {
            return Ok(BigCount::from(u8::from(n.is_one())));
        }
        let mut acc = BigCount::zero();
        for i in 0..=k.min(n.big_omega()) {
            acc += f(self, n, i)?;
        }
        Ok(acc)
    }

    /// `G_k = g_k + g_{k-1}`, with `G_0(n) = [n = 1]`.
    fn g_pair(
        &mut self,
        n: &FactoredInt,
        k: u32,
        mut f: impl FnMut(&mut Self, &FactoredInt, u32) -> Result<BigCount>,
    ) -> Result<BigCount> {
        self.check_k(n, k)?;
        if k == 0 {
            return Ok(BigCount::from(u8::from(n.is_one())));
        }
        Ok(f(self, n, k)? + f(self, n, k - 1)?)
    }
}

/// Stays on the current exponent's prime while it still divides; otherwise
/// switches to the first prime present.
fn pivot(exps: &[u32], pi: usize) -> usize {
    if exps[pi] > 0 {
        pi
    } else {
        exps.iter().position(|&e| e > 0).expect("pivot on n = 1")
    }
}

fn require_composite_or_prime(n: &FactoredInt, what: &str) -> Result<()> {
    if n.is_one() {
        return Err(Error::invalid(format!("{what}(n) is defined for n >= 2")));
    }
    Ok(())
}

fn oracle_value(q: &CountQuery) -> Result<BigCount> {
    let k = q.k.unwrap_or(0) as usize;
    let l = q.l.unwrap_or(0) as usize;
    let n = u64::try_from(q.n.value())
        .map_err(|_| Error::TooLarge(format!("{} is beyond the oracle's range", q.n)))?;
    if n == 1 {
        // empty factorization only
        let v = match q.function {
            CountFunction::F | CountFunction::G => {
                return Err(Error::invalid(format!("{}(n) is defined for n >= 2", q.function)))
            }
            CountFunction::Fk | CountFunction::Gk => u8::from(k == 0),
            CountFunction::BigFk => 1,
            CountFunction::BigGk => u8::from(k <= 1),
            CountFunction::Hl => u8::from(l == 0),
            CountFunction::Fkl => u8::from(k == 0 && l == 0),
        };
        return Ok(BigCount::from(v));
    }
    let p = oracle::profile(n)?;
    let v = match q.function {
        CountFunction::F => p.f,
        CountFunction::G => p.g,
        CountFunction::Fk => p.f_k(k),
        CountFunction::Gk => p.g_k(k),
        CountFunction::BigFk => p.big_f_k(k),
        CountFunction::BigGk => p.big_g_k(k),
        CountFunction::Hl => p.h_l(l),
        CountFunction::Fkl => p.f_kl(k, l),
    };
    Ok(BigCount::from(v))
}

thread_local! {
    static COUNTER: RefCell<Counter> = RefCell::new(Counter::new());
}

/// Runs `f` against this thread's shared [`Counter`].
pub fn with_counter<T>(f: impl FnOnce(&mut Counter) -> T) -> T {
    COUNTER.with(|c| f(&mut c.borrow_mut()))
}

pub fn big_f(n: &FactoredInt, k: u32) -> Result<BigCount> {
    with_counter(|c| c.big_f(n, k))
}

pub fn big_g(n: &FactoredInt, k: u32) -> Result<BigCount> {
    with_counter(|c| c.big_g(n, k))
}

pub fn fedorov_big_f(n: &FactoredInt, k: u32) -> Result<BigCount> {
    with_counter(|c| c.fedorov_big_f(n, k))
}

pub fn f_k_rec(n: &FactoredInt, k: u32) -> Result<BigCount> {
    with_counter(|c| c.f_k_rec(n, k))
}

pub fn g_k_rec(n: &FactoredInt, k: u32) -> Result<BigCount> {
    with_counter(|c| c.g_k_rec(n, k))
}

pub fn f_from_big_f(n: &FactoredInt, k: u32) -> Result<BigCount> {
    with_counter(|c| c.f_from_big_f(n, k))
}

pub fn g_from_big_g(n: &FactoredInt, k: u32) -> Result<BigCount> {
    with_counter(|c| c.g_from_big_g(n, k))
}

pub fn f_total(n: &FactoredInt) -> Result<BigCount> {
    with_counter(|c| c.f_total(n))
}

pub fn g_total(n: &FactoredInt) -> Result<BigCount> {
    with_counter(|c| c.g_total(n))
}

pub fn f_kl(n: &FactoredInt, k: u32, l: u32) -> Result<BigCount> {
    with_counter(|c| c.f_kl(n, k, l))
}

pub fn h_l(n: &FactoredInt, l: u32) -> Result<BigCount> {
    with_counter(|c| c.h_l(n, l))
}

pub fn f_k_kappa(n: &FactoredInt, k: u32) -> Result<BigCount> {
    with_counter(|c| c.f_k_kappa(n, k))
}

pub fn g_k_kappa(n: &FactoredInt, k: u32) -> Result<BigCount> {
    with_counter(|c| c.g_k_kappa(n, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::factorize;

    fn fi(n: u64) -> FactoredInt {
        factorize(n).unwrap()
    }

    fn c(v: u64) -> BigCount {
        BigCount::from(v)
    }

    #[test]
    fn big_f_examples() {
        let mut ctr = Counter::new();
        assert_eq!(ctr.big_f(&fi(36), 2).unwrap(), c(5));
        assert_eq!(ctr.big_f(&fi(13), 3).unwrap(), c(1));
        for n in [1, 2, 36, 97, 360] {
            assert_eq!(ctr.big_f(&fi(n), 1).unwrap(), c(1));
        }
        assert_eq!(ctr.big_f(&fi(1), 0).unwrap(), c(1));
        assert_eq!(ctr.big_f(&fi(36), 0).unwrap(), c(0));
        assert_eq!(ctr.big_f(&fi(1), 7).unwrap(), c(1));
    }

    #[test]
    fn big_g_examples() {
        let mut ctr = Counter::new();
        assert_eq!(ctr.big_g(&fi(36), 2).unwrap(), c(4));
        assert_eq!(ctr.big_g(&fi(13), 3).unwrap(), c(0));
        assert_eq!(ctr.big_g(&fi(36), 1).unwrap(), c(1));
        assert_eq!(ctr.big_g(&fi(1), 1).unwrap(), c(1));
        assert_eq!(ctr.big_g(&fi(1), 2).unwrap(), c(0));
    }

    #[test]
    fn divisor_recursion_examples() {
        let mut ctr = Counter::new();
        assert_eq!(ctr.f_k_rec(&fi(36), 2).unwrap(), c(4));
        let f12: BigCount = (1..=3).map(|k| ctr.f_k_rec(&fi(12), k).unwrap()).sum();
        assert_eq!(f12, c(4));
        assert_eq!(ctr.f_k_rec(&fi(1), 0).unwrap(), c(1));
        assert_eq!(ctr.f_k_rec(&fi(1), 3).unwrap(), c(0));
        assert_eq!(ctr.g_k_rec(&fi(36), 2).unwrap(), c(3));
        assert_eq!(ctr.g_k_rec(&fi(36), 1).unwrap(), c(1));
        assert_eq!(ctr.g_k_rec(&fi(49), 2).unwrap(), c(0));
    }

    #[test]
    fn conversions() {
        let mut ctr = Counter::new();
        assert_eq!(ctr.f_from_big_f(&fi(36), 2).unwrap(), c(4));
        assert_eq!(ctr.g_from_big_g(&fi(36), 2).unwrap(), c(3));
        assert_eq!(ctr.f_from_big_f(&fi(36), 1).unwrap(), c(1));
        for k in 0..5 {
            assert_eq!(
                ctr.g_from_big_g(&fi(1), k).unwrap(),
                c(u64::from(k == 0)),
                "g_{k}(1)"
            );
        }
    }

    #[test]
    fn totals() {
        let mut ctr = Counter::new();
        assert_eq!(ctr.f_total(&fi(36)).unwrap(), c(9));
        assert_eq!(ctr.f_total(&fi(12)).unwrap(), c(4));
        assert_eq!(ctr.f_total(&fi(30)).unwrap(), c(5));
        assert_eq!(ctr.g_total(&fi(36)).unwrap(), c(5));
        assert_eq!(ctr.g_total(&fi(30)).unwrap(), c(5));
        assert_eq!(ctr.g_total(&fi(101)).unwrap(), c(1));
        assert!(ctr.f_total(&fi(1)).is_err());
        assert!(ctr.g_total(&fi(1)).is_err());
        for m in 4..10 {
            assert_eq!(ctr.f_total_with_bound(&fi(36), m).unwrap(), c(9));
        }
        assert!(ctr.f_total_with_bound(&fi(36), 3).is_err());
    }

    #[test]
    fn f_kl_examples() {
        let mut ctr = Counter::new();
        assert_eq!(ctr.f_kl(&fi(36), 3, 2).unwrap(), c(2));
        assert_eq!(ctr.f_kl(&fi(36), 2, 2).unwrap(), c(3));
        assert_eq!(ctr.f_kl(&fi(1), 0, 0).unwrap(), c(1));
        assert_eq!(ctr.f_kl(&fi(1), 1, 0).unwrap(), c(0));
    }

    #[test]
    fn h_l_examples() {
        let mut ctr = Counter::new();
        assert_eq!(ctr.h_l(&fi(36), 2).unwrap(), c(6));
        // (36), (6,6)
        assert_eq!(ctr.h_l(&fi(36), 1).unwrap(), c(2));
        assert_eq!(ctr.h_l(&fi(1), 0).unwrap(), c(1));
    }

    #[test]
    fn kappa_examples() {
        let mut ctr = Counter::new();
        assert_eq!(ctr.f_k_kappa(&fi(36), 2).unwrap(), c(4));
        assert_eq!(ctr.g_k_kappa(&fi(36), 2).unwrap(), c(3));
        assert_eq!(ctr.f_k_kappa(&fi(27), 2).unwrap(), c(1));
    }

    #[test]
    fn kappa_prime_override_gives_same_values() {
        for n in [36u64, 72, 360, 900, 1260] {
            let n = fi(n);
            for &(p, _) in n.factors() {
                for k in 0..=n.big_omega() {
                    let mut fresh = Counter::new();
                    let mut base = Counter::new();
                    assert_eq!(
                        fresh.f_k_kappa_with_prime(&n, k, Some(p)).unwrap(),
                        base.f_k_rec(&n, k).unwrap()
                    );
                    let mut fresh = Counter::new();
                    assert_eq!(
                        fresh.g_k_kappa_with_prime(&n, k, Some(p)).unwrap(),
                        base.g_k_rec(&n, k).unwrap()
                    );
                    for l in 0..=k {
                        let mut a = Counter::new();
                        let mut b = Counter::new();
                        assert_eq!(
                            a.f_kl_with_prime(&n, k, l, Some(p)).unwrap(),
                            b.f_kl(&n, k, l).unwrap()
                        );
                    }
                }
                let mut a = Counter::new();
                let mut b = Counter::new();
                assert_eq!(a.h_l_with_prime(&n, 2, Some(p)).unwrap(), b.h_l(&n, 2).unwrap());
            }
        }
        assert!(Counter::new().f_kl_with_prime(&fi(36), 2, 1, Some(5)).is_err());
    }

    #[test]
    fn fedorov_examples() {
        let mut ctr = Counter::new();
        assert_eq!(ctr.fedorov_big_f(&fi(36), 2).unwrap(), c(5));
        for k in 1..6 {
            assert_eq!(ctr.fedorov_big_f(&fi(31), k).unwrap(), c(1));
        }
        assert_eq!(ctr.fedorov_big_f(&fi(1), 1).unwrap(), c(1));
        assert_eq!(ctr.fedorov_big_f(&fi(1), 0).unwrap(), c(1));
        assert_eq!(ctr.fedorov_big_f(&fi(6), 0).unwrap(), c(0));
    }

    #[test]
    fn k_slack_limits_queries() {
        let mut ctr = Counter::with_k_slack(2);
        assert!(ctr.big_f(&fi(36), 6).is_ok());
        assert!(matches!(ctr.big_f(&fi(36), 7), Err(Error::TooLarge(_))));
        assert!(ctr.f_k_rec(&fi(2), 4).is_err());
    }

    #[test]
    fn query_arity() {
        assert!(CountQuery::new(CountFunction::F, fi(36), None, None).is_ok());
        assert!(CountQuery::new(CountFunction::F, fi(36), Some(2), None).is_err());
        assert!(CountQuery::new(CountFunction::Fkl, fi(36), Some(2), None).is_err());
        assert!(CountQuery::new(CountFunction::Hl, fi(36), None, Some(2)).is_ok());
    }

    #[test]
    fn evaluate_every_route_for_36() {
        let mut ctr = Counter::new();
        let cases = [
            (CountFunction::F, None, None, 9),
            (CountFunction::G, None, None, 5),
            (CountFunction::Fk, Some(2), None, 4),
            (CountFunction::Gk, Some(2), None, 3),
            (CountFunction::Hl, None, Some(2), 6),
            (CountFunction::Fkl, Some(3), Some(2), 2),
            (CountFunction::BigFk, Some(2), None, 5),
            (CountFunction::BigGk, Some(2), None, 4),
        ];
        for (fun, k, l, want) in cases {
            let q = CountQuery::new(fun, fi(36), k, l).unwrap();
            for &m in fun.methods() {
                assert_eq!(ctr.evaluate(&q, m).unwrap(), c(want), "{fun} via {m}");
            }
        }
        let q = CountQuery::new(CountFunction::Hl, fi(36), None, Some(2)).unwrap();
        assert!(ctr.evaluate(&q, Method::Fedorov).is_err());
    }

    #[test]
    fn evaluate_at_one() {
        let mut ctr = Counter::new();
        for k in 0..4 {
            let q = CountQuery::new(CountFunction::BigFk, fi(1), Some(k), None).unwrap();
            for &m in CountFunction::BigFk.methods() {
                assert_eq!(ctr.evaluate(&q, m).unwrap(), c(1), "F_{k}(1) via {m}");
            }
            let q = CountQuery::new(CountFunction::BigGk, fi(1), Some(k), None).unwrap();
            for &m in CountFunction::BigGk.methods() {
                assert_eq!(ctr.evaluate(&q, m).unwrap(), c(u64::from(k <= 1)), "G_{k}(1) via {m}");
            }
        }
    }

    #[test]
    fn names_round_trip() {
        for f in CountFunction::ALL {
            assert_eq!(f.name().parse::<CountFunction>().unwrap(), f);
        }
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("F".parse::<CountFunction>().is_err());
    }

    #[test]
    fn free_functions_use_thread_cache() {
        assert_eq!(f_total(&fi(36)).unwrap(), c(9));
        assert_eq!(g_total(&fi(36)).unwrap(), c(5));
        assert_eq!(h_l(&fi(36), 2).unwrap(), c(6));
        assert_eq!(f_kl(&fi(36), 3, 2).unwrap(), c(2));
        assert_eq!(big_f(&fi(36), 2).unwrap(), c(5));
        assert_eq!(big_g(&fi(36), 2).unwrap(), c(4));
        assert_eq!(fedorov_big_f(&fi(36), 2).unwrap(), c(5));
        assert_eq!(f_k_rec(&fi(36), 2).unwrap(), c(4));
        assert_eq!(g_k_rec(&fi(36), 2).unwrap(), c(3));
        assert_eq!(f_k_kappa(&fi(36), 2).unwrap(), c(4));
        assert_eq!(g_k_kappa(&fi(36), 2).unwrap(), c(3));
        assert_eq!(f_from_big_f(&fi(36), 2).unwrap(), c(4));
        assert_eq!(g_from_big_g(&fi(36), 2).unwrap(), c(3));
    }
}
