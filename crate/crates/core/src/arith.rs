//! Integer and rational plumbing: factorization, prime signatures,
//! divisor-power enumeration and a few exact-division helpers.

use std::fmt;
use std::sync::RwLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision nonnegative integer; every counting value is one.
pub type BigCount = BigUint;

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type ExactRational = BigRational;

/// Primes found so far, in increasing order. Extended under the write lock
/// so every reader sees either the old or the fully extended table.
static PRIMES: RwLock<Vec<u64>> = RwLock::new(Vec::new());

fn sieve_primes(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// Upper bound of the cached sieve. Trial division beyond it falls back to
/// odd candidates.
const SIEVE_CAP: u64 = 1 << 22;

/// Runs `f` over the cached primes, first making sure they cover `limit`
/// (capped at `SIEVE_CAP`).
fn with_primes_covering<T>(limit: u64, f: impl FnOnce(&[u64]) -> T) -> T {
    let limit = limit.min(SIEVE_CAP);
    {
        let guard = PRIMES.read().unwrap();
        if guard.last().is_some_and(|&p| p >= limit) {
            return f(&guard);
        }
    }
    let mut guard = PRIMES.write().unwrap();
    let covered = guard.last().is_some_and(|&p| p >= limit);
    if !covered {
        let mut bound = 64u64.max(guard.last().copied().unwrap_or(0) * 2);
        loop {
            let primes = sieve_primes(bound);
            if primes.last().is_some_and(|&p| p >= limit) || bound >= SIEVE_CAP {
                *guard = primes;
                break;
            }
            bound = (bound * 2).min(SIEVE_CAP);
        }
    }
    f(&guard)
}

/// The first `count` primes.
pub fn first_primes(count: usize) -> Vec<u64> {
    let mut limit = 64u64;
    loop {
        let got = with_primes_covering(limit, |ps| {
            (ps.len() >= count).then(|| ps[..count].to_vec())
        });
        if let Some(v) = got {
            return v;
        }
        assert!(limit < SIEVE_CAP, "prime table exhausted");
        limit *= 2;
    }
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && smallest_prime_factor(n).map(|p| p == n).unwrap_or(false)
}

/// Sorted nonincreasing list of prime exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Signature(Vec<u32>);

impl Signature {
    /// Builds a signature from exponents in any order; zeros are dropped.
    pub fn from_exponents(exps: &[u32]) -> Self {
        let mut v: Vec<u32> = exps.iter().copied().filter(|&e| e > 0).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        Signature(v)
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    /// Total number of prime factors with multiplicity.
    pub fn big_omega(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// A positive integer paired with its prime factorization.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FactoredInt {
    value: u128,
    factors: Vec<(u64, u32)>,
}

impl FactoredInt {
    pub fn one() -> Self {
        FactoredInt { value: 1, factors: Vec::new() }
    }

    /// Builds from `(prime, exponent)` pairs. Primes must be strictly
    /// increasing and exponents positive; the value must fit in 128 bits.
    pub fn from_factors(factors: Vec<(u64, u32)>) -> Result<Self> {
        let mut value: u128 = 1;
        let mut prev = 0u64;
        for &(p, e) in &factors {
            if p <= prev {
                return Err(Error::invalid("primes must be strictly increasing"));
            }
            if e == 0 {
                return Err(Error::invalid(format!("zero exponent for prime {p}")));
            }
            if !is_prime(p) {
                return Err(Error::invalid(format!("{p} is not prime")));
            }
            for _ in 0..e {
                value = value
                    .checked_mul(p as u128)
                    .ok_or_else(|| Error::TooLarge("factored value exceeds 128 bits".into()))?;
            }
            prev = p;
        }
        Ok(FactoredInt { value, factors })
    }

    pub fn value(&self) -> u128 {
        self.value
    }

    /// `(prime, exponent)` pairs with primes increasing.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Exponents in prime order (not sorted).
    pub fn exponents(&self) -> Vec<u32> {
        self.factors.iter().map(|&(_, e)| e).collect()
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    /// Number of prime factors counted with multiplicity.
    pub fn big_omega(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    pub fn signature(&self) -> Signature {
        prime_signature(self)
    }

    pub fn is_one(&self) -> bool {
        self.value == 1
    }
}

impl fmt::Display for FactoredInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Prime factorization by trial division over the cached sieve.
pub fn factorize(n: u64) -> Result<FactoredInt> {
    if n == 0 {
        return Err(Error::invalid("cannot factorize 0"));
    }
    let mut rest = n;
    let mut factors = Vec::new();
    let root = (n as f64).sqrt() as u64 + 1;
    let mut push = |rest: &mut u64, p: u64| {
        let mut e = 0;
        while (*rest).is_multiple_of(p) {
            *rest /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    };
    let last_sieved = with_primes_covering(root, |primes| {
        for &p in primes {
            if p.saturating_mul(p) > rest {
                break;
            }
            push(&mut rest, p);
        }
        primes.last().copied().unwrap_or(2)
    });
    // Only reached for inputs whose square root exceeds the sieve.
    let mut d = last_sieved + 2;
    while d.saturating_mul(d) <= rest {
        push(&mut rest, d);
        d += 2;
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(FactoredInt { value: n as u128, factors })
}

pub fn prime_signature(fi: &FactoredInt) -> Signature {
    Signature::from_exponents(&fi.exponents())
}

/// Product of the first `n` primes.
pub fn primorial(n: usize) -> Result<FactoredInt> {
    FactoredInt::from_factors(first_primes(n).into_iter().map(|p| (p, 1)).collect())
}

/// Calls `f(c, i)` for every exponent vector `c != 0` and power `i >= 1`
/// with `i * c <= exps` componentwise, i.e. for every `d^i | n` with `d >= 2`
/// where `d` has exponent vector `c` in the prime order of `exps`.
pub fn for_each_divisor_power(exps: &[u32], mut f: impl FnMut(&[u32], u32)) {
    let max_e = exps.iter().copied().max().unwrap_or(0);
    let mut c = vec![0u32; exps.len()];
    for i in 1..=max_e {
        let bounds: Vec<u32> = exps.iter().map(|&e| e / i).collect();
        c.iter_mut().for_each(|x| *x = 0);
        // odometer over the box [0, bounds], skipping the origin
        loop {
            let mut pos = 0;
            loop {
                if pos == c.len() {
                    break;
                }
                if c[pos] < bounds[pos] {
                    c[pos] += 1;
                    break;
                }
                c[pos] = 0;
                pos += 1;
            }
            if pos == c.len() {
                break;
            }
            f(&c, i);
        }
    }
}

/// All `(d, i)` with `d >= 2`, `i >= 1` and `d^i | n`, sorted by `d` then `i`.
pub fn divisor_power_pairs(fi: &FactoredInt) -> Result<Vec<(u128, u32)>> {
    if fi.is_one() {
        return Err(Error::invalid("divisor_power_pairs requires n >= 2"));
    }
    let primes: Vec<u64> = fi.factors.iter().map(|&(p, _)| p).collect();
    let mut out = Vec::new();
    for_each_divisor_power(&fi.exponents(), |c, i| {
        let d = primes
            .iter()
            .zip(c)
            .fold(1u128, |acc, (&p, &e)| acc * (p as u128).pow(e));
        out.push((d, i));
    });
    out.sort_unstable();
    Ok(out)
}

/// All positive divisors of `fi`, ascending.
pub fn divisors(fi: &FactoredInt) -> Vec<u128> {
    let mut out = vec![1u128];
    for &(p, e) in &fi.factors {
        let len = out.len();
        let mut pk = 1u128;
        for _ in 0..e {
            pk *= p as u128;
            for idx in 0..len {
                out.push(out[idx] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Largest `m` with `pi^m | n`.
///
/// Panics if `pi < 2` or `n == 0`.
pub fn kappa(pi: u64, n: u64) -> u32 {
    assert!(pi >= 2 && n >= 1, "kappa needs pi >= 2 and n >= 1");
    let mut n = n;
    let mut m = 0;
    while n.is_multiple_of(pi) {
        n /= pi;
        m += 1;
    }
    m
}

/// Binomial coefficient, zero outside `0 <= k <= n`.
pub fn binomial(n: u64, k: i64) -> BigCount {
    if k < 0 || k as u64 > n {
        return BigCount::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigCount::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn smallest_prime_factor(n: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::invalid(format!("smallest_prime_factor needs n >= 2, got {n}")));
    }
    let fi = factorize(n)?;
    Ok(fi.factors[0].0)
}

/// Divides `num` by `den`, failing when the remainder is nonzero.
pub(crate) fn exact_div(num: BigInt, den: u64, context: &str) -> Result<BigInt> {
    let (q, r) = num.div_rem(&BigInt::from(den));
    if !r.is_zero() {
        return Err(Error::InexactDivision {
            context: context.to_string(),
            divisor: den.to_string(),
        });
    }
    Ok(q)
}

/// Converts a signed intermediate into a count, failing on negatives.
pub(crate) fn to_count(value: BigInt, context: &str) -> Result<BigCount> {
    match value.sign() {
        Sign::Minus => Err(Error::NegativeCount {
            context: context.to_string(),
            value: value.to_string(),
        }),
        _ => Ok(value.magnitude().clone()),
    }
}

/// Converts an exact rational sum into a count, failing unless it is a
/// nonnegative integer.
pub(crate) fn rational_to_count(value: &ExactRational, context: &str) -> Result<BigCount> {
    if !value.is_integer() {
        return Err(Error::NonIntegral {
            context: context.to_string(),
            value: value.to_string(),
        });
    }
    if value.is_negative() {
        return Err(Error::NegativeCount {
            context: context.to_string(),
            value: value.to_string(),
        });
    }
    Ok(value.numer().magnitude().clone())
}
