//! The `multifact` command line: single queries, b-files, verification
//! sweeps and method benchmarks.
//!
//! Exit codes are 0 on success, 1 on a verification or integrality failure,
//! 2 on a usage error.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{factorize, BigCount, FactoredInt};
use crate::counting::{CountFunction, CountQuery, Counter, Method};
use crate::error::{Error, Result};
use crate::oracle;
use crate::partition_counts::{bell, check_identity, stirling2, IdentityId, PartitionCounter};
use crate::partitions::{euler_transform, multiplicity_vector, partitions_of};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable that overrides `--threads`.
pub const THREADS_ENV: &str = "MULTIFACT_THREADS";

/// The identities suite stops here: the composition checks grow like 2^n.
pub const IDENTITY_MAX: u32 = 12;

const FUNCTION_HELP: &str = "\
Functions (n is the integer being factored, or the partitioned integer for the partition-side functions):
  f          factorizations into parts >= 2
  g          factorizations into distinct parts >= 2
  f_k        ... with exactly k parts (--k)
  g_k        ... with exactly k distinct parts (--k)
  F_k        factorizations into exactly k parts >= 1 (--k)
  G_k        factorizations into exactly k distinct parts >= 1 (--k)
  h_l        factorizations with exactly l different part values (--l)
  f_kl       k parts taking exactly l different values (--k, --l)
  p_kl       partitions of n into k parts with l different values (--k, --l)
  r_l        partitions of n with l different values (--l)
  r_lj       ... with l different values, all parts >= j (--l, --j)
  stirling2  Stirling numbers of the second kind S(n, k) (--k)
  bell       Bell numbers B_n

Methods: partition-sum, recursion, kappa-recursion, fedorov, oracle";

#[derive(Debug, Parser)]
#[command(name = "multifact", version, about = "Exact counts of unordered factorizations", after_help = FUNCTION_HELP)]
struct Cli {
    /// Worker threads for verification sweeps (MULTIFACT_THREADS overrides)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Routes,
    Identities,
    Oracle,
    All,
}

#[derive(Debug, clap::Args)]
struct Indices {
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    l: Option<u32>,
    #[arg(long)]
    j: Option<u32>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute one value
    Compute {
        function: String,
        /// Integer argument; products of powers such as 2^20*3^10 are accepted
        n: String,
        #[command(flatten)]
        idx: Indices,
        #[arg(long)]
        method: Option<String>,
        /// Evaluate every available method and check they agree
        #[arg(long)]
        all_methods: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print a b-file: one "index value" line per index
    Bfile {
        function: String,
        #[arg(long)]
        max: u64,
        #[command(flatten)]
        idx: Indices,
        #[arg(long)]
        method: Option<String>,
    },
    /// Cross-check routes, identities and the brute-force oracle
    Verify {
        #[arg(long, default_value_t = 200)]
        max: u64,
        #[arg(long)]
        k_max: Option<u32>,
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
    },
    /// Time each method on one query
    Bench {
        function: String,
        n: String,
        #[command(flatten)]
        idx: Indices,
        /// Comma-separated methods; defaults to every available one
        #[arg(long, value_delimiter = ',')]
        methods: Vec<String>,
        #[arg(long, default_value_t = 5)]
        repeat: u32,
    },
}

/// Every function the CLI can evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Function {
    Count(CountFunction),
    PKl,
    RL,
    RLj,
    Stirling2,
    Bell,
}

impl Function {
    pub fn name(self) -> &'static str {
        match self {
            Function::Count(f) => f.name(),
            Function::PKl => "p_kl",
            Function::RL => "r_l",
            Function::RLj => "r_lj",
            Function::Stirling2 => "stirling2",
            Function::Bell => "bell",
        }
    }

    /// Partition-side functions take a plain index `n`, not an integer to factor.
    pub fn is_partition_side(self) -> bool {
        !matches!(self, Function::Count(_))
    }

    fn arity(self) -> (bool, bool, bool) {
        match self {
            Function::Count(f) => (f.takes_k(), f.takes_l(), false),
            Function::PKl => (true, true, false),
            Function::RL => (false, true, false),
            Function::RLj => (false, true, true),
            Function::Stirling2 => (true, false, false),
            Function::Bell => (false, false, false),
        }
    }

    pub fn methods(self) -> &'static [Method] {
        use Method::*;
        match self {
            Function::Count(f) => f.methods(),
            Function::PKl | Function::RL => &[Recursion, KappaRecursion, Oracle],
            Function::RLj => &[Recursion, Oracle],
            Function::Stirling2 | Function::Bell => &[Recursion, PartitionSum, Oracle],
        }
    }
}

impl fmt::Display for Function {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Function {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "p_kl" => Function::PKl,
            "r_l" => Function::RL,
            "r_lj" => Function::RLj,
            "stirling2" => Function::Stirling2,
            "bell" => Function::Bell,
            other => Function::Count(other.parse()?),
        })
    }
}

/// One computed value, as emitted in JSON Lines mode.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OutputRecord {
    pub function: String,
    pub n: String,
    pub k: Option<u32>,
    pub l: Option<u32>,
    pub j: Option<u32>,
    pub value: String,
    pub method: String,
}

/// Parses `n` as a decimal integer or a product of powers like `2^20*3^10`.
pub fn parse_n(s: &str) -> Result<FactoredInt> {
    let mut exps: std::collections::BTreeMap<u64, u32> = Default::default();
    for term in s.split('*') {
        let term = term.trim();
        let (base, exp) = match term.split_once('^') {
            Some((b, e)) => (b.trim(), e.trim()),
            None => (term, "1"),
        };
        let base: u64 = base
            .parse()
            .map_err(|_| Error::invalid(format!("cannot parse '{term}' as an integer")))?;
        let exp: u32 = exp
            .parse()
            .map_err(|_| Error::invalid(format!("cannot parse exponent in '{term}'")))?;
        if base == 0 {
            return Err(Error::invalid("n must be positive"));
        }
        for &(p, e) in factorize(base)?.factors() {
            *exps.entry(p).or_insert(0) += e * exp;
        }
    }
    FactoredInt::from_factors(exps.into_iter().filter(|&(_, e)| e > 0).collect())
}

fn parse_index(s: &str) -> Result<u32> {
    s.parse()
        .map_err(|_| Error::invalid(format!("cannot parse '{s}' as a nonnegative index")))
}

/// A fully specified request.
#[derive(Debug, Clone)]
pub struct Request {
    pub function: Function,
    pub n: FactoredInt,
    pub index: u32,
    pub k: Option<u32>,
    pub l: Option<u32>,
    pub j: Option<u32>,
}

impl Request {
    fn build(function: Function, n: &str, k: Option<u32>, l: Option<u32>, j: Option<u32>) -> Result<Self> {
        let (nk, nl, nj) = function.arity();
        for (needed, got, name) in [(nk, k, "k"), (nl, l, "l"), (nj, j, "j")] {
            if needed && got.is_none() {
                return Err(Error::invalid(format!("{function} needs --{name}")));
            }
            if !needed && got.is_some() {
                return Err(Error::invalid(format!("{function} does not take --{name}")));
            }
        }
        let (n, index) = if function.is_partition_side() {
            (FactoredInt::one(), parse_index(n)?)
        } else {
            (parse_n(n)?, 0)
        };
        Ok(Request { function, n, index, k, l, j })
    }

    fn n_string(&self) -> String {
        if self.function.is_partition_side() {
            self.index.to_string()
        } else {
            self.n.to_string()
        }
    }

    fn record(&self, value: &BigCount, method: Method) -> OutputRecord {
        OutputRecord {
            function: self.function.name().to_string(),
            n: self.n_string(),
            k: self.k,
            l: self.l,
            j: self.j,
            value: value.to_string(),
            method: method.name().to_string(),
        }
    }
}

/// Counter state for both sides of the library.
#[derive(Debug, Default)]
pub struct Evaluator {
    pub counter: Counter,
    pub partitions: PartitionCounter,
}

impl Evaluator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn evaluate(&mut self, req: &Request, method: Method) -> Result<BigCount> {
        if !req.function.methods().contains(&method) {
            return Err(Error::invalid(format!(
                "method {method} is not available for {}",
                req.function
            )));
        }
        let n = req.index;
        let k = req.k.unwrap_or(0);
        let l = req.l.unwrap_or(0);
        let j = req.j.unwrap_or(0);
        match (req.function, method) {
            (Function::Count(f), m) => {
                let q = CountQuery::new(f, req.n.clone(), req.k, req.l)?;
                self.counter.evaluate(&q, m)
            }
            (Function::PKl, Method::Recursion) => self.partitions.p_kl(n, k, l),
            (Function::PKl, Method::KappaRecursion) => self.counter.f_kl(&prime_power(n)?, k, l),
            (Function::PKl, _) => Ok(count_partitions(n, |p| p.len() == k as usize && p.distinct_values() == l as usize)),
            (Function::RL, Method::Recursion) => self.partitions.r_l(n, l),
            (Function::RL, Method::KappaRecursion) => self.counter.h_l(&prime_power(n)?, l),
            (Function::RL, _) => Ok(count_partitions(n, |p| p.distinct_values() == l as usize)),
            (Function::RLj, Method::Recursion) => self.partitions.r_lj(n, l, j),
            (Function::RLj, _) => {
                if j == 0 {
                    return Err(Error::invalid("r_lj needs j >= 1"));
                }
                Ok(count_partitions(n, |p| {
                    p.distinct_values() == l as usize && p.parts().iter().all(|&x| x >= j)
                }))
            }
            (Function::Stirling2, Method::Recursion) => Ok(stirling2(n, k)),
            (Function::Stirling2, Method::PartitionSum) => {
                let pn = crate::arith::primorial(n as usize)?;
                if k == 0 {
                    return Ok(BigCount::from(u8::from(n == 0)));
                }
                self.counter.f_from_big_f(&pn, k)
            }
            (Function::Stirling2, _) => {
                if n == 0 || k == 0 {
                    return Ok(BigCount::from(u8::from(n == k)));
                }
                let p = oracle::profile(primorial_u64(n)?)?;
                Ok(BigCount::from(p.f_k(k as usize)))
            }
            (Function::Bell, Method::Recursion) => Ok(bell(n)),
            (Function::Bell, Method::PartitionSum) => {
                if n == 0 {
                    return Ok(BigCount::from(1u8));
                }
                self.counter.f_total(&crate::arith::primorial(n as usize)?)
            }
            (Function::Bell, _) => {
                if n == 0 {
                    return Ok(BigCount::from(1u8));
                }
                Ok(BigCount::from(oracle::profile(primorial_u64(n)?)?.f))
            }
        }
    }
}

fn prime_power(n: u32) -> Result<FactoredInt> {
    if n == 0 {
        return Ok(FactoredInt::one());
    }
    FactoredInt::from_factors(vec![(2, n)])
}

fn primorial_u64(n: u32) -> Result<u64> {
    let p = crate::arith::primorial(n as usize)?;
    u64::try_from(p.value()).map_err(|_| Error::TooLarge(format!("P_{n} is beyond the oracle's range")))
}

fn count_partitions(n: u32, pred: impl Fn(&crate::partitions::Partition) -> bool) -> BigCount {
    BigCount::from(oracle::enumerate_partitions(n).iter().filter(|p| pred(p)).count())
}

fn exit_code(e: &Error) -> i32 {
    if e.is_internal() {
        EXIT_FAILURE
    } else {
        EXIT_USAGE
    }
}

fn thread_count(flag: Option<usize>) -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .or(flag)
        .filter(|&t| t > 0)
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

/// Parses `args` (including the program name) and runs the command, writing
/// to `out` and `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let threads = thread_count(cli.threads);
    let result = match cli.command {
        Command::Compute { function, n, idx, method, all_methods, format } => {
            compute(&function, &n, &idx, method.as_deref(), all_methods, format, out, err)
        }
        Command::Bfile { function, max, idx, method } => bfile(&function, max, &idx, method.as_deref(), out, err),
        Command::Verify { max, k_max, suite } => verify(max, k_max, suite, threads, out),
        Command::Bench { function, n, idx, methods, repeat } => bench(&function, &n, &idx, &methods, repeat, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn pick_method(function: Function, method: Option<&str>) -> Result<Method> {
    match method {
        None => Ok(function.methods()[0]),
        Some(m) => m.parse(),
    }
}

#[allow(clippy::too_many_arguments)]
fn compute(
    function: &str,
    n: &str,
    idx: &Indices,
    method: Option<&str>,
    all_methods: bool,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    let function: Function = function.parse()?;
    let req = Request::build(function, n, idx.k, idx.l, idx.j)?;
    let mut ev = Evaluator::new();
    let methods: Vec<Method> = if all_methods {
        function.methods().to_vec()
    } else {
        vec![pick_method(function, method)?]
    };
    let mut values = Vec::new();
    for &m in &methods {
        let v = ev.evaluate(&req, m)?;
        match format {
            Format::Json => emit_json(out, &req.record(&v, m)),
            Format::Text if all_methods => emit(out, format_args!("{m} {v}")),
            Format::Text => emit(out, format_args!("{v}")),
        }
        values.push(v);
    }
    if all_methods {
        let consistent = values.windows(2).all(|w| w[0] == w[1]);
        let verdict = if consistent { "consistent" } else { "INCONSISTENT" };
        match format {
            Format::Text => emit(out, format_args!("{verdict}")),
            Format::Json => emit(err, format_args!("{verdict}")),
        }
        if !consistent {
            return Ok(EXIT_FAILURE);
        }
    }
    Ok(EXIT_OK)
}

fn emit(w: &mut dyn Write, args: fmt::Arguments<'_>) {
    let _ = writeln!(w, "{args}");
}

fn emit_json(w: &mut dyn Write, rec: &OutputRecord) {
    let line = serde_json::to_string(rec).expect("records serialize");
    let _ = writeln!(w, "{line}");
}

fn bfile(
    function: &str,
    max: u64,
    idx: &Indices,
    method: Option<&str>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    let function: Function = function.parse()?;
    if max < 2 {
        return Err(Error::invalid("--max must be at least 2"));
    }
    let method = pick_method(function, method)?;
    let start = if function.is_partition_side() { 1 } else { 2 };
    emit(err, format_args!("offset {start}"));
    let mut ev = Evaluator::new();
    for i in start..=max {
        let req = Request::build(function, &i.to_string(), idx.k, idx.l, idx.j)?;
        let v = ev.evaluate(&req, method)?;
        emit(out, format_args!("{i} {v}"));
    }
    Ok(EXIT_OK)
}

/// Result of one suite: how many checks ran and the first failure in
/// `(n, k, l)` order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub passed: u64,
    pub failed: u64,
    pub first_failure: Option<String>,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        SuiteReport { name, ..Default::default() }
    }

    fn absorb(&mut self, part: Checks) {
        self.passed += part.passed;
        self.failed += part.failures.len() as u64;
        if self.first_failure.is_none() {
            self.first_failure = part.failures.into_iter().next();
        }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Debug, Default)]
struct Checks {
    passed: u64,
    failures: Vec<String>,
}

impl Checks {
    /// Records agreement of `values`; an evaluation error counts as a failure.
    fn agree(&mut self, label: impl FnOnce() -> String, values: Vec<(String, Result<BigCount>)>) {
        let ok = values.iter().all(|(_, v)| v.is_ok())
            && values.windows(2).all(|w| w[0].1.as_ref().ok() == w[1].1.as_ref().ok());
        if ok {
            self.passed += 1;
        } else {
            let shown: Vec<String> = values
                .into_iter()
                .map(|(m, v)| match v {
                    Ok(v) => format!("{m}={v}"),
                    Err(e) => format!("{m}=error({e})"),
                })
                .collect();
            self.failures.push(format!("{}: {}", label(), shown.join(" ")));
        }
    }

    fn merge(&mut self, other: Checks) {
        self.passed += other.passed;
        self.failures.extend(other.failures);
    }
}

fn route_checks(ev: &mut Evaluator, n: u64, k_max: Option<u32>) -> Checks {
    let mut checks = Checks::default();
    let fi = match factorize(n) {
        Ok(fi) => fi,
        Err(e) => {
            checks.failures.push(format!("n={n}: {e}"));
            return checks;
        }
    };
    let top = fi.big_omega() + 2;
    let top = k_max.map_or(top, |m| top.min(m));
    let all = |ev: &mut Evaluator, f: CountFunction, k: Option<u32>| -> Vec<(String, Result<BigCount>)> {
        let q = CountQuery::new(f, fi.clone(), k, None).expect("arity");
        f.methods()
            .iter()
            .map(|&m| (m.name().to_string(), ev.counter.evaluate(&q, m)))
            .collect()
    };
    for f in [CountFunction::F, CountFunction::G] {
        let values = all(ev, f, None);
        checks.agree(|| format!("{f} n={n}"), values);
    }
    for k in 0..=top {
        for f in [CountFunction::BigFk, CountFunction::Fk, CountFunction::BigGk, CountFunction::Gk] {
            let values = all(ev, f, Some(k));
            checks.agree(|| format!("{f} n={n} k={k}"), values);
        }
    }
    checks
}

fn oracle_checks(ev: &mut Evaluator, n: u64) -> Checks {
    let mut checks = Checks::default();
    let (fi, prof) = match factorize(n).and_then(|fi| Ok((fi, oracle::profile(n)?))) {
        Ok(x) => x,
        Err(e) => {
            checks.failures.push(format!("n={n}: {e}"));
            return checks;
        }
    };
    if let Err(e) = prof.check() {
        checks.failures.push(e);
    }
    let c = &mut ev.counter;
    let big = |v: u64| Ok(BigCount::from(v));
    checks.agree(|| format!("f n={n}"), vec![("oracle".into(), big(prof.f)), ("partition-sum".into(), c.f_total(&fi))]);
    checks.agree(|| format!("g n={n}"), vec![("oracle".into(), big(prof.g)), ("partition-sum".into(), c.g_total(&fi))]);
    let omega = fi.big_omega();
    for k in 0..=omega {
        let ku = k as usize;
        checks.agree(
            || format!("f_k n={n} k={k}"),
            vec![("oracle".into(), big(prof.f_k(ku))), ("recursion".into(), c.f_k_rec(&fi, k))],
        );
        checks.agree(
            || format!("g_k n={n} k={k}"),
            vec![("oracle".into(), big(prof.g_k(ku))), ("recursion".into(), c.g_k_rec(&fi, k))],
        );
        checks.agree(
            || format!("F_k n={n} k={k}"),
            vec![("oracle".into(), big(prof.big_f_k(ku))), ("partition-sum".into(), c.big_f(&fi, k))],
        );
        checks.agree(
            || format!("G_k n={n} k={k}"),
            vec![("oracle".into(), big(prof.big_g_k(ku))), ("partition-sum".into(), c.big_g(&fi, k))],
        );
        for l in 0..=k {
            checks.agree(
                || format!("f_kl n={n} k={k} l={l}"),
                vec![
                    ("oracle".into(), big(prof.f_kl(ku, l as usize))),
                    ("kappa-recursion".into(), c.f_kl(&fi, k, l)),
                ],
            );
        }
    }
    for l in 0..=omega {
        checks.agree(
            || format!("h_l n={n} l={l}"),
            vec![("oracle".into(), big(prof.h_l(l as usize))), ("kappa-recursion".into(), c.h_l(&fi, l))],
        );
    }
    checks
}

/// Partition-side checks against enumeration, for one `n`.
fn partition_oracle_checks(ev: &mut Evaluator, n: u32) -> Checks {
    let mut checks = Checks::default();
    let all = oracle::enumerate_partitions(n);
    for l in 0..=n {
        let want = all.iter().filter(|p| p.distinct_values() == l as usize).count() as u64;
        checks.agree(
            || format!("r_l n={n} l={l}"),
            vec![
                ("oracle".into(), Ok(BigCount::from(want))),
                ("recursion".into(), ev.partitions.r_l(n, l)),
                ("r_lj(j=1)".into(), ev.partitions.r_lj(n, l, 1)),
            ],
        );
        if want == 0 && l > 0 {
            break;
        }
        for k in l..=n {
            let want = all
                .iter()
                .filter(|p| p.len() == k as usize && p.distinct_values() == l as usize)
                .count() as u64;
            checks.agree(
                || format!("p_kl n={n} k={k} l={l}"),
                vec![("oracle".into(), Ok(BigCount::from(want))), ("recursion".into(), ev.partitions.p_kl(n, k, l))],
            );
        }
    }
    checks
}

/// Euler transform against colored-partition enumeration for every beta of
/// weight `k`, `m <= m_max`.
fn euler_checks(k: u32, m_max: u32) -> Checks {
    let mut checks = Checks::default();
    for p in partitions_of(k) {
        let b = multiplicity_vector(&p);
        let nu = euler_transform(&b, m_max as usize);
        for m in 1..=m_max {
            let direct = nu.as_ref().map(|v| v[m as usize - 1].clone()).map_err(Clone::clone);
            checks.agree(
                || format!("nu beta={b} m={m}"),
                vec![("euler-transform".into(), direct), ("oracle".into(), Ok(oracle::colored_partition_count(&b, m)))],
            );
        }
    }
    checks
}

fn identity_checks(n: u32, k_max: Option<u32>) -> Checks {
    let mut checks = Checks::default();
    let top_k = k_max.map_or(n, |m| m.min(n));
    for id in IdentityId::ALL {
        let ks: Vec<Option<u32>> = if id.takes_k() { (1..=top_k).map(Some).collect() } else { vec![None] };
        for k in ks {
            match check_identity(id, n, k) {
                Ok(r) if r.pass => checks.passed += 1,
                Ok(r) => checks.failures.push(r.to_string()),
                Err(e) => checks.failures.push(format!("{id} n={n} k={k:?}: {e}")),
            }
        }
    }
    checks
}

/// Specializations of the factorization recursions at prime powers.
fn specialization_checks(ev: &mut Evaluator, n: u32) -> Checks {
    let mut checks = Checks::default();
    for prime in [2u64, 3] {
        let pn = if n == 0 { FactoredInt::one() } else { FactoredInt::from_factors(vec![(prime, n)]).expect("fits") };
        for l in 0..=n {
            checks.agree(
                || format!("r_l vs h_l({prime}^{n}) l={l}"),
                vec![("recursion".into(), ev.partitions.r_l(n, l)), ("kappa-recursion".into(), ev.counter.h_l(&pn, l))],
            );
            for k in l..=n {
                checks.agree(
                    || format!("p_kl vs f_kl({prime}^{n}) k={k} l={l}"),
                    vec![
                        ("recursion".into(), ev.partitions.p_kl(n, k, l)),
                        ("kappa-recursion".into(), ev.counter.f_kl(&pn, k, l)),
                    ],
                );
            }
        }
    }
    checks
}

/// Runs `work` over `items` on the pool, one evaluator per worker, and
/// returns the per-item results in item order.
fn sweep<T, F>(items: Vec<T>, threads: Option<usize>, work: F) -> Vec<Checks>
where
    T: Send + Sync,
    F: Fn(&mut Evaluator, &T) -> Checks + Send + Sync,
{
    let job = || items.par_iter().map_init(Evaluator::new, |ev, item| work(ev, item)).collect();
    match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .expect("thread pool")
            .install(job),
        None => job(),
    }
}

/// Runs the requested suites and returns one report per suite.
pub fn run_suites(max: u64, k_max: Option<u32>, routes: bool, identities: bool, oracle_suite: bool, threads: Option<usize>) -> Vec<SuiteReport> {
    let mut reports = Vec::new();
    if routes {
        let mut rep = SuiteReport::new("routes");
        for part in sweep((2..=max).collect(), threads, |ev, &n| route_checks(ev, n, k_max)) {
            rep.absorb(part);
        }
        reports.push(rep);
    }
    if identities {
        let mut rep = SuiteReport::new("identities");
        let top = max.min(IDENTITY_MAX as u64) as u32;
        for part in sweep((1..=top).collect(), threads, |_, &n| identity_checks(n, k_max)) {
            rep.absorb(part);
        }
        let top = max.min(40) as u32;
        for part in sweep((0..=top).collect(), threads, |ev, &n| specialization_checks(ev, n)) {
            rep.absorb(part);
        }
        reports.push(rep);
    }
    if oracle_suite {
        let mut rep = SuiteReport::new("oracle");
        for part in sweep((2..=max).collect(), threads, |ev, &n| oracle_checks(ev, n)) {
            rep.absorb(part);
        }
        let top = max.min(40) as u32;
        for part in sweep((0..=top).collect(), threads, |ev, &n| partition_oracle_checks(ev, n)) {
            rep.absorb(part);
        }
        let m_max = max.min(25) as u32;
        let mut euler = Checks::default();
        for k in 1..=8.min(m_max) {
            euler.merge(euler_checks(k, m_max));
        }
        rep.absorb(euler);
        reports.push(rep);
    }
    reports
}

fn verify(max: u64, k_max: Option<u32>, suite: Suite, threads: Option<usize>, out: &mut dyn Write) -> Result<i32> {
    let all = suite == Suite::All;
    let reports = run_suites(
        max,
        k_max,
        all || suite == Suite::Routes,
        all || suite == Suite::Identities,
        all || suite == Suite::Oracle,
        threads,
    );
    let mut ok = true;
    for r in &reports {
        emit(out, format_args!("{}: {} passed, {} failed", r.name, r.passed, r.failed));
        if let Some(f) = &r.first_failure {
            emit(out, format_args!("  first failure: {f}"));
        }
        ok &= r.ok();
    }
    Ok(if ok { EXIT_OK } else { EXIT_FAILURE })
}

fn bench(function: &str, n: &str, idx: &Indices, methods: &[String], repeat: u32, out: &mut dyn Write) -> Result<i32> {
    let function: Function = function.parse()?;
    let req = Request::build(function, n, idx.k, idx.l, idx.j)?;
    if repeat == 0 {
        return Err(Error::invalid("--repeat must be at least 1"));
    }
    let methods: Vec<Method> = if methods.is_empty() {
        function.methods().to_vec()
    } else {
        methods.iter().map(|m| m.parse()).collect::<Result<_>>()?
    };
    let mut rows = Vec::new();
    for &m in &methods {
        let mut times = Vec::with_capacity(repeat as usize);
        let mut value = None;
        for _ in 0..repeat {
            // fresh caches so every repetition does the full work
            let mut ev = Evaluator::new();
            let t0 = Instant::now();
            let v = ev.evaluate(&req, m)?;
            times.push(t0.elapsed().as_secs_f64());
            value = Some(v);
        }
        rows.push((m, value.expect("repeat >= 1"), times));
    }
    if !rows.windows(2).all(|w| w[0].1 == w[1].1) {
        for (m, v, _) in &rows {
            emit(out, format_args!("{m} {v}"));
        }
        emit(out, format_args!("INCONSISTENT"));
        return Ok(EXIT_FAILURE);
    }
    emit(out, format_args!("{} n={} value={}", req.function, req.n_string(), rows[0].1));
    emit(out, format_args!("{:<16} {:>8} {:>14} {:>14}", "method", "runs", "min_ms", "mean_ms"));
    for (m, _, times) in &rows {
        let min = times.iter().copied().fold(f64::INFINITY, f64::min) * 1e3;
        let mean = times.iter().sum::<f64>() / times.len() as f64 * 1e3;
        emit(out, format_args!("{:<16} {:>8} {:>14.3} {:>14.3}", m.name(), times.len(), min, mean));
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_n_forms() {
        assert_eq!(parse_n("36").unwrap().value(), 36);
        assert_eq!(parse_n("2^20*3^10").unwrap().factors(), &[(2, 20), (3, 10)]);
        assert_eq!(parse_n("6*6").unwrap().factors(), &[(2, 2), (3, 2)]);
        assert_eq!(parse_n("1").unwrap().value(), 1);
        assert!(parse_n("0").is_err());
        assert!(parse_n("x").is_err());
        assert!(parse_n("2^x").is_err());
    }

    #[test]
    fn function_names() {
        for name in ["f", "g", "f_k", "g_k", "F_k", "G_k", "h_l", "f_kl", "p_kl", "r_l", "r_lj", "stirling2", "bell"] {
            assert_eq!(name.parse::<Function>().unwrap().name(), name);
        }
        assert!("fk".parse::<Function>().is_err());
    }

    #[test]
    fn request_arity() {
        assert!(Request::build(Function::Count(CountFunction::F), "36", Some(1), None, None).is_err());
        assert!(Request::build(Function::RLj, "7", None, Some(2), None).is_err());
        assert!(Request::build(Function::RLj, "7", None, Some(2), Some(2)).is_ok());
    }

    #[test]
    fn partition_side_methods_agree() {
        let mut ev = Evaluator::new();
        let cases = [
            (Function::PKl, "7", Some(3), Some(2), None, 3u64),
            (Function::RL, "5", None, Some(2), None, 5),
            (Function::RLj, "7", None, Some(2), Some(2), 3),
            (Function::Stirling2, "4", Some(2), None, None, 7),
            (Function::Bell, "5", None, None, None, 52),
        ];
        for (f, n, k, l, j, want) in cases {
            let req = Request::build(f, n, k, l, j).unwrap();
            for &m in f.methods() {
                assert_eq!(ev.evaluate(&req, m).unwrap(), BigCount::from(want), "{f} via {m}");
            }
        }
    }
}
