//! Exact counts of unordered factorizations of an integer, and of the
//! colored partitions behind them, each computed by several independent
//! routes so the routes can check one another.
//!
//! - [`arith`]: factorization, prime signatures, divisor-power enumeration
//! - [`partitions`]: partitions/compositions of the index `k`, their weights,
//!   and the Euler transform
//! - [`counting`]: `f`, `g`, `f_k`, `g_k`, `F_k`, `G_k`, `h_l`, `f_{k,l}` by
//!   partition sums, divisor recursions, kappa recursions and composition sums
//! - [`partition_counts`]: `p_{k,l}`, `r_l`, `r_{l,j}`, Stirling and Bell
//!   numbers, identity checkers
//! - [`oracle`]: brute-force enumeration used as ground truth
//! - [`cli`]: the `multifact` command line
//!
//! ```
//! use multifact::arith::factorize;
//! use multifact::counting::Counter;
//!
//! let n = factorize(36).unwrap();
//! let mut counter = Counter::new();
//! assert_eq!(counter.f_total(&n).unwrap(), 9u32.into());
//! assert_eq!(counter.h_l(&n, 2).unwrap(), 6u32.into());
//! ```

pub mod arith;
pub mod cli;
pub mod counting;
pub mod error;
pub mod oracle;
pub mod partition_counts;
pub mod partitions;

pub use arith::{factorize, BigCount, ExactRational, FactoredInt, Signature};
pub use counting::{CountFunction, CountQuery, Counter, Method};
pub use error::{Error, Result};
pub use partition_counts::PartitionCounter;
